"""Inverse design: initial states and damping values that reach a target.

For strictly interior damping the limit map ``X(inf) = V X(0)`` is
invertible and

    X(0) = (I - A)^-1 (I - A W) X(inf),

so every target has a unique initial state for each choice of ``A``, and an
infinite family of ``{A, X(0)}`` pairs overall. The converse problem, finding
``A`` for given ``X(0)`` and ``X(inf)``, reduces to one scalar equation per
node and coordinate,

    x_ih(inf) - x_ih(0) = a_ii [ (W X(inf))_ih - x_ih(0) ],

which frequently has no admissible solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import closed_form_limit
from .stochastic import as_influence_matrix, as_state

__all__ = [
    "DIAGNOSES",
    "DesignSolution",
    "FeasibilityReport",
    "solve_initial",
    "solve_damping",
    "design_family",
    "unbiased_design",
    "affine_map",
    "forward_residual",
]

# stable diagnosis codes, in the order they are tested
DIAGNOSES = (
    "ok",
    "zero-denominator",
    "sign-mismatch",
    "magnitude-exceeded",
    "boundary",
    "cross-dimension-inconsistent",
)


@dataclass
class DesignSolution:
    a: np.ndarray
    X0: np.ndarray
    residual: float


@dataclass
class FeasibilityReport:
    """Outcome of :func:`solve_damping`.

    ``candidates`` holds the per-node damping value whenever the node's
    equations pin one down (even if it falls outside the open interval), and
    NaN otherwise. ``a`` is only set when the whole target is feasible.
    """

    feasible: bool
    a: np.ndarray | None
    per_node: tuple[str, ...]
    candidates: np.ndarray
    residual: float | None = None


def _strict(a, n):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.shape[0] != n:
        raise ValueError(f"damping must be a length-{n} vector")
    if not np.all((a > 0) & (a < 1)):
        raise ValueError("strict interior damping required: 0 < a_ii < 1")
    return a


def forward_residual(W, a, X0, X_inf) -> float:
    """Max-abs gap between the closed-form limit from ``X0`` and `X_inf`."""
    return float(np.max(np.abs(closed_form_limit(W, a, X0).X_inf - X_inf)))


def solve_initial(W, a, X_inf) -> np.ndarray:
    """The unique ``X(0)`` whose limit under ``{W, A}`` is `X_inf`.

    Examples
    --------
    >>> solve_initial([[0, 1], [1, 0]], [0.5, 0.5], [[0], [1]]).ravel()
    array([-1.,  2.])
    """
    W = as_influence_matrix(W)
    a = _strict(a, W.shape[0])
    X_inf = as_state(X_inf, W.shape[0])
    return (X_inf - a[:, None] * (W @ X_inf)) / (1.0 - a)[:, None]


def design_family(W, X_inf, a) -> DesignSolution:
    """One member of the infinite ``{A, X(0)}`` family for target `X_inf`.

    Each ``a_ii`` in ``(0, 1)`` fixes row ``i`` of ``X(0)`` as
    ``(x_ih(inf) - a_ii sum_j w_ij x_jh(inf)) / (1 - a_ii)``.
    """
    W = as_influence_matrix(W)
    a = _strict(a, W.shape[0])
    X_inf = as_state(X_inf, W.shape[0])
    X0 = solve_initial(W, a, X_inf)
    return DesignSolution(a=a, X0=X0, residual=forward_residual(W, a, X0, X_inf))


def unbiased_design(W, X_inf) -> DesignSolution:
    """The ``A = I/2`` member: ``X(0) = 2 X(inf) - W X(inf)``.

    Because halving and doubling are exact in binary floating point this
    agrees bit for bit with ``design_family(W, X_inf, 0.5)``.
    """
    W = as_influence_matrix(W)
    X_inf = as_state(X_inf, W.shape[0])
    a = np.full(W.shape[0], 0.5)
    X0 = 2.0 * X_inf - W @ X_inf
    return DesignSolution(a=a, X0=X0, residual=forward_residual(W, a, X0, X_inf))


def solve_damping(W, X0, X_inf, eps: float = 1e-9, consistency_tol: float = 1e-7,
                  zero_tol: float = 1e-12) -> FeasibilityReport:
    """Solve for damping values that carry `X0` to `X_inf`, or diagnose why
    none exist.

    For node ``i`` and coordinate ``h`` the candidate is

        a_ih = (x_ih(inf) - x_ih(0)) / ((W X(inf))_ih - x_ih(0)).

    A coordinate where numerator and denominator both vanish constrains
    nothing and is skipped. Node ``i`` is feasible when every remaining
    candidate is defined, they agree to `consistency_tol`, and they lie in
    ``(eps, 1 - eps)``. Numerators and denominators count as zero below
    ``zero_tol`` times the largest magnitude in the data (at least one).

    A node with no constraining coordinate admits any damping value; it is
    reported ``ok`` with the unbiased choice ``1/2``.

    Diagnoses, first failing test wins: ``zero-denominator`` (nonzero
    numerator over a zero denominator), ``sign-mismatch`` (negative
    candidate), ``magnitude-exceeded`` (candidate above one),
    ``boundary`` (candidate within `eps` of 0 or 1),
    ``cross-dimension-inconsistent`` (coordinates disagree).
    """
    W = as_influence_matrix(W)
    n = W.shape[0]
    X0 = as_state(X0, n)
    X_inf = as_state(X_inf, n)
    if X0.shape != X_inf.shape:
        raise ValueError(f"X0 has shape {X0.shape}, X_inf has {X_inf.shape}")

    scale = max(1.0, float(np.max(np.abs(X0), initial=0)), float(np.max(np.abs(X_inf), initial=0)))
    thresh = zero_tol * scale
    num = X_inf - X0
    den = W @ X_inf - X0

    per_node = []
    candidates = np.full(n, np.nan)
    for i in range(n):
        nz_num = np.abs(num[i]) > thresh
        nz_den = np.abs(den[i]) > thresh
        if np.any(nz_num & ~nz_den):
            per_node.append("zero-denominator")
            continue
        c = num[i, nz_den] / den[i, nz_den]
        if c.size == 0:
            candidates[i] = 0.5
            per_node.append("ok")
            continue
        if np.any(c < -eps):
            per_node.append("sign-mismatch")
            continue
        if np.any(c > 1 + eps):
            per_node.append("magnitude-exceeded")
            continue
        if np.any(c <= eps) or np.any(c >= 1 - eps):
            candidates[i] = float(np.median(c))
            per_node.append("boundary")
            continue
        if c.max() - c.min() > consistency_tol:
            per_node.append("cross-dimension-inconsistent")
            continue
        candidates[i] = float(c.mean())
        per_node.append("ok")

    feasible = all(d == "ok" for d in per_node)
    a = candidates.copy() if feasible else None
    residual = forward_residual(W, a, X0, X_inf) if feasible else None
    return FeasibilityReport(feasible=feasible, a=a, per_node=tuple(per_node),
                             candidates=candidates, residual=residual)


def affine_map(X, alpha: float, beta: float) -> np.ndarray:
    """``alpha + beta * X`` entrywise.

    Row-stochastic ``V`` commutes with this map, so transforming the
    initial state transforms the limit the same way.
    """
    return alpha + beta * np.asarray(X, dtype=float)
