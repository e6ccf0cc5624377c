"""Forward evolution of the second-order convex-combination process.

The process is

    X(k+1) = A W X(k) + (I - A) X(0),

with ``A = diag(a)``. Every state is ``X(k) = V(k) X(0)`` where the matrix
polynomial ``V(k) = A W V(k-1) + (I - A)``, ``V(0) = I``, stays
row-stochastic, so all states remain inside the convex hull of ``X(0)``.
"""

from __future__ import annotations

import logging
import warnings
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.linalg import lapack
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .stochastic import as_damping, as_influence_matrix, as_state, structure_class

__all__ = [
    "RCOND_MIN",
    "ConvergenceClass",
    "Trajectory",
    "LimitResult",
    "SingularSystemError",
    "step",
    "evolve_v",
    "spectral_radius_bounds",
    "classify",
    "closed_form_limit",
    "iterate",
    "neumann_limit",
    "neumann_order",
]

logger = logging.getLogger(__name__)

RCOND_MIN = 1e-12
OSCILLATION_WINDOW = 100


class SingularSystemError(ArithmeticError):
    """``I - AW`` is numerically singular, so there is no closed-form limit."""


@dataclass(frozen=True)
class ConvergenceClass:
    case: str
    converges: bool
    reason: str
    spectral_radius_estimate: float | None = None
    spectral_radius_bounds: tuple[float, float] | None = None
    rcond: float | None = None

    @property
    def closed_form(self) -> bool:
        """Whether ``I - AW`` is invertible at the ``RCOND_MIN`` threshold."""
        return self.rcond is not None and self.rcond > RCOND_MIN


@dataclass
class Trajectory:
    states: np.ndarray  # (K, n, m)
    steps: np.ndarray  # (K,)
    converged: bool
    final_delta: float
    periodic_suspect: bool = False

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def k(self) -> int:
        return int(self.steps[-1])


@dataclass
class LimitResult:
    V: np.ndarray | None
    X_inf: np.ndarray
    method: str
    diagnostics: dict = field(default_factory=dict)


def _check(W, a, X=None):
    W = as_influence_matrix(W)
    a = as_damping(a, W.shape[0])
    if X is None:
        return W, a
    return W, a, as_state(X, W.shape[0])


def step(W, a, Xk, X0):
    """One application of the process: ``A W X(k) + (I - A) X(0)``.

    Examples
    --------
    >>> step([[0, 1], [1, 0]], [0.5, 0.5], [[0], [1]], [[0], [1]]).ravel()
    array([0.5, 0.5])
    """
    W, a, Xk = _check(W, a, Xk)
    X0 = as_state(X0, W.shape[0])
    if X0.shape != Xk.shape:
        raise ValueError(f"X(k) has shape {Xk.shape}, X(0) has {X0.shape}")
    return _step(W, a, Xk, X0)


def _step(W, a, Xk, X0):
    return a[:, None] * (W @ Xk) + (1.0 - a)[:, None] * X0


def evolve_v(W, a, k: int) -> np.ndarray:
    """The matrix polynomial ``V(k)`` by its recursion from ``V(0) = I``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    W, a = _check(W, a)
    n = W.shape[0]
    V = np.eye(n)
    I = np.eye(n)
    for _ in range(k):
        V = _step(W, a, V, I)
    return V


def _cw_bracket(M, max_iter, tol):
    n = M.shape[0]
    x = np.full(n, 1.0 / n)
    lo, hi = 0.0, np.inf
    S = M + np.eye(n)
    for _ in range(max_iter):
        r = (M @ x) / x
        lo, hi = max(lo, float(r.min())), min(hi, float(r.max()))
        if hi - lo <= tol:
            break
        x = S @ x
        x /= x.sum()
        # guard against underflow on components fed only through the shift
        np.maximum(x, np.finfo(float).tiny, out=x)
    return lo, hi


def spectral_radius_bounds(M, max_iter: int = 1000, tol: float = 1e-12):
    """Collatz-Wielandt bracket ``(lower, upper)`` on the spectral radius of a
    nonnegative matrix.

    The spectral radius is the largest over the diagonal blocks of the
    strongly connected components, so the bracket is computed per block and
    the maxima are returned. Each block is irreducible, which makes power
    iteration on ``B + I`` converge to a strictly positive vector and the
    bracket ``min_i (Bx)_i / x_i <= rho(B) <= max_i (Bx)_i / x_i`` close.
    """
    M = np.asarray(M, dtype=float)
    _, labels = connected_components(csr_matrix(M > 0), directed=True, connection="strong")
    lo = hi = 0.0
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        B = M[np.ix_(idx, idx)]
        if idx.size == 1:
            l = h = float(B[0, 0])
        else:
            l, h = _cw_bracket(B, max_iter, tol)
        lo, hi = max(lo, l), max(hi, h)
    return lo, hi


def _lu_rcond(M):
    """Pivoted LU of `M` and the LAPACK estimate of its reciprocal 1-norm
    condition number (0 for exactly singular `M`)."""
    with warnings.catch_warnings():
        # singularity is reported through rcond
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    anorm = np.linalg.norm(M, 1)
    if anorm == 0:
        return (lu, piv), 0.0
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    return (lu, piv), (float(rcond) if info == 0 else 0.0)


def classify(W, a) -> ConvergenceClass:
    """Identify the convergence case of ``{V(k)}`` from ``A`` and the
    structure of ``W``.

    The sequence converges iff ``(AW)^k`` does. A strongly connected class of
    ``AW`` reaches spectral radius one only when it is closed in ``W`` and
    every node in it has ``a_ii = 1``; all other classes are strictly
    substochastic. Convergence therefore holds iff every such closed,
    fully-undamped class is aperiodic. The spectral radius and the
    conditioning of ``I - AW`` are reported as numerical diagnostics.
    """
    W, a = _check(W, a)
    n = W.shape[0]

    if np.all(a == 0):
        return ConvergenceClass("identity", True, "A = 0: V = I and X(inf) = X(0)",
                                0.0, (0.0, 0.0), 1.0)

    M = a[:, None] * W
    lo, hi = spectral_radius_bounds(M)
    rho = 0.5 * (lo + hi)
    _, rcond = _lu_rcond(np.eye(n) - M)

    if np.all(a < 1):
        return ConvergenceClass(
            "strictly-substochastic", True,
            "A < I: rho(AW) < 1, V = (I - AW)^-1 (I - A)",
            rho, (lo, hi), rcond)

    sc = structure_class(W)
    critical = [(c, p) for c, p in zip(sc.terminal_components, sc.periods)
                if np.all(a[list(c)] == 1)]
    periodic = [(c, p) for c, p in critical if p != 1]
    case = "stochastic" if np.all(a == 1) else "substochastic-mixed"
    if periodic:
        c, p = periodic[0]
        nodes = ", ".join(str(i + 1) for i in c)
        reason = (f"closed class {{{nodes}}} with a_ii = 1 has period {p}: "
                  "unit-modulus eigenvalues other than 1")
        return ConvergenceClass(case, False, reason, rho, (lo, hi), rcond)
    if critical:
        reason = (f"{len(critical)} closed aperiodic class(es) with a_ii = 1: "
                  "eigenvalue 1 only on the unit circle")
    else:
        reason = "no closed class with a_ii = 1: rho(AW) < 1, I - AW nonsingular"
    return ConvergenceClass(case, True, reason, rho, (lo, hi), rcond)


def closed_form_limit(W, a, X0) -> LimitResult:
    """``V = (I - AW)^-1 (I - A)`` by pivoted LU, and ``X(inf) = V X(0)``.

    Raises
    ------
    SingularSystemError
        If the reciprocal condition number of ``I - AW`` is at or below
        ``RCOND_MIN``; use :func:`classify` and :func:`iterate` instead.

    Examples
    --------
    >>> res = closed_form_limit([[0, 1], [1, 0]], [0.5, 0.5], [[0], [1]])
    >>> np.round(res.V * 3, 12)
    array([[2., 1.],
           [1., 2.]])
    """
    W, a, X0 = _check(W, a, X0)
    n = W.shape[0]
    M = np.eye(n) - a[:, None] * W
    lu_piv, rcond = _lu_rcond(M)
    if not rcond > RCOND_MIN:
        raise SingularSystemError(
            "limit does not exist in closed form: I - AW is singular "
            f"(rcond={rcond:.3g}); see classify()")
    V = scipy.linalg.lu_solve(lu_piv, np.diag(1.0 - a), check_finite=False)
    return LimitResult(V=V, X_inf=V @ X0, method="closed-form",
                       diagnostics={"rcond": rcond})


def iterate(W, a, X0, tol: float = 1e-10, k_max: int = 1_000_000,
            record_every: int | None = None, track_v: bool = True):
    """Run the process until the largest componentwise change drops below
    `tol` or `k_max` steps have been taken.

    Parameters
    ----------
    W, a, X0 : array_like
        Influence matrix, damping diagonal and initial state.
    tol : float
        Stopping threshold on ``max |X(k+1) - X(k)|``. With `track_v` the
        change of ``V(k)`` counts as well.
    k_max : int
        Step budget. Running out is reported, not raised.
    record_every : int, optional
        Snapshot stride. Defaults to 1 when ``n*m <= 10**4``, else 10. The
        initial and final states are always recorded.
    track_v : bool
        Carry ``V(k)`` alongside the state (same recursion applied to the
        identity) so the returned limit includes ``V``.

    Returns
    -------
    trajectory : Trajectory
    limit : LimitResult
        ``method == "iterative"``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    W, a, X0 = _check(W, a, X0)
    n, m = X0.shape
    if record_every is None:
        record_every = 1 if n * m <= 10_000 else 10
    if record_every < 1:
        raise ValueError("record_every must be >= 1")

    # X(k) and V(k) obey the same recursion with anchors X(0) and I
    Z0 = np.hstack([X0, np.eye(n)]) if track_v else X0
    Z = Z0.copy()
    states = [X0.copy()]
    steps = [0]
    deltas: deque[float] = deque(maxlen=OSCILLATION_WINDOW + 1)
    delta = np.inf
    converged = False
    k = 0
    while k < k_max:
        Znew = _step(W, a, Z, Z0)
        delta = float(np.max(np.abs(Znew - Z))) if Z.size else 0.0
        Z = Znew
        k += 1
        deltas.append(delta)
        if delta < tol:
            converged = True
            break
        if k % record_every == 0:
            states.append(Z[:, :m].copy())
            steps.append(k)
    if steps[-1] != k:
        states.append(Z[:, :m].copy())
        steps.append(k)

    periodic = (not converged and len(deltas) == deltas.maxlen
                and not deltas[-1] < deltas[0])

    traj = Trajectory(states=np.stack(states), steps=np.asarray(steps),
                      converged=converged, final_delta=delta,
                      periodic_suspect=periodic)
    diag = {"k": k, "converged": converged, "final_delta": delta,
            "tol": tol, "periodic_suspect": periodic}
    if periodic:
        logger.warning("no convergence after %d steps; delta not decreasing "
                       "over the last %d steps (periodic suspect)", k, OSCILLATION_WINDOW)
    limit = LimitResult(V=Z[:, m:].copy() if track_v else None,
                        X_inf=Z[:, :m].copy(), method="iterative", diagnostics=diag)
    return traj, limit


def neumann_limit(W, a, K: int) -> np.ndarray:
    """Partial Neumann sum ``[sum_{k=0}^{K} (AW)^k] (I - A)``.

    Requires ``a_ii < 1`` everywhere, where ``rho(AW) < 1`` and the full
    series equals ``(I - AW)^-1 (I - A)``.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    W, a = _check(W, a)
    if np.any(a >= 1):
        raise ValueError("series convergence not guaranteed: some a_ii = 1")
    M = a[:, None] * W
    term = np.diag(1.0 - a)
    total = term.copy()
    for _ in range(K):
        term = M @ term
        total += term
    return total


def neumann_order(rho: float, tol: float = 1e-14) -> int:
    """Smallest ``K`` with ``rho**K < tol``."""
    if not 0 <= rho < 1:
        raise ValueError("rho must lie in [0, 1)")
    if rho == 0:
        return 1
    return int(np.floor(np.log(tol) / np.log(rho))) + 1
