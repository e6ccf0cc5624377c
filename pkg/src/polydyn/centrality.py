"""Net-influence centrality.

Entry ``v_ij`` of the limit matrix ``V`` is the relative weight of node j's
initial state in node i's final state. Averaging down the columns gives the
share of the whole system's outcome that each node accounts for.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .stochastic import as_influence_matrix, structure_class

__all__ = ["net_influence", "alpha_centrality", "perron_centrality"]


def net_influence(V, tol: float = 1e-10) -> np.ndarray:
    """Column means ``r = V^T 1 / n`` of a row-stochastic limit matrix.

    Examples
    --------
    >>> net_influence([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    array([0.5, 0.5])
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise ValueError(f"V must be square, got shape {V.shape}")
    if np.any(V < -tol) or np.any(np.abs(V.sum(axis=1) - 1) > tol):
        raise ValueError("V is not row-stochastic")
    return V.mean(axis=0)


def alpha_centrality(W, alpha: float) -> np.ndarray:
    """Centrality for uniform damping ``A = alpha I``.

    Solves ``(I - alpha W^T) r = (1 - alpha) 1 / n`` directly, which is the
    fixed point ``r = (1 - alpha)/n + alpha W^T r``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in the open interval (0, 1)")
    W = as_influence_matrix(W)
    n = W.shape[0]
    rhs = np.full(n, (1.0 - alpha) / n)
    return scipy.linalg.solve(np.eye(n) - alpha * W.T, rhs)


def perron_centrality(W, tol: float = 1e-12, max_iter: int = 100_000) -> np.ndarray:
    """Left Perron eigenvector of an irreducible aperiodic ``W``, L1-normalized.

    Power iteration on ``W^T`` from the uniform vector, stopping when the
    relative L1 change falls below `tol`.

    Raises
    ------
    ValueError
        If ``W`` is reducible or periodic.
    RuntimeError
        If `max_iter` iterations do not reach `tol`.
    """
    W = as_influence_matrix(W)
    sc = structure_class(W)
    if not sc.strong:
        raise ValueError(f"W is reducible ({sc.connectivity}, "
                         f"{len(sc.components)} strong components)")
    if not sc.aperiodic:
        raise ValueError(f"W is periodic (period {sc.periods[0]})")
    n = W.shape[0]
    r = np.full(n, 1.0 / n)
    WT = W.T
    for _ in range(max_iter):
        new = WT @ r
        new /= new.sum()
        change = np.abs(new - r).sum() / np.abs(new).sum()
        r = new
        if change < tol:
            return r
    raise RuntimeError(f"power iteration did not converge in {max_iter} iterations")
