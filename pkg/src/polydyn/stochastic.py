"""Core matrix conventions, validation and structural graph analysis.

Matrices are plain :class:`numpy.ndarray` objects throughout the package:

* influence matrix ``W`` -- ``(n, n)`` nonnegative, rows summing to one;
* damping vector ``a`` -- length ``n``, entries in ``[0, 1]`` (the diagonal
  of the damping matrix ``A``);
* state matrix ``X`` -- ``(n, m)`` finite real coordinates, one row per point.

The directed graph of ``W`` has an edge ``i -> j`` whenever ``w_ij > 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "ROW_SUM_TOL",
    "ValidationReport",
    "StructureClass",
    "BoundingBox",
    "as_influence_matrix",
    "as_damping",
    "as_state",
    "validate_system",
    "structure_class",
    "bounding_box",
    "contains",
]

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ValidationReport:
    """Violated invariants of a ``{W, A, X(0)}`` system; empty means valid."""

    violations: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class StructureClass:
    """Connectivity class and periodicity of the graph of ``W``.

    ``periods`` holds the period of every terminal (closed) strongly
    connected component, in the order of ``terminal_components``. For an
    irreducible matrix there is exactly one. ``aperiodic`` is true when all
    of them equal one.
    """

    connectivity: str
    aperiodic: bool
    has_positive_diagonal: bool
    components: tuple[tuple[int, ...], ...] = field(default=())
    terminal_components: tuple[tuple[int, ...], ...] = field(default=())
    periods: tuple[int, ...] = field(default=())

    @property
    def strong(self) -> bool:
        return self.connectivity == "strong"

    @property
    def irreducible_aperiodic(self) -> bool:
        return self.strong and self.aperiodic


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned m-box: per-column minima ``lo`` and maxima ``hi``."""

    lo: np.ndarray
    hi: np.ndarray

    @property
    def m(self) -> int:
        return self.lo.shape[0]


def as_influence_matrix(W, tol: float = ROW_SUM_TOL) -> np.ndarray:
    """Return ``W`` as a float array, checked and row-renormalized.

    Rows whose sums deviate from one by at most `tol` are rescaled to sum to
    one; the adjustment is logged. Anything else raises ``ValueError``.
    """
    W = np.array(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] == 0:
        raise ValueError(f"influence matrix must be square and nonempty, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise ValueError("influence matrix has non-finite entries")
    if np.any(W < 0):
        raise ValueError("influence matrix has negative entries")
    sums = W.sum(axis=1)
    bad = np.abs(sums - 1.0) > tol
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"row {i + 1} sums to {sums[i]!r}, not 1")
    # only touch rows that are off by more than rounding noise, so exact
    # round-trips stay bit-identical
    drift = np.abs(sums - 1.0) > 4 * W.shape[0] * np.finfo(float).eps
    if np.any(drift):
        logger.info("renormalized %d row(s) of W (max drift %.3g)",
                    int(drift.sum()), float(np.abs(sums - 1.0).max()))
        W[drift] /= sums[drift, None]
    return W


def as_damping(a, n: int | None = None) -> np.ndarray:
    """Return the damping diagonal as a length-n float vector.

    Accepts either the vector itself or a square diagonal matrix.
    """
    a = np.array(a, dtype=float)
    if a.ndim == 2:
        if a.shape[0] != a.shape[1] or np.any(a - np.diag(np.diag(a))):
            raise ValueError("damping matrix must be diagonal")
        a = np.diag(a).copy()
    if a.ndim != 1:
        raise ValueError(f"damping must be a vector, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise ValueError(f"damping has length {a.shape[0]}, expected {n}")
    if not np.all(np.isfinite(a)) or np.any(a < 0) or np.any(a > 1):
        raise ValueError("damping values must lie in [0, 1]")
    return a


def as_state(X, n: int | None = None) -> np.ndarray:
    """Return a state as an ``(n, m)`` float array; 1-d input becomes one column."""
    X = np.array(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"state must be 2-d, got shape {X.shape}")
    if n is not None and X.shape[0] != n:
        raise ValueError(f"state has {X.shape[0]} rows, expected {n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("state has non-finite entries")
    return X


def validate_system(W, a, X0, tol: float = ROW_SUM_TOL) -> ValidationReport:
    """Collect every violated constraint of ``{W, A, X(0)}`` without raising.

    Examples
    --------
    >>> validate_system([[0, 1], [1, 0]], [0.5, 0.5], [[0], [1]]).valid
    True
    >>> validate_system([[0.9, 0], [0, 1]], [0.5, 0.5], [[0], [1]]).violations
    ('row 1 sums to 0.9',)
    """
    out: list[str] = []
    W = np.asarray(W, dtype=float)
    a = np.asarray(a, dtype=float)
    X0 = np.asarray(X0, dtype=float)
    if X0.ndim == 1:
        X0 = X0[:, None]

    square = W.ndim == 2 and W.shape[0] == W.shape[1]
    if not square:
        out.append(f"W is not square: shape {W.shape}")
    else:
        n = W.shape[0]
        if not np.all(np.isfinite(W)):
            out.append("W has non-finite entries")
        for i, j in zip(*np.nonzero(W < 0)):
            out.append(f"w_{i + 1}{j + 1} is negative ({W[i, j]:g})")
        sums = W.sum(axis=1)
        for i in range(n):
            if not np.any(W[i] > 0):
                out.append(f"row {i + 1} is zero")
            elif abs(sums[i] - 1.0) > tol:
                out.append(f"row {i + 1} sums to {sums[i]:.12g}")

    if a.ndim != 1:
        out.append(f"A diagonal is not a vector: shape {a.shape}")
    else:
        for i in np.nonzero(~((a >= 0) & (a <= 1)))[0]:
            out.append(f"a_{i + 1}{i + 1} out of [0,1] ({a[i]:g})")
        if square and a.shape[0] != W.shape[0]:
            out.append(f"A has length {a.shape[0]}, W has n={W.shape[0]}")

    if X0.ndim != 2:
        out.append(f"X0 is not a matrix: shape {X0.shape}")
    else:
        if not np.all(np.isfinite(X0)):
            out.append("X0 has non-finite entries")
        if square and X0.shape[0] != W.shape[0]:
            out.append(f"X0 has {X0.shape[0]} rows, W has n={W.shape[0]}")
    return ValidationReport(tuple(out))


def _bfs_levels(adj: np.ndarray) -> np.ndarray:
    level = np.full(adj.shape[0], -1, dtype=np.int64)
    level[0] = 0
    frontier = np.zeros(adj.shape[0], dtype=bool)
    frontier[0] = True
    depth = 0
    while frontier.any():
        depth += 1
        frontier = adj[frontier].any(axis=0) & (level < 0)
        level[frontier] = depth
    return level


def _period(adj: np.ndarray, nodes: np.ndarray) -> int:
    # gcd of (level[u] + 1 - level[v]) over edges inside the component,
    # with BFS levels from an arbitrary root
    sub = adj[np.ix_(nodes, nodes)]
    if not sub.any():
        return 0
    level = _bfs_levels(sub)
    u, v = np.nonzero(sub)
    return int(np.gcd.reduce(np.abs(level[u] + 1 - level[v])))


def structure_class(W) -> StructureClass:
    """Classify connectivity and periodicity of the digraph of ``W``.

    Connectivity is ``strong`` (one strongly connected component),
    ``unilateral`` (the condensation is a single path, so every ordered pair
    is reachable in at least one direction), ``weak`` (connected when edge
    directions are ignored) or ``disconnected``.

    Periods are computed structurally from breadth-first levels, never from
    eigenvalues.

    Examples
    --------
    >>> structure_class([[0, 1], [1, 0]]).periods
    (2,)
    >>> structure_class([[1, 0], [0.5, 0.5]]).connectivity
    'unilateral'
    """
    W = np.asarray(W, dtype=float)
    adj = W > 0
    n = adj.shape[0]
    g = csr_matrix(adj.astype(np.int8))
    ncomp, labels = connected_components(g, directed=True, connection="strong")
    comps = [np.flatnonzero(labels == c) for c in range(ncomp)]

    # condensation edges between distinct components
    u, v = np.nonzero(adj)
    cu, cv = labels[u], labels[v]
    cross = cu != cv
    dag = np.zeros((ncomp, ncomp), dtype=bool)
    dag[cu[cross], cv[cross]] = True
    terminal = [c for c in range(ncomp) if not dag[c].any()]

    if ncomp == 1:
        connectivity = "strong"
    elif _has_hamiltonian_path(dag):
        connectivity = "unilateral"
    else:
        nweak, _ = connected_components(g, directed=True, connection="weak")
        connectivity = "weak" if nweak == 1 else "disconnected"

    periods = tuple(_period(adj, comps[c]) for c in terminal)
    return StructureClass(
        connectivity=connectivity,
        aperiodic=all(p == 1 for p in periods),
        has_positive_diagonal=bool(np.any(np.diag(W) > 0)),
        components=tuple(tuple(int(i) for i in c) for c in comps),
        terminal_components=tuple(tuple(int(i) for i in comps[c]) for c in terminal),
        periods=periods,
    )


def _has_hamiltonian_path(dag: np.ndarray) -> bool:
    # A DAG has a Hamiltonian path iff its topological order is unique,
    # i.e. Kahn's algorithm never sees two sources at once.
    indeg = dag.sum(axis=0).astype(int)
    ready = [c for c in range(dag.shape[0]) if indeg[c] == 0]
    while ready:
        if len(ready) > 1:
            return False
        c = ready.pop()
        for d in np.flatnonzero(dag[c]):
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(int(d))
    return True


def bounding_box(X) -> BoundingBox:
    """Per-column minima and maxima of a state matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.size == 0:
        raise ValueError("empty state")
    return BoundingBox(lo=X.min(axis=0), hi=X.max(axis=0))


def contains(box: BoundingBox, X, tol: float = 0.0) -> bool:
    """True iff every entry of column h lies in ``[lo_h - tol, hi_h + tol]``."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != box.m:
        raise ValueError(f"state has {X.shape[1]} columns, box has {box.m}")
    return bool(np.all(X >= box.lo - tol) and np.all(X <= box.hi + tol))
