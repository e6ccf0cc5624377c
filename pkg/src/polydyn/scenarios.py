"""Seeded generators for the standard experiment classes.

Randomness comes from numpy's ``Generator`` over the PCG64 bit generator
(PCG XSL RR 128/64), seeded directly with the integer seed. Identical seeds
give bit-identical systems on every platform numpy supports.

Kinds of scenario:

``random-array``
    random strongly connected aperiodic ``W``, ``X(0)`` uniform in the unit
    m-box, uniform damping ``a``.
``one-value-A``
    as above with every ``a_ii`` equal (0.80 by default).
``two-value-A``
    as above with a seeded subset at ``a_high`` and the rest at ``a_low``
    (0.80 and 0.10 by default).
``polytope``
    points stacked on the vertices of a regular polygon, two or more per
    vertex.
``cleavage``
    a one-dimensional population: a moderate mass around a center plus
    extremists at two poles, with heterogeneous moderate damping.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.signal import find_peaks
from scipy.stats import truncnorm

__all__ = [
    "KINDS",
    "ScenarioSpec",
    "Histogram",
    "rng_from_seed",
    "random_strong_w",
    "uniform_damping",
    "two_value_damping",
    "regular_polygon",
    "polytope_init",
    "cleavage_scenario",
    "histogram",
    "count_modes",
    "build",
]

KINDS = ("random-array", "one-value-A", "two-value-A", "polytope", "cleavage")

CLEAVAGE_DEFAULTS = dict(
    n=250,
    extremist_fraction=0.1,
    moderate_center=2.0,
    moderate_spread=1.5,
    pole_low=-10.756,
    pole_high=13.655,
    a_moderate_range=(0.05, 0.95),
    a_extremist=0.98,
    extra_edge_prob=0.05,
)


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def random_strong_w(n: int, extra_edge_prob: float = 0.1, seed: int = 0) -> np.ndarray:
    """Random row-stochastic ``W`` whose graph is strongly connected and
    aperiodic.

    A Hamiltonian cycle through a random node order guarantees strong
    connectivity; each remaining ordered pair (self-loops included) gets an
    edge with probability `extra_edge_prob`; one random node always keeps a
    self-loop, which makes the graph aperiodic. Edge weights are drawn from
    U(0.1, 1) and rows are normalized.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= extra_edge_prob <= 1:
        raise ValueError("extra_edge_prob must lie in [0, 1]")
    rng = rng_from_seed(seed)
    order = rng.permutation(n)
    adj = rng.random((n, n)) < extra_edge_prob
    adj[order, np.roll(order, -1)] = True
    loop = rng.integers(n)
    adj[loop, loop] = True
    weights = rng.uniform(0.1, 1.0, size=(n, n))
    W = np.where(adj, weights, 0.0)
    return W / W.sum(axis=1, keepdims=True)


def uniform_damping(n: int, a: float = 0.8) -> np.ndarray:
    if not 0 <= a <= 1:
        raise ValueError("damping value must lie in [0, 1]")
    return np.full(n, float(a))


def two_value_damping(n: int, a_low: float = 0.1, a_high: float = 0.8,
                      high_fraction: float = 0.5, seed: int = 0) -> np.ndarray:
    """``round(high_fraction * n)`` random nodes at `a_high`, the rest at `a_low`."""
    if not (0 <= a_low <= 1 and 0 <= a_high <= 1):
        raise ValueError("damping values must lie in [0, 1]")
    if not 0 <= high_fraction <= 1:
        raise ValueError("high_fraction must lie in [0, 1]")
    rng = rng_from_seed(seed)
    a = np.full(n, float(a_low))
    a[rng.permutation(n)[: int(round(high_fraction * n))]] = a_high
    return a


def regular_polygon(v: int, radius: float = 1.0, phase: float = np.pi / 2) -> np.ndarray:
    """Vertices of a regular v-gon on a circle, as a ``(v, 2)`` array."""
    t = phase + 2 * np.pi * np.arange(v) / v
    return radius * np.column_stack([np.cos(t), np.sin(t)])


def polytope_init(vertices, assignment) -> np.ndarray:
    """Place point ``i`` on vertex ``assignment[i]``; every vertex must be used."""
    vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
    assignment = np.asarray(assignment)
    v = vertices.shape[0]
    if assignment.ndim != 1 or not np.issubdtype(assignment.dtype, np.integer):
        raise ValueError("assignment must be a vector of vertex indices")
    if np.any((assignment < 0) | (assignment >= v)):
        raise ValueError(f"vertex index out of range 0..{v - 1}")
    unused = np.setdiff1d(np.arange(v), assignment)
    if unused.size:
        raise ValueError(f"vacuous vertex: {unused.tolist()} not occupied")
    return vertices[assignment].copy()


def cleavage_scenario(n: int = CLEAVAGE_DEFAULTS["n"],
                      extremist_fraction: float = CLEAVAGE_DEFAULTS["extremist_fraction"],
                      moderate_center: float = CLEAVAGE_DEFAULTS["moderate_center"],
                      moderate_spread: float = CLEAVAGE_DEFAULTS["moderate_spread"],
                      pole_low: float = CLEAVAGE_DEFAULTS["pole_low"],
                      pole_high: float = CLEAVAGE_DEFAULTS["pole_high"],
                      a_moderate_range=CLEAVAGE_DEFAULTS["a_moderate_range"],
                      a_extremist: float = CLEAVAGE_DEFAULTS["a_extremist"],
                      seed: int = 0,
                      extra_edge_prob: float = CLEAVAGE_DEFAULTS["extra_edge_prob"]):
    """One-dimensional moderate-mass-plus-extremists population.

    Moderates draw initial opinions from a normal centered at
    `moderate_center` with standard deviation `moderate_spread`, truncated to
    ``[pole_low, pole_high]``, and damping uniformly from `a_moderate_range`.
    ``round(extremist_fraction * n)`` extremists are split between the two
    poles (the odd one goes high) with damping `a_extremist`. Roles are
    assigned to random nodes of a :func:`random_strong_w` network.

    Returns
    -------
    W : (n, n) ndarray
    a : (n,) ndarray
    X0 : (n, 1) ndarray
    """
    if not 0 <= extremist_fraction <= 1:
        raise ValueError("extremist_fraction must lie in [0, 1]")
    lo_a, hi_a = a_moderate_range
    if not 0 <= lo_a <= hi_a <= 1 or not 0 <= a_extremist <= 1:
        raise ValueError("damping values must lie in [0, 1]")
    if not pole_low < pole_high or not pole_low <= moderate_center <= pole_high:
        raise ValueError("need pole_low < pole_high with the center between them")
    if moderate_spread <= 0:
        raise ValueError("moderate_spread must be positive")

    # independent streams so W does not depend on the population parameters
    ss = np.random.SeedSequence(int(seed))
    w_seed, pop_seed = (int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(2))
    W = random_strong_w(n, extra_edge_prob, w_seed)
    rng = rng_from_seed(pop_seed)

    n_ext = int(round(extremist_fraction * n))
    roles = rng.permutation(n)
    ext, mod = roles[:n_ext], roles[n_ext:]
    x = np.empty(n)
    lo = (pole_low - moderate_center) / moderate_spread
    hi = (pole_high - moderate_center) / moderate_spread
    x[mod] = truncnorm.rvs(lo, hi, loc=moderate_center, scale=moderate_spread,
                           size=mod.size, random_state=rng)
    n_low = n_ext // 2
    x[ext[:n_low]] = pole_low
    x[ext[n_low:]] = pole_high

    a = np.empty(n)
    a[mod] = rng.uniform(lo_a, hi_a, size=mod.size)
    a[ext] = a_extremist
    return W, a, x[:, None]


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def histogram(X, bins: int = 20) -> Histogram:
    """Equal-width bins over ``[min, max]``; left-closed, last bin closed."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"histogram needs a single column, got m={X.shape[1]}")
        X = X[:, 0]
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts, edges = np.histogram(X, bins=bins)
    return Histogram(edges=edges, counts=counts)


def count_modes(hist: Histogram | np.ndarray, min_prominence: float = 1) -> int:
    """Number of local modes of a histogram.

    A mode is a run of equal bins higher than the bins on either side, the
    histogram being padded with empty bins at both ends. Modes whose
    topographic prominence is below `min_prominence` are ignored; the
    default counts every strict local maximum.
    """
    counts = hist.counts if isinstance(hist, Histogram) else np.asarray(hist)
    padded = np.concatenate([[0], counts, [0]]).astype(float)
    peaks, _ = find_peaks(padded, prominence=min_prominence)
    return len(peaks)


@dataclass
class ScenarioSpec:
    """JSON-serializable recipe for one generated system."""

    kind: str
    n: int
    m: int = 1
    seed: int = 0
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioSpec":
        unknown = set(d) - {"kind", "n", "m", "seed", "parameters"}
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        return cls(**d)


def build(spec: ScenarioSpec):
    """Generate ``(W, a, X0)`` for a scenario spec."""
    p = dict(spec.parameters)
    n, m, seed = spec.n, spec.m, spec.seed
    kind = spec.kind

    if kind == "cleavage":
        if m != 1:
            raise ValueError("cleavage scenarios are one-dimensional")
        kw = {k: p[k] for k in p if k in CLEAVAGE_DEFAULTS and k != "n"}
        if "a_moderate_range" in kw:
            kw["a_moderate_range"] = tuple(kw["a_moderate_range"])
        unknown = set(p) - set(CLEAVAGE_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown cleavage parameters: {sorted(unknown)}")
        return cleavage_scenario(n=n, seed=seed, **kw)

    ss = np.random.SeedSequence(int(seed))
    w_seed, x_seed, a_seed = (int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(3))
    W = random_strong_w(n, p.get("extra_edge_prob", 0.1), w_seed)

    if kind == "polytope":
        v = int(p.get("vertices", 3))
        if m != 2:
            raise ValueError("polytope scenarios are two-dimensional")
        if n < v:
            raise ValueError(f"need at least one point per vertex ({v})")
        rng = rng_from_seed(x_seed)
        assignment = np.concatenate([np.arange(v), rng.integers(0, v, n - v)])
        X0 = polytope_init(regular_polygon(v), rng.permutation(assignment))
        a = rng_from_seed(a_seed).uniform(*p.get("a_range", (0.05, 0.95)), size=n)
        return W, a, X0

    X0 = rng_from_seed(x_seed).uniform(0.0, 1.0, size=(n, m))
    if kind == "one-value-A":
        a = uniform_damping(n, p.get("a", 0.8))
    elif kind == "two-value-A":
        a = two_value_damping(n, p.get("a_low", 0.1), p.get("a_high", 0.8),
                              p.get("high_fraction", 0.5), a_seed)
    else:
        a = rng_from_seed(a_seed).uniform(*p.get("a_range", (0.05, 0.95)), size=n)
    return W, a, X0
