import numpy as np
import pytest

from polydyn.scenarios import random_strong_w

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def random_w(rng, n, density=0.4, strong=False):
    """Random row-stochastic matrix; optionally strongly connected and aperiodic."""
    if strong:
        return random_strong_w(n, density, int(rng.integers(2**63)))
    adj = rng.random((n, n)) < density
    adj[np.arange(n), rng.integers(0, n, n)] = True  # no zero rows
    W = np.where(adj, rng.uniform(0.1, 1, (n, n)), 0.0)
    return W / W.sum(axis=1, keepdims=True)


def random_system(rng, n=None, m=None, strict=True, strong=True):
    n = n or int(rng.integers(2, 21))
    m = m or int(rng.integers(1, 4))
    W = random_w(rng, n, strong=strong)
    a = rng.uniform(0.05, 0.95, n) if strict else rng.uniform(0, 1, n)
    X0 = rng.normal(0, 3, (n, m))
    return W, a, X0


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def swap():
    return SWAP.copy()
