import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydyn.centrality import alpha_centrality, net_influence, perron_centrality
from polydyn.dynamics import closed_form_limit

from conftest import SWAP, random_w


def test_net_influence_examples():
    assert np.allclose(net_influence([[2 / 3, 1 / 3], [1 / 3, 2 / 3]]), [0.5, 0.5])
    assert np.allclose(net_influence(np.eye(4)), 0.25)
    p = np.array([0.1, 0.6, 0.3])
    assert np.allclose(net_influence(np.tile(p, (3, 1))), p, atol=1e-15)


def test_net_influence_rejects_non_stochastic():
    with pytest.raises(ValueError):
        net_influence([[0.5, 0.4], [0.5, 0.5]])


def test_alpha_centrality_swap():
    # fixed point check: 0.25 + 0.5 * 0.5 = 0.5
    assert np.allclose(alpha_centrality(SWAP, 0.5), [0.5, 0.5], atol=1e-15)


def test_alpha_centrality_doubly_stochastic_is_uniform(rng):
    P = [np.eye(5)[rng.permutation(5)] for _ in range(3)]
    W = sum(w * p for w, p in zip([0.2, 0.3, 0.5], P))
    for alpha in (0.1, 0.5, 0.95):
        assert np.allclose(alpha_centrality(W, alpha), 0.2, atol=1e-14)


@pytest.mark.parametrize("alpha", [0, 1, -0.1, 1.5])
def test_alpha_centrality_rejects_closed_interval(alpha):
    with pytest.raises(ValueError):
        alpha_centrality(SWAP, alpha)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.99))
def test_alpha_centrality_properties(seed, alpha):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 15))
    W = random_w(rng, n, strong=bool(seed % 2))
    r = alpha_centrality(W, alpha)
    assert abs(r.sum() - 1) < 1e-10
    assert np.abs(r - (1 - alpha) / n - alpha * W.T @ r).max() < 1e-10
    V = closed_form_limit(W, np.full(n, alpha), np.zeros((n, 1))).V
    assert np.abs(net_influence(V) - r).max() < 1e-10


def test_perron_examples(rng):
    assert np.allclose(perron_centrality([[0.5, 0.5], [1, 0]]), [2 / 3, 1 / 3], atol=1e-12)
    W = 0.5 * np.eye(4) + 0.5 * np.eye(4)[[1, 2, 3, 0]]
    assert np.allclose(perron_centrality(W), 0.25, atol=1e-12)


def test_perron_matches_matrix_powers(rng):
    for _ in range(10):
        W = random_w(rng, int(rng.integers(2, 12)), strong=True)
        Wk = np.linalg.matrix_power(W, 5000)
        r = perron_centrality(W)
        assert abs(r.sum() - 1) < 1e-10
        assert np.abs(net_influence(Wk) - r).max() < 1e-8


def test_perron_rejects_bad_structure():
    with pytest.raises(ValueError, match="periodic"):
        perron_centrality(SWAP)
    with pytest.raises(ValueError, match="reducible"):
        perron_centrality([[1, 0], [0.5, 0.5]])


def test_alpha_approaches_perron(rng):
    for _ in range(5):
        W = random_w(rng, 8, strong=True)
        assert np.abs(alpha_centrality(W, 0.999) - perron_centrality(W)).max() < 1e-2
