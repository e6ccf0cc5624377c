"""
Net influence and PageRank
==========================

Column means of the limit matrix ``V`` measure how much each node's initial
state contributes to everyone's final state. With uniform damping this is
the PageRank vector; with no damping left it is the Perron vector of ``W``.
"""

import numpy as np

from polydyn import alpha_centrality, closed_form_limit, net_influence, perron_centrality
from polydyn.scenarios import random_strong_w

W = random_strong_w(7, 0.25, seed=2)
n = W.shape[0]

for alpha in (0.5, 0.85, 0.999):
    r = alpha_centrality(W, alpha)
    V = closed_form_limit(W, np.full(n, alpha), np.zeros((n, 1))).V
    print(f"alpha={alpha}: r={r.round(4)}  gap to net influence {np.abs(r - net_influence(V)).max():.1e}")

p = perron_centrality(W)
print("Perron:      ", p.round(4))

# heterogeneous damping shifts influence toward stubborn nodes
a = np.full(n, 0.9)
a[0] = 0.1
print("node 1 stubborn:", net_influence(closed_form_limit(W, a, np.zeros((n, 1))).V).round(4))
