"""
Points stacked on polygon vertices
==================================

When every node starts on a vertex of a polygon, the end state is a cloud
inside the polygon whose shape depends on ``W`` and ``A``.
"""

import numpy as np

from polydyn import closed_form_limit
from polydyn.scenarios import polytope_init, random_strong_w, regular_polygon
from polydyn.stochastic import bounding_box

rng = np.random.default_rng(5)
for v in (3, 5):
    vertices = regular_polygon(v)
    n = 20 * v
    X0 = polytope_init(vertices, rng.permutation(np.arange(n) % v))
    W = random_strong_w(n, 0.05, seed=v)
    for a_val in (0.3, 0.9):
        lim = closed_form_limit(W, np.full(n, a_val), X0)
        box = bounding_box(lim.X_inf)
        print(f"{v}-gon, a={a_val}: end-state box x[{box.lo[0]:+.3f}, {box.hi[0]:+.3f}] "
              f"y[{box.lo[1]:+.3f}, {box.hi[1]:+.3f}]")
