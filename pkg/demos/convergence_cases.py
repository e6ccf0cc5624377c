"""
Convergence cases
=================

Whether ``V(k)`` settles depends on where the damping reaches one and on the
cycle structure of ``W``.
"""

import numpy as np

from polydyn import classify, iterate, structure_class

swap = np.array([[0.0, 1.0], [1.0, 0.0]])
lazy = np.array([[0.5, 0.5], [0.5, 0.5]])
chain = np.array([[1.0, 0.0], [0.5, 0.5]])
X0 = np.array([[0.0], [1.0]])

cases = [
    ("no damping", swap, [0.0, 0.0]),
    ("strict damping", swap, [0.5, 0.5]),
    ("undamped, aperiodic", lazy, [1.0, 1.0]),
    ("undamped, 2-cycle", swap, [1.0, 1.0]),
    ("one stubborn node", chain, [1.0, 0.3]),
]

for label, W, a in cases:
    c = classify(W, a)
    traj, lim = iterate(W, a, X0, k_max=2000)
    print(f"{label:22s} {c.case:24s} converges={c.converges!s:5s} "
          f"k={traj.k:<5d} X(inf)={lim.X_inf.ravel().round(6)}")
    if not c.converges:
        print(f"{'':22s} {c.reason}")

# structure classification is purely graph based
for W in (swap, lazy, chain):
    s = structure_class(W)
    print(s.connectivity, "periods", s.periods)
