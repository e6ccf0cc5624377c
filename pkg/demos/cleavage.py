"""
A moderate majority with extremists at both poles
=================================================

Simulates the default cleavage population and prints the initial and final
opinion histograms side by side.
"""

from polydyn import iterate
from polydyn.scenarios import cleavage_scenario, count_modes, histogram

W, a, X0 = cleavage_scenario(seed=0)
traj, lim = iterate(W, a, X0)
print(f"converged={traj.converged} after {traj.k} steps")

h0, h1 = histogram(X0, 20), histogram(lim.X_inf, 20)
print(f"{'initial bin':>24s} {'n':>4s}   {'final bin':>24s} {'n':>4s}")
for b in range(20):
    print(f"[{h0.edges[b]:+9.3f}, {h0.edges[b + 1]:+9.3f}) {h0.counts[b]:4d}   "
          f"[{h1.edges[b]:+9.3f}, {h1.edges[b + 1]:+9.3f}) {h1.counts[b]:4d}")

# every local maximum, then only those standing out from sampling noise
for floor in (1, 25):
    print(f"modes with prominence >= {floor}: initial {count_modes(h0, floor)}, "
          f"final {count_modes(h1, floor)}")
print(f"range: X(0) [{X0.min():.3f}, {X0.max():.3f}], X(inf) [{lim.X_inf.min():.3f}, {lim.X_inf.max():.3f}]")
