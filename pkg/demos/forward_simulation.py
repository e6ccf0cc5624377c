"""
Forward simulation of a damped influence process
================================================

Each node keeps a fraction ``1 - a_i`` of its initial position and takes the
rest from its neighbours: ``X(k+1) = A W X(k) + (I - A) X(0)``.
"""

import numpy as np

from polydyn import closed_form_limit, iterate, neumann_limit, neumann_order
from polydyn.scenarios import random_strong_w
from polydyn.stochastic import bounding_box, contains

# a random strongly connected network of 8 nodes, points in the plane
W = random_strong_w(8, extra_edge_prob=0.2, seed=1)
rng = np.random.default_rng(1)
a = rng.uniform(0.2, 0.9, 8)
X0 = rng.normal(size=(8, 2))

# iterate to a fixed point; V(k) is carried along
traj, lim = iterate(W, a, X0, tol=1e-12)
print(f"converged after {traj.k} steps, last change {traj.final_delta:.1e}")

# the same limit from the closed form and from a truncated Neumann series
cf = closed_form_limit(W, a, X0)
rho = max(abs(np.linalg.eigvals(a[:, None] * W)))
ns = neumann_limit(W, a, neumann_order(rho)) @ X0
print("iterative vs closed form:", np.abs(lim.X_inf - cf.X_inf).max())
print("closed form vs Neumann:  ", np.abs(cf.X_inf - ns).max())

# V is row-stochastic, so every state stays inside the initial bounding box
print("row sums of V:", np.round(cf.V.sum(axis=1), 15))
box = bounding_box(X0)
print("all snapshots inside the box:", all(contains(box, X, 1e-12) for X in traj.states))

# the end state is a shrunken, mixed copy of the starting cloud
print("spread before:", np.ptp(X0, axis=0), "after:", np.ptp(cf.X_inf, axis=0))
