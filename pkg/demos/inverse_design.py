"""
Designing initial states and damping
====================================

Any target end state inside reach of ``{W, A}`` can be produced by exactly
one initial state, and there is a whole family of ``{A, X(0)}`` pairs per
target. Going the other way, from ``X(0)`` and ``X(inf)`` to ``A``, often
has no answer.
"""

import numpy as np

from polydyn import closed_form_limit, design_family, solve_damping, unbiased_design
from polydyn.scenarios import random_strong_w

W = random_strong_w(6, 0.3, seed=4)
target = np.array([[0.0], [1.0], [2.0], [3.0], [4.0], [5.0]])

# the unbiased member: a = 1/2 everywhere, X(0) = 2 X(inf) - W X(inf)
ub = unbiased_design(W, target)
print("unbiased X(0):", ub.X0.ravel().round(4), "residual", ub.residual)

# the starting state always spreads wider than the target
print("min/max of X(0):", ub.X0.min(), ub.X0.max(), " of target:", target.min(), target.max())

# two other members of the family reach the same target
for a in (np.full(6, 0.2), np.linspace(0.1, 0.9, 6)):
    sol = design_family(W, target, a)
    print("a =", a.round(2), "-> max error", np.abs(closed_form_limit(W, a, sol.X0).X_inf - target).max())

# recover the damping from a forward run
a_true = np.array([0.3, 0.6, 0.45, 0.8, 0.15, 0.5])
X0 = np.arange(6.0)[:, None] ** 2
rep = solve_damping(W, X0, closed_form_limit(W, a_true, X0).X_inf)
print("recovered a:", rep.a.round(12), rep.per_node)

# a target outside the initial range cannot be reached
rep = solve_damping(W, X0, X0 + 30)
print("feasible:", rep.feasible, "diagnoses:", rep.per_node)
