"""
Continuous game G1: growing epsilon-BZ regions
==============================================

``u1 = -s1^2 - s1 + s2`` and ``u2 = 2 s1^2 + 3 s1 - s2^2 - 3 s2`` on
``[-2, 1]^2``.  The BZ equilibrium is ``(1, 1)`` with payoffs ``(-1, 1)``;
with slack eps the equilibria fill the box ``s2 >= 1 - eps``,
``2 s1^2 + 3 s1 >= 5 - eps``.

Pass an output directory as the first argument to also write the fronts
as CSV (columns ``s_1, s_2, u_1, u_2``) for plotting.
"""

import sys

import numpy as np

from berge_eq import EvolverConfig, game_g1
from berge_eq.experiments import analytic_region, sweep

g1 = game_g1()
epsilons = [0.0, 0.1, 0.2, 0.5, 0.9]
out_dir = sys.argv[1] if len(sys.argv) > 1 else None

rows = sweep(g1, epsilons, EvolverConfig(seed=1), out_dir)

print(f"{'eps':>5} {'front':>6} {'in region':>10} {'coverage':>9}  payoff box")
for r in rows:
    box = ", ".join(f"[{lo:+.3f}, {hi:+.3f}]" for lo, hi in zip(r.payoff_min, r.payoff_max))
    print(f"{r.epsilon:5.1f} {r.front_size:6d} {r.in_region:10.3f} {r.coverage:9.3f}  {box}")

# The reference region at eps = 0.5, as a box in strategy space
region = analytic_region(g1, 0.5)
print("\nregion at eps=0.5:", region.description)
print("strategy box:", np.round(region.box, 4).tolist())
