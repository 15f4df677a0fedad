"""
Voluntary contribution mechanism
================================

``u_i = 10 - s_i + 0.4 * sum_j s_j`` with ``s_i`` in ``[0, 10]``.  Each
player gains from the others' contributions, so the BZ equilibrium is full
contribution by everybody, whatever the number of players.
"""

import numpy as np

from berge_eq import EvolverConfig, GridSpec, game_vcm, run
from berge_eq.experiments import analytic_region, region_mask
from berge_eq.oracle import verify_equivalence

for n in (2, 3):
    game = game_vcm(n)
    front = run(game, 0.0, EvolverConfig(seed=1))
    print(f"{n} players, eps=0: {len(front.members)} members, "
          f"max |s_i - 10| = {np.abs(front.profiles - 10).max():.4f}, "
          f"payoffs ~ {front.payoffs.mean(axis=0).round(3).tolist()}")

    for eps in (0.1, 0.5, 0.9):
        front = run(game, eps, EvolverConfig(seed=2))
        inside = region_mask(analytic_region(game, eps), front.profiles).mean()
        print(f"  eps={eps}: {len(front.members)} members, {inside:.0%} inside the analytic region, "
              f"min contribution {front.profiles.min():.3f}")

# On the integer grid the oracle confirms the relation characterises the set
report = verify_equivalence(game_vcm(2), 0.0, GridSpec(11))
print("\ngrid oracle, 2 players:", report.bz_set, "equal:", report.sets_equal)
