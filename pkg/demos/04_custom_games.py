"""
Games from configuration text
=============================

Custom games are described in a small ``key = value`` format: finite games
by full payoff tables, continuous ones by polynomial payoffs.  The same
text can be saved to a file and used from the command line with
``berge-eq solve --game file:<path> --epsilon 0``.
"""

from berge_eq import EvolverConfig, load_game, run
from berge_eq.oracle import verify_equivalence

stag_hunt = load_game("""
[game]
name = stag-hunt
players = 2
actions.1 = Stag,Hare
actions.2 = Stag,Hare

[payoff]
0,0 = 4,4
0,1 = 0,3
1,0 = 3,0
1,1 = 3,3
""")

report = verify_equivalence(stag_hunt, 0)
print("stag hunt BZ:", [stag_hunt.labels(s) for s in report.bz_set], "equal:", report.sets_equal)

duopoly = load_game("""
name = quadratic
players = 2
bounds.1 = 0,2
bounds.2 = 0,2
payoff_expr.1 = s1*(2 - s1) + 0.5*s2
payoff_expr.2 = s2*(2 - s2) + 0.5*s1
""")
front = run(duopoly, 0.1, EvolverConfig(population_size=60, generations=60, seed=3))
print("quadratic game, eps=0.1:", len(front.members), "members, strategy range",
      front.profiles.min(axis=0).round(3).tolist(), "to", front.profiles.max(axis=0).round(3).tolist())

# With three players the relation only counts deviations in which *every*
# other player switches, so a profile hurt by a partial deviation can stay
# non-dominated without being an equilibrium.
lines = ["name = partial-deviation", "players = 3"] + [f"actions.{i} = a,b" for i in (1, 2, 3)]
for a in range(2):
    for b in range(2):
        for c in range(2):
            lines.append(f"payoff.{a},{b},{c} = {10 if (a, b, c) == (0, 0, 1) else 0},0,0")
gap = load_game("\n".join(lines))
report = verify_equivalence(gap, 0)
print("\nthree-player example: only non-dominated:", report.only_nondominated, "equal:", report.sets_equal)
