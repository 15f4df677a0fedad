"""
Prisoner's dilemma: Nash versus Berge-Zhukovskii
================================================

Finite games can be solved exactly by enumeration.  Here the brute-force
oracle, the pairwise relation and the evolutionary detector all agree on
the Berge-Zhukovskii outcome of the prisoner's dilemma.
"""

from berge_eq import EvolverConfig, b_count, compare, prisoners_dilemma, run
from berge_eq.oracle import bz_set_bruteforce, nash_set_bruteforce, verify_equivalence

pd = prisoners_dilemma()
C, D = 0, 1

# Nash: nobody gains by deviating alone.  Defecting is dominant.
print("Nash:", [pd.labels(s) for s in nash_set_bruteforce(pd)])

# Berge-Zhukovskii: nobody gains when *all the others* deviate.
print("BZ (eps=0):", [pd.labels(s) for s in bz_set_bruteforce(pd, 0)])

# b(s, q) counts the players who would gain from the others switching to q.
print("b((C,C), (D,D)) =", b_count(pd, (C, C), (D, D), 0))
print("b((D,D), (C,C)) =", b_count(pd, (D, D), (C, C), 0))
print("compare:", compare(pd, (C, C), (D, D), 0).name)

# With a slack of 2 every profile is tolerated, and the relation agrees.
for eps in (0, 0.5, 1, 2):
    report = verify_equivalence(pd, eps)
    print(f"eps={eps}: |BZ|={len(report.bz_set)} |non-dominated|={len(report.nondominated_set)} "
          f"equal={report.sets_equal}")

# The evolutionary detector works on action indices for finite games.
front = run(pd, 0, EvolverConfig(population_size=20, generations=10, seed=1))
print("detected:", [pd.labels(m.profile) for m in front.members])
