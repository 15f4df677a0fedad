import math

import numpy as np
import pytest
from scipy import integrate

from berge_eq import EvolverConfig, Game, Individual, finite_game, game_g1, game_vcm, prisoners_dilemma, run
from berge_eq.evolver import (
    _environmental_selection,
    crowding_distance,
    fast_nondominated_sort,
    polynomial_mutation,
    sbx_crossover,
    tournament_select,
)
from berge_eq.relation import nondominated_filter

C, D = 0, 1
PD = prisoners_dilemma()


def individuals(game, profiles):
    return [Individual.from_profile(game, p) for p in profiles]


# -- crowding -----------------------------------------------------------------


def test_crowding_small_fronts():
    one = individuals(game_g1(), [(0, 0)])
    crowding_distance(one)
    assert one[0].crowding == math.inf
    two = individuals(game_g1(), [(0, 0), (1, 1)])
    crowding_distance(two)
    assert [i.crowding for i in two] == [math.inf, math.inf]


def test_crowding_collinear():
    front = [Individual(np.zeros(2), np.array(p, dtype=float)) for p in [(0, 0), (1, 1), (2, 2)]]
    crowding_distance(front)
    assert [i.crowding for i in front] == [math.inf, 2.0, math.inf]


def test_crowding_constant_objective():
    front = [Individual(np.zeros(2), np.array(p, dtype=float)) for p in [(0, 5), (1, 5), (3, 5), (4, 5)]]
    crowding_distance(front)
    assert front[1].crowding == 0.75 and front[2].crowding == 0.75


# -- tournament ---------------------------------------------------------------


class ScriptedRng:
    """Returns queued values from ``integers``; second draw is pre-shift."""

    def __init__(self, values):
        self.values = list(values)

    def integers(self, low, high, size):
        return np.array([self.values.pop(0) for _ in range(size)])


def _pop(ranks, crowd):
    return [Individual(np.zeros(1), np.zeros(1), r, c) for r, c in zip(ranks, crowd)]


def test_tournament_prefers_rank():
    pop = _pop([1, 0], [0.0, 0.0])
    assert tournament_select(pop, ScriptedRng([0, 0])) is pop[1]  # draws 0 then 1


def test_tournament_prefers_crowding():
    pop = _pop([0, 0], [0.5, math.inf])
    assert tournament_select(pop, ScriptedRng([0, 0])) is pop[1]
    assert tournament_select(pop, ScriptedRng([1, 0])) is pop[1]


def test_tournament_tie_first_drawn():
    pop = _pop([0, 0, 0], [1.0, 1.0, 1.0])
    assert tournament_select(pop, ScriptedRng([2, 0])) is pop[2]
    assert tournament_select(pop, ScriptedRng([0, 1])) is pop[0]


def test_tournament_draws_distinct(rng):
    pop = _pop([0, 1], [0.0, 0.0])
    assert all(tournament_select(pop, rng) is pop[0] for _ in range(50))


# -- SBX ----------------------------------------------------------------------


def test_sbx_probability_zero(rng):
    a, b = np.array([0.1, -1.0]), np.array([0.7, 0.5])
    c1, c2 = sbx_crossover(a, b, 20, 0.0, rng, [-2, -2], [1, 1])
    assert np.array_equal(c1, a) and np.array_equal(c2, b)


def test_sbx_identical_parents(rng):
    a = np.array([0.123456789, -1.987654321])
    c1, c2 = sbx_crossover(np.tile(a, (1000, 1)), np.tile(a, (1000, 1)), 20, 1.0, rng)
    assert np.all(c1 == a) and np.all(c2 == a)


def test_sbx_mean_and_spread(rng):
    k = 100_000
    c1, c2 = sbx_crossover(np.zeros((k, 1)), np.ones((k, 1)), 20, 1.0, rng)
    children = np.concatenate([c1, c2])
    assert abs(children.mean() - 0.5) < 0.01
    # half of the spread factors are contracting (beta <= 1)
    assert abs(np.mean((children >= 0) & (children <= 1)) - 0.5) < 0.01


def test_sbx_bounds(rng):
    c1, c2 = sbx_crossover(np.full((5000, 2), 0.99), np.full((5000, 2), -1.99), 2, 1.0, rng, [-2, -2], [1, 1])
    assert c1.min() >= -2 and c2.max() <= 1


def test_sbx_discrete_swaps(rng):
    a = np.zeros((2000, 2))
    b = np.full((2000, 2), 3.0)
    c1, c2 = sbx_crossover(a, b, 20, 1.0, rng, [0, 0], [3, 3], [True, True])
    assert set(np.unique(c1)) == {0.0, 3.0}
    assert np.all(c1 + c2 == 3.0)
    assert abs(np.mean(c1 == 3.0) - 0.5) < 0.05


# -- polynomial mutation --------------------------------------------------------


def test_mutation_probability_zero(rng):
    x = np.array([0.3, -0.4])
    assert np.array_equal(polynomial_mutation(x, 20, 0.0, rng, [-2, -2], [1, 1]), x)


def test_mutation_stays_in_bounds(rng):
    x = rng.uniform(-2, 1, size=(1_000_000, 1))
    out = polynomial_mutation(x, 20, 1.0, rng, -2.0, 1.0)
    assert out.min() >= -2 and out.max() <= 1


def test_mutation_symmetric(rng):
    x = np.full((100_000, 1), 0.5)
    out = polynomial_mutation(x, 20, 1.0, rng, 0.0, 1.0)
    assert abs(out.mean() - 0.5) < 0.01


def test_mutation_mean_step_matches_quadrature(rng):
    eta = 20.0
    # E|delta| with u ~ U(0,1): integrate the two branches of the inverse CDF
    left, _ = integrate.quad(lambda u: 1 - (2 * u) ** (1 / (eta + 1)), 0, 0.5)
    right, _ = integrate.quad(lambda u: 1 - (2 * (1 - u)) ** (1 / (eta + 1)), 0.5, 1)
    x = np.full((200_000, 1), 50.0)
    out = polynomial_mutation(x, eta, 1.0, rng, 0.0, 100.0)
    assert abs(np.abs(out - 50.0).mean() / 100.0 - (left + right)) < 5e-4


def test_mutation_discrete_reset(rng):
    x = np.zeros((20_000, 1))
    out = polynomial_mutation(x, 20, 1.0, rng, 0.0, 3.0, [True])
    counts = np.bincount(out[:, 0].astype(int), minlength=4) / len(out)
    np.testing.assert_allclose(counts, 0.25, atol=0.02)


# -- sorting ------------------------------------------------------------------


def test_sort_pd_pair():
    pop = individuals(PD, [(C, C), (D, D)])
    fronts = fast_nondominated_sort(pop, PD, 0)
    assert [[tuple(i.profile) for i in f] for f in fronts] == [[(0, 0)], [(1, 1)]]
    assert [i.rank for i in pop] == [0, 1]


def test_sort_all_indifferent():
    pop = individuals(PD, [(C, C), (C, D), (D, C), (D, D)])
    assert len(fast_nondominated_sort(pop, PD, 2)) == 1


def test_sort_full_pd():
    pop = individuals(PD, [(C, C), (C, D), (D, C), (D, D)])
    fronts = fast_nondominated_sort(pop, PD, 0)
    assert [tuple(i.profile) for i in fronts[0]] == [(0, 0)]
    assert sum(len(f) for f in fronts) == 4


def test_sort_terminates_on_cycles():
    pennies = finite_game("pennies", [["h", "t"], ["h", "t"]], [[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])
    pop = individuals(pennies, [(0, 0), (0, 1), (1, 0), (1, 1)])
    fronts = fast_nondominated_sort(pop, pennies, 0)
    assert sorted(i.rank for i in pop) == sorted(r for r, f in enumerate(fronts) for _ in f)
    assert all(i.rank >= 0 for i in pop)


def test_environmental_selection_elitist():
    ranks = np.array([1, 0, 2, 0, 1, 1])
    crowd = np.array([0.1, 0.0, 9.0, 0.0, 5.0, 0.2])
    keep = _environmental_selection(ranks, crowd, 4)
    assert sorted(keep.tolist()) == [1, 3, 4, 5]


# -- run ----------------------------------------------------------------------


def test_config_validation():
    for bad in (dict(population_size=5), dict(population_size=2), dict(generations=0),
                dict(crossover_probability=1.5), dict(mutation_probability=-0.1), dict(seed=-1),
                dict(eta_c=-1)):
        with pytest.raises(ValueError):
            EvolverConfig(**bad)
    assert EvolverConfig().mutation_rate(3) == pytest.approx(1 / 3)


def test_clones_stay_put():
    cfg = EvolverConfig(population_size=10, generations=1, crossover_probability=0, mutation_probability=0)
    result = run(game_g1(), 0, cfg, initial=np.tile([1.0, 1.0], (10, 1)))
    assert [m.profile.tolist() for m in result.members] == [[1.0, 1.0]]


def test_run_pd_matches_oracle():
    for seed in range(5):
        result = run(PD, 0, EvolverConfig(population_size=20, generations=10, seed=seed))
        assert [tuple(m.profile) for m in result.members] == [(0.0, 0.0)]


def test_single_profile_game_rejected():
    g = finite_game("one", [["x"], ["y"]], [[(1, 1)]])
    with pytest.raises(ValueError):
        run(g, 0, EvolverConfig(population_size=4, generations=1))


def test_run_deterministic():
    cfg = EvolverConfig(population_size=40, generations=20, seed=99)
    a = run(game_vcm(3), 0.5, cfg)
    b = run(game_vcm(3), 0.5, cfg)
    assert a.profiles.tobytes() == b.profiles.tobytes()
    assert a.payoffs.tobytes() == b.payoffs.tobytes()


def test_every_evaluation_in_bounds():
    base = game_g1()
    seen = []

    def guarded(x):
        assert np.all(x >= base.lower) and np.all(x <= base.upper)
        seen.append(len(x))
        return base.payoff(x)

    g = Game("g1-guarded", base.spaces, guarded)
    run(g, 0.3, EvolverConfig(population_size=30, generations=15, seed=4))
    assert seen


def test_front_soundness_and_cache():
    g = game_g1()
    result = run(g, 0.5, EvolverConfig(population_size=40, generations=25, seed=8))
    profiles = [tuple(p) for p in result.profiles.tolist()]
    assert nondominated_filter(g, profiles, 0.5) == profiles
    assert len(set(profiles)) == len(profiles)
    np.testing.assert_array_equal(result.payoffs, g.payoff(result.profiles))
