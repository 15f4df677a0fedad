"""NSGA-II with the epsilon Berge-Zhukovskii relation as its dominance test.

The generational loop is the usual one (binary tournament on rank and
crowding, SBX crossover, polynomial mutation, elitist merge and truncation),
except that fronts are built from pairwise ``b_count`` comparisons instead
of Pareto dominance.  Finite strategy components use uniform crossover and
random-reset mutation on action indices.

Every random draw comes from one ``numpy.random.Generator`` in a fixed
order per generation: tournament draws, then crossover draws, then mutation
draws.  A run is therefore a pure function of (game, eps, config).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .games import Game
from .relation import check_epsilon, dominance_matrix, nondominated_filter

__all__ = [
    "EvolverConfig",
    "Individual",
    "FrontResult",
    "run",
    "fast_nondominated_sort",
    "crowding_distance",
    "sbx_crossover",
    "polynomial_mutation",
    "tournament_select",
]


@dataclass(frozen=True)
class EvolverConfig:
    population_size: int = 150
    generations: int = 150
    eta_c: float = 20.0
    eta_m: float = 20.0
    crossover_probability: float = 0.9
    mutation_probability: float | None = None  # None -> 1 / number of variables
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.eta_c < 0 or self.eta_m < 0:
            raise ValueError("distribution indices must be >= 0")
        if not 0 <= self.crossover_probability <= 1:
            raise ValueError("crossover_probability must lie in [0, 1]")
        if self.mutation_probability is not None and not 0 <= self.mutation_probability <= 1:
            raise ValueError("mutation_probability must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def mutation_rate(self, n_variables: int) -> float:
        if self.mutation_probability is None:
            return 1.0 / n_variables
        return self.mutation_probability

    def as_dict(self) -> dict:
        return {
            "population_size": self.population_size,
            "generations": self.generations,
            "eta_c": self.eta_c,
            "eta_m": self.eta_m,
            "crossover_probability": self.crossover_probability,
            "mutation_probability": self.mutation_probability,
            "seed": self.seed,
        }


@dataclass
class Individual:
    profile: np.ndarray
    payoffs: np.ndarray
    rank: int = -1
    crowding: float = 0.0

    @classmethod
    def from_profile(cls, game: Game, profile) -> "Individual":
        x = game.check_profile(profile)
        return cls(x, game.payoff(x[None, :])[0])


@dataclass
class FrontResult:
    members: list[Individual]
    config: EvolverConfig
    epsilon: float
    game: str
    generations_run: int
    history: list[int] = field(default_factory=list, repr=False)

    @property
    def profiles(self) -> np.ndarray:
        return np.array([m.profile for m in self.members])

    @property
    def payoffs(self) -> np.ndarray:
        return np.array([m.payoffs for m in self.members])


# -- array level machinery ---------------------------------------------------


def _ranks_from_dominance(dom: np.ndarray) -> np.ndarray:
    """Front index per member from a dominance matrix ``dom[a, b]`` (a dominates b).

    If every unassigned member is still dominated (a domination cycle), the
    members with the fewest remaining dominators form the next front.
    """
    k = len(dom)
    remaining = dom.sum(axis=0).astype(np.int64)
    ranks = np.full(k, -1, dtype=np.int64)
    unassigned = np.ones(k, dtype=bool)
    rank = 0
    while unassigned.any():
        front = unassigned & (remaining == 0)
        if not front.any():
            front = unassigned & (remaining == remaining[unassigned].min())
        ranks[front] = rank
        unassigned &= ~front
        remaining -= dom[front].sum(axis=0)
        rank += 1
    return ranks


def _crowding(payoffs: np.ndarray) -> np.ndarray:
    k, m = payoffs.shape
    if k <= 2:
        return np.full(k, np.inf)
    dist = np.zeros(k)
    for obj in range(m):
        order = np.argsort(payoffs[:, obj], kind="stable")
        vals = payoffs[order, obj]
        span = vals[-1] - vals[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


def _sort_and_crowd(game: Game, x: np.ndarray, f: np.ndarray, eps: float) -> tuple[np.ndarray, np.ndarray]:
    ranks = _ranks_from_dominance(dominance_matrix(game, x, eps, payoffs=f))
    crowd = np.zeros(len(x))
    for r in np.unique(ranks):
        members = np.flatnonzero(ranks == r)
        crowd[members] = _crowding(f[members])
    return ranks, crowd


def _tournament(ranks: np.ndarray, crowding: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    # two distinct uniform indices per tournament
    a = rng.integers(0, len(ranks), size=size)
    b = rng.integers(0, len(ranks) - 1, size=size)
    b = b + (b >= a)
    pick_b = (ranks[b] < ranks[a]) | ((ranks[b] == ranks[a]) & (crowding[b] > crowding[a]))
    return np.where(pick_b, b, a)


# -- operators ----------------------------------------------------------------


def sbx_crossover(parent_a, parent_b, eta_c: float, probability: float, rng: np.random.Generator,
                  lower=None, upper=None, discrete=None) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover on parent arrays of shape ``(n,)`` or ``(k, n)``.

    Each pair is crossed with ``probability``; a crossed pair draws one spread
    factor per variable from the ``eta_c`` polynomial distribution.  Children
    are clipped to ``[lower, upper]``.  Variables flagged in ``discrete`` are
    swapped between the children with probability 0.5 instead.
    """
    a = np.atleast_2d(np.asarray(parent_a, dtype=float))
    b = np.atleast_2d(np.asarray(parent_b, dtype=float))
    k, n = a.shape
    cross = rng.random(k) < probability
    u = rng.random((k, n))
    swap = rng.random((k, n)) < 0.5

    beta = np.where(u <= 0.5, (2 * u) ** (1 / (eta_c + 1)), (1 / (2 * (1 - u))) ** (1 / (eta_c + 1)))
    c1 = 0.5 * ((1 + beta) * a + (1 - beta) * b)
    c2 = 0.5 * ((1 - beta) * a + (1 + beta) * b)
    same = a == b
    c1 = np.where(same, a, c1)
    c2 = np.where(same, b, c2)
    if discrete is not None:
        disc = np.broadcast_to(np.asarray(discrete, dtype=bool), (k, n))
        c1 = np.where(disc, np.where(swap, b, a), c1)
        c2 = np.where(disc, np.where(swap, a, b), c2)
    if lower is not None:
        c1 = np.clip(c1, lower, upper)
        c2 = np.clip(c2, lower, upper)
    keep = ~cross[:, None]
    c1 = np.where(keep, a, c1)
    c2 = np.where(keep, b, c2)
    if np.ndim(parent_a) == 1:
        return c1[0], c2[0]
    return c1, c2


def polynomial_mutation(individual, eta_m: float, probability: float, rng: np.random.Generator,
                        lower, upper, discrete=None) -> np.ndarray:
    """Polynomial mutation of an array of shape ``(n,)`` or ``(k, n)``.

    Each variable mutates with ``probability``: continuous ones by
    ``delta * (upper - lower)`` with ``delta`` from the ``eta_m`` polynomial
    distribution, then clipped; discrete ones reset to a uniform random
    action in ``lower..upper``.
    """
    x = np.atleast_2d(np.asarray(individual, dtype=float))
    lower = np.broadcast_to(np.asarray(lower, dtype=float), x.shape)
    upper = np.broadcast_to(np.asarray(upper, dtype=float), x.shape)
    hit = rng.random(x.shape) < probability
    u = rng.random(x.shape)
    reset_u = rng.random(x.shape)

    delta = np.where(u < 0.5, (2 * u) ** (1 / (eta_m + 1)) - 1, 1 - (2 * (1 - u)) ** (1 / (eta_m + 1)))
    moved = np.clip(x + delta * (upper - lower), lower, upper)
    if discrete is not None:
        disc = np.broadcast_to(np.asarray(discrete, dtype=bool), x.shape)
        reset = lower + np.floor(reset_u * (upper - lower + 1))
        moved = np.where(disc, np.minimum(reset, upper), moved)
    out = np.where(hit, moved, x)
    if np.ndim(individual) == 1:
        return out[0]
    return out


# -- Individual level API -----------------------------------------------------


def fast_nondominated_sort(population: list[Individual], game: Game, eps) -> list[list[Individual]]:
    """Partition ``population`` into fronts and set each member's ``rank`` (0-based)."""
    if not population:
        raise ValueError("empty population")
    eps = check_epsilon(eps)
    x = np.array([ind.profile for ind in population], dtype=float)
    f = np.array([ind.payoffs for ind in population], dtype=float)
    ranks = _ranks_from_dominance(dominance_matrix(game, x, eps, payoffs=f))
    fronts: list[list[Individual]] = [[] for _ in range(int(ranks.max()) + 1)]
    for ind, r in zip(population, ranks):
        ind.rank = int(r)
        fronts[r].append(ind)
    return fronts


def crowding_distance(front: list[Individual]) -> None:
    """Assign payoff-space crowding distances to the members of ``front``."""
    if not front:
        raise ValueError("empty front")
    dist = _crowding(np.array([ind.payoffs for ind in front], dtype=float))
    for ind, d in zip(front, dist):
        ind.crowding = float(d)


def tournament_select(population: list[Individual], rng: np.random.Generator) -> Individual:
    """Binary tournament: lower rank wins, then larger crowding, then the first drawn."""
    ranks = np.array([ind.rank for ind in population])
    crowd = np.array([ind.crowding for ind in population])
    return population[int(_tournament(ranks, crowd, rng, 1)[0])]


# -- main loop ----------------------------------------------------------------


def _environmental_selection(ranks: np.ndarray, crowd: np.ndarray, size: int) -> np.ndarray:
    # fill by front; the last admitted front is truncated by decreasing crowding
    chosen: list[int] = []
    for r in np.unique(ranks):
        members = np.flatnonzero(ranks == r)
        if len(chosen) + len(members) <= size:
            chosen.extend(members.tolist())
            continue
        order = np.argsort(-crowd[members], kind="stable")
        chosen.extend(members[order[: size - len(chosen)]].tolist())
        break
    return np.array(chosen, dtype=np.intp)


def run(game: Game, eps, config: EvolverConfig = EvolverConfig(), initial=None) -> FrontResult:
    """Detect the epsilon-BZ set of ``game``.

    ``initial`` optionally fixes the starting population (shape
    ``(population_size, n)``); otherwise it is drawn uniformly in bounds.
    Returns the de-duplicated first front of the final population.
    """
    eps = check_epsilon(eps)
    lower, upper, disc = game.lower, game.upper, game.discrete_mask
    if np.all(disc & (lower == upper)):
        raise ValueError(f"game {game.name!r} has a single profile; nothing to search")
    rng = np.random.Generator(np.random.PCG64(config.seed))
    size, n = config.population_size, game.n
    p_mut = config.mutation_rate(n)

    if initial is None:
        cont = lower + rng.random((size, n)) * (upper - lower)
        ints = lower + np.floor(rng.random((size, n)) * (upper - lower + 1))
        x = np.where(disc, np.minimum(ints, upper), cont)
    else:
        x = game.check_profiles(initial)
        if len(x) != size:
            raise ValueError(f"initial population has {len(x)} members, expected {size}")
    f = game.payoff(x)
    ranks, crowd = _sort_and_crowd(game, x, f, eps)
    history = []

    for _ in range(config.generations):
        parents = _tournament(ranks, crowd, rng, size)
        a, b = x[parents[0::2]], x[parents[1::2]]
        c1, c2 = sbx_crossover(a, b, config.eta_c, config.crossover_probability, rng, lower, upper, disc)
        children = np.empty_like(x)
        children[0::2], children[1::2] = c1, c2
        children = polynomial_mutation(children, config.eta_m, p_mut, rng, lower, upper, disc)

        merged_x = np.vstack([x, children])
        merged_f = np.vstack([f, game.payoff(children)])
        merged_ranks, merged_crowd = _sort_and_crowd(game, merged_x, merged_f, eps)
        keep = _environmental_selection(merged_ranks, merged_crowd, size)
        x, f = merged_x[keep], merged_f[keep]
        ranks, crowd = merged_ranks[keep], merged_crowd[keep]
        history.append(int((ranks == 0).sum()))

    first = np.flatnonzero(ranks == 0)
    seen: set[tuple] = set()
    unique = []
    for idx in first:
        key = tuple(x[idx].tolist())
        if key not in seen:
            seen.add(key)
            unique.append(idx)
    kept = {tuple(p) for p in nondominated_filter(game, x[unique], eps)}
    members = []
    front_crowd = _crowding(f[unique]) if unique else np.array([])
    for idx, c in zip(unique, front_crowd):
        if game.as_profile(x[idx]) in kept:
            members.append(Individual(x[idx].copy(), f[idx].copy(), 0, float(c)))
    return FrontResult(members, config, eps, game.name, config.generations, history)
