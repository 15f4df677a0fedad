"""Brute-force ground truth over finite or gridded strategy spaces."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .games import Game
from .relation import check_epsilon, nondominated_filter

__all__ = [
    "GridSpec",
    "CoalitionStructure",
    "OracleReport",
    "EnumerationTooLarge",
    "InvalidStructureError",
    "DEFAULT_CAP",
    "enumeration_cap",
    "enumerate_profiles",
    "profile_grid",
    "is_epsilon_bz",
    "bz_set_bruteforce",
    "nondominated_set_bruteforce",
    "verify_equivalence",
    "is_general_berge",
    "nash_set_bruteforce",
    "general_berge_set",
    "berge_zhukovskii_structure",
    "nash_structure",
]

DEFAULT_CAP = 10**7


class EnumerationTooLarge(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"enumeration of {size} profiles exceeds the cap of {cap}")
        self.size = size
        self.cap = cap


class InvalidStructureError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Equally spaced nodes per continuous dimension, endpoints included."""

    points_per_interval: int = 11

    def __post_init__(self):
        if int(self.points_per_interval) != self.points_per_interval or self.points_per_interval < 2:
            raise ValueError("points_per_interval must be an integer >= 2")


@dataclass(frozen=True)
class CoalitionStructure:
    """Partition blocks ``P_t`` and their deviating coalitions ``R_t`` (0-based players)."""

    partition: tuple[frozenset, ...]
    targets: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(frozenset(b) for b in self.partition))
        object.__setattr__(self, "targets", tuple(frozenset(r) for r in self.targets))

    def validate(self, n: int) -> None:
        if len(self.partition) != len(self.targets):
            raise InvalidStructureError("partition and targets differ in length")
        seen: set = set()
        for block in self.partition:
            if not block:
                raise InvalidStructureError("empty partition block")
            if block & seen:
                raise InvalidStructureError(f"partition blocks overlap on {sorted(block & seen)}")
            seen |= block
        if seen != set(range(n)):
            raise InvalidStructureError(f"partition does not cover players 0..{n - 1}")
        for r in self.targets:
            if not r <= set(range(n)):
                raise InvalidStructureError(f"target set {sorted(r)} has unknown players")


def berge_zhukovskii_structure(n: int) -> CoalitionStructure:
    """``P = {{i}}``, ``R_i = N - {i}``."""
    return CoalitionStructure(
        tuple({i} for i in range(n)), tuple(set(range(n)) - {i} for i in range(n))
    )


def nash_structure(n: int) -> CoalitionStructure:
    """``P = {{i}}``, ``R_i = {i}``."""
    return CoalitionStructure(tuple({i} for i in range(n)), tuple({i} for i in range(n)))


@dataclass
class OracleReport:
    bz_set: list[tuple]
    nondominated_set: list[tuple]
    sets_equal: bool
    epsilon: float
    grid: GridSpec
    profile_count: int
    game: str = ""
    only_bz: list[tuple] = field(default_factory=list)
    only_nondominated: list[tuple] = field(default_factory=list)

    def as_dict(self, game: Game | None = None) -> dict:
        show = (lambda s: list(game.labels(s))) if game is not None else list
        return {
            "game": self.game,
            "epsilon": self.epsilon,
            "grid_points": self.grid.points_per_interval,
            "profile_count": self.profile_count,
            "sets_equal": self.sets_equal,
            "bz_set": [show(s) for s in self.bz_set],
            "nondominated_set": [show(s) for s in self.nondominated_set],
            "only_bz": [show(s) for s in self.only_bz],
            "only_nondominated": [show(s) for s in self.only_nondominated],
        }


def enumeration_cap() -> int:
    """Enumeration cap, overridable through ``BERGE_EQ_CAP``."""
    raw = os.environ.get("BERGE_EQ_CAP")
    return int(raw) if raw else DEFAULT_CAP


def _axes(game: Game, grid: GridSpec, cap: int | None) -> list[np.ndarray]:
    axes = [sp.grid(grid.points_per_interval) for sp in game.spaces]
    size = int(np.prod([len(a) for a in axes], dtype=object))
    cap = enumeration_cap() if cap is None else cap
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    return axes


def enumerate_profiles(game: Game, grid: GridSpec = GridSpec(), cap: int | None = None) -> Iterator[tuple]:
    """Yield every profile of the (discretized) product space in lexicographic order."""
    axes = _axes(game, grid, cap)
    for combo in itertools.product(*axes):
        yield game.as_profile(combo)


def profile_grid(game: Game, grid: GridSpec = GridSpec(), cap: int | None = None) -> np.ndarray:
    """All enumerated profiles as an array of shape ``(k, n)``, lexicographic."""
    axes = _axes(game, grid, cap)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _deviation_array(game: Game, deviations) -> np.ndarray:
    if isinstance(deviations, np.ndarray):
        return np.asarray(deviations, dtype=float).reshape(-1, game.n)
    return np.asarray(list(deviations), dtype=float).reshape(-1, game.n)


def is_epsilon_bz(game: Game, s, eps, deviations: Iterable | np.ndarray) -> bool:
    """Check ``u_i(s) >= u_i(s_i, d_-i) - eps`` for every player and deviation ``d``.

    Violation is tested as ``u_i(s) + eps < u_i(s_i, d_-i)``, the same float
    expression the relation uses.
    """
    eps = check_epsilon(eps)
    s = game.check_profile(s)
    devs = _deviation_array(game, deviations)
    base = game.payoff(s[None, :])[0]
    for i in range(game.n):
        mixed = devs.copy()
        mixed[:, i] = s[i]
        if np.any(base[i] + eps < game.payoff(mixed)[:, i]):
            return False
    return True


def _payoff_cube(game: Game, grid: GridSpec, cap: int | None) -> tuple[list[np.ndarray], np.ndarray]:
    axes = _axes(game, grid, cap)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return axes, game.payoff(mesh)


def _cube_members(game: Game, axes, mask: np.ndarray) -> list[tuple]:
    return [game.as_profile([axes[d][j] for d, j in enumerate(idx)]) for idx in np.argwhere(mask)]


def bz_set_bruteforce(game: Game, eps, grid: GridSpec = GridSpec(), cap: int | None = None) -> list[tuple]:
    """All enumerated epsilon-BZ profiles, lexicographic order.

    Player ``i``'s best deviation payoff given ``s_i`` is the maximum of
    ``u_i`` over every other axis of the payoff cube.
    """
    eps = check_epsilon(eps)
    axes, cube = _payoff_cube(game, grid, cap)
    n = game.n
    ok = np.ones(cube.shape[:-1], dtype=bool)
    for i in range(n):
        others = tuple(d for d in range(n) if d != i)
        best = cube[..., i].max(axis=others, keepdims=True)
        ok &= ~(cube[..., i] + eps < best)
    return _cube_members(game, axes, ok)


def nondominated_set_bruteforce(game: Game, eps, grid: GridSpec = GridSpec(), cap: int | None = None) -> list[tuple]:
    profiles = profile_grid(game, grid, cap)
    return nondominated_filter(game, profiles, eps)


def verify_equivalence(game: Game, eps, grid: GridSpec = GridSpec(), cap: int | None = None) -> OracleReport:
    """Compare the epsilon-BZ set with the non-dominated set of the same enumeration."""
    eps = check_epsilon(eps)
    profiles = profile_grid(game, grid, cap)
    bz = bz_set_bruteforce(game, eps, grid, cap)
    nd = nondominated_filter(game, profiles, eps)
    bz_keys, nd_keys = set(bz), set(nd)
    return OracleReport(
        bz_set=bz,
        nondominated_set=nd,
        sets_equal=bz_keys == nd_keys,
        epsilon=eps,
        grid=grid,
        profile_count=len(profiles),
        game=game.name,
        only_bz=[s for s in bz if s not in nd_keys],
        only_nondominated=[s for s in nd if s not in bz_keys],
    )


def is_general_berge(game: Game, s, structure: CoalitionStructure, deviations: Iterable | np.ndarray) -> bool:
    """Berge equilibrium for partition ``P`` with respect to ``R``: for each block
    ``m``, each ``p`` in ``P_m`` and each deviation ``d``, replacing the
    coordinates in ``R_m`` by ``d``'s must not raise ``u_p``."""
    structure.validate(game.n)
    s = game.check_profile(s)
    devs = _deviation_array(game, deviations)
    base = game.payoff(s[None, :])[0]
    for block, target in zip(structure.partition, structure.targets):
        mixed = np.broadcast_to(s, devs.shape).copy()
        cols = sorted(target)
        mixed[:, cols] = devs[:, cols]
        u = game.payoff(mixed)
        for p in block:
            if np.any(base[p] < u[:, p]):
                return False
    return True


def nash_set_bruteforce(game: Game, grid: GridSpec = GridSpec(), cap: int | None = None) -> list[tuple]:
    """Profiles where no player strictly gains by a unilateral deviation."""
    axes, cube = _payoff_cube(game, grid, cap)
    ok = np.ones(cube.shape[:-1], dtype=bool)
    for i in range(game.n):
        best = cube[..., i].max(axis=i, keepdims=True)
        ok &= ~(cube[..., i] < best)
    return _cube_members(game, axes, ok)


def general_berge_set(game: Game, structure: CoalitionStructure, grid: GridSpec = GridSpec(),
                      cap: int | None = None) -> list[tuple]:
    """Every enumerated profile accepted by :func:`is_general_berge`."""
    profiles = profile_grid(game, grid, cap)
    return [game.as_profile(s) for s in profiles if is_general_berge(game, s, structure, profiles)]
