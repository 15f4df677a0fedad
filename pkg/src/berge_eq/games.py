"""Games, strategy spaces and payoff evaluation.

A game is an immutable value holding one strategy space per player and a
vectorized payoff function mapping an array of profiles ``(..., n)`` to an
array of payoffs ``(..., n)``.  Finite strategies are encoded as action
indices stored in the same float array as continuous strategies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

__all__ = [
    "FiniteSpace",
    "IntervalSpace",
    "Game",
    "InvalidProfileError",
    "evaluate",
    "finite_game",
    "prisoners_dilemma",
    "game_g1",
    "game_vcm",
    "random_game",
]

PayoffFn = Callable[[np.ndarray], np.ndarray]


class InvalidProfileError(ValueError):
    """Raised when a strategy profile does not fit the game."""


@dataclass(frozen=True)
class FiniteSpace:
    actions: tuple[str, ...]

    def __post_init__(self):
        actions = tuple(str(a) for a in self.actions)
        if not actions:
            raise ValueError("finite strategy space needs at least one action")
        if len(set(actions)) != len(actions):
            raise ValueError(f"duplicate action labels in {actions}")
        object.__setattr__(self, "actions", actions)

    @property
    def size(self) -> int:
        return len(self.actions)

    @property
    def lower(self) -> float:
        return 0.0

    @property
    def upper(self) -> float:
        return float(len(self.actions) - 1)

    def contains(self, value) -> bool:
        return float(value).is_integer() and 0 <= value < len(self.actions)

    def grid(self, points: int) -> np.ndarray:
        # finite spaces are always enumerated exhaustively
        return np.arange(len(self.actions), dtype=float)


@dataclass(frozen=True)
class IntervalSpace:
    lower: float
    upper: float

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def grid(self, points: int) -> np.ndarray:
        return np.linspace(self.lower, self.upper, points)


StrategySpace = Union[FiniteSpace, IntervalSpace]


@dataclass(frozen=True)
class Game:
    """A strategic game ``G = (N, S_i, u_i)``.

    ``payoff`` must be a pure, vectorized function: given an array of shape
    ``(..., n)`` holding profiles it returns an array of the same shape whose
    last axis holds ``(u_1, ..., u_n)``.
    """

    name: str
    spaces: tuple[StrategySpace, ...]
    payoff: PayoffFn = field(compare=False)
    table: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "spaces", tuple(self.spaces))
        if len(self.spaces) < 2:
            raise ValueError("a game needs at least two players")

    @property
    def n(self) -> int:
        return len(self.spaces)

    @property
    def is_finite(self) -> bool:
        return all(isinstance(sp, FiniteSpace) for sp in self.spaces)

    @property
    def discrete_mask(self) -> np.ndarray:
        return np.array([isinstance(sp, FiniteSpace) for sp in self.spaces])

    @property
    def lower(self) -> np.ndarray:
        return np.array([sp.lower for sp in self.spaces])

    @property
    def upper(self) -> np.ndarray:
        return np.array([sp.upper for sp in self.spaces])

    def check_profile(self, s) -> np.ndarray:
        """Validate ``s`` and return it as a float array of length ``n``."""
        arr = np.asarray(s, dtype=float)
        if arr.shape != (self.n,):
            raise InvalidProfileError(
                f"profile {s!r} has length {arr.size}, game {self.name!r} has {self.n} players"
            )
        for i, (value, sp) in enumerate(zip(arr, self.spaces)):
            if not sp.contains(value):
                raise InvalidProfileError(f"entry {i} of {s!r} is outside the strategy space {sp}")
        return arr

    def check_profiles(self, profiles) -> np.ndarray:
        """Array version of :meth:`check_profile` for shape ``(k, n)``."""
        arr = np.asarray(profiles, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.n:
            raise InvalidProfileError(f"expected profiles of shape (k, {self.n}), got {arr.shape}")
        lo, hi = self.lower, self.upper
        bad = (arr < lo) | (arr > hi) | np.isnan(arr)
        disc = self.discrete_mask
        if disc.any():
            bad[:, disc] |= arr[:, disc] != np.round(arr[:, disc])
        if bad.any():
            row = int(np.argwhere(bad)[0, 0])
            raise InvalidProfileError(f"profile {arr[row].tolist()} is outside the strategy space")
        return arr

    def as_profile(self, arr) -> tuple:
        """Canonical hashable profile: ints for finite entries, floats otherwise."""
        return tuple(
            int(v) if isinstance(sp, FiniteSpace) else float(v) for v, sp in zip(arr, self.spaces)
        )

    def labels(self, s) -> tuple:
        """Human readable profile, replacing action indices with their labels."""
        return tuple(
            sp.actions[int(v)] if isinstance(sp, FiniteSpace) else float(v)
            for v, sp in zip(s, self.spaces)
        )


def evaluate(game: Game, s) -> np.ndarray:
    """Payoff vector ``(u_1(s), ..., u_n(s))`` of a single profile."""
    arr = game.check_profile(s)
    return np.asarray(game.payoff(arr[None, :])[0], dtype=float)


def finite_game(name: str, actions: Sequence[Sequence[str]], table) -> Game:
    """Build a finite game from a payoff table of shape ``(k_1, ..., k_n, n)``."""
    spaces = tuple(FiniteSpace(tuple(a)) for a in actions)
    table = np.array(table, dtype=float)
    expected = tuple(sp.size for sp in spaces) + (len(spaces),)
    if table.shape != expected:
        raise ValueError(f"payoff table shape {table.shape} does not match {expected}")
    table.setflags(write=False)

    def payoff(x: np.ndarray) -> np.ndarray:
        idx = np.asarray(x).astype(np.intp)
        return table[tuple(idx[..., i] for i in range(idx.shape[-1]))]

    return Game(name, spaces, payoff, table=table)


def prisoners_dilemma() -> Game:
    actions = ("Cooperate", "Defect")
    table = [
        [(2, 2), (0, 3)],
        [(3, 0), (1, 1)],
    ]
    return finite_game("pd", [actions, actions], table)


def _g1_payoff(x: np.ndarray) -> np.ndarray:
    s1, s2 = x[..., 0], x[..., 1]
    u1 = -s1**2 - s1 + s2
    u2 = 2 * s1**2 + 3 * s1 - s2**2 - 3 * s2
    return np.stack([u1, u2], axis=-1)


def game_g1() -> Game:
    """Two-player continuous game on ``[-2, 1]^2`` whose Berge-Zhukovskii
    equilibrium is ``(1, 1)`` with payoffs ``(-1, 1)``."""
    return Game("g1", (IntervalSpace(-2.0, 1.0), IntervalSpace(-2.0, 1.0)), _g1_payoff)


def _vcm_payoff(x: np.ndarray) -> np.ndarray:
    total = x.sum(axis=-1, keepdims=True)
    return 10.0 - x + 0.4 * total


def game_vcm(n: int = 2) -> Game:
    """Voluntary contribution mechanism: ``u_i = 10 - s_i + 0.4 * sum_j s_j``
    with contributions in ``[0, 10]``.  The sum includes player ``i``."""
    if int(n) != n or n < 2:
        raise ValueError(f"VCM needs at least 2 players, got {n}")
    return Game(f"vcm{int(n)}", tuple(IntervalSpace(0.0, 10.0) for _ in range(int(n))), _vcm_payoff)


def random_game(seed: int, players: int | None = None, max_actions: int = 4) -> Game:
    """Seeded finite game with integer payoffs uniform in ``[0, 10]``.

    Player count is drawn from {2, 3} and action counts from
    ``2..max_actions`` unless ``players`` is given.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4)) if players is None else int(players)
    sizes = [int(k) for k in rng.integers(2, max_actions + 1, size=n)]
    table = rng.integers(0, 11, size=tuple(sizes) + (n,))
    actions = [[f"a{j}" for j in range(k)] for k in sizes]
    return finite_game(f"random{seed}", actions, table)


def all_profiles(game: Game) -> list[tuple]:
    """Every profile of a finite game in lexicographic order."""
    if not game.is_finite:
        raise ValueError("all_profiles needs a finite game")
    return list(itertools.product(*(range(sp.size) for sp in game.spaces)))
