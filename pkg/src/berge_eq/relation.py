"""The generative relation for epsilon Berge-Zhukovskii equilibria.

``b_count(s, q)`` counts the players ``i`` that would gain more than their
slack ``eps`` if they kept ``s_i`` while every other player switched to
``q``, counted only when every other component of ``q`` differs from ``s``::

    b(s, q) = #{ i : u_i(s) + eps < u_i(s_i, q_-i)  and  s_j != q_j for all j != i }

``s`` dominates ``q`` when ``b(s, q) < b(q, s)``.  The relation is not
assumed transitive anywhere; set-level operations only use pairwise counts.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .games import Game

__all__ = [
    "DominanceOutcome",
    "check_epsilon",
    "all_differ",
    "b_count",
    "b_matrix",
    "dominance_matrix",
    "compare",
    "nondominated_filter",
]

# upper bound on array elements per block when forming count matrices
_BLOCK_ELEMENTS = 4_000_000


class DominanceOutcome(enum.Enum):
    LEFT_DOMINATES = "left"
    RIGHT_DOMINATES = "right"
    INDIFFERENT = "indifferent"


def check_epsilon(eps) -> float:
    eps = float(eps)
    if not math.isfinite(eps) or eps < 0:
        raise ValueError(f"epsilon must be finite and >= 0, got {eps}")
    return eps


def all_differ(s, q, excluded: int) -> bool:
    """True iff ``s_j != q_j`` for every ``j`` except ``excluded``."""
    if len(s) != len(q):
        raise ValueError("profiles of different length")
    if not 0 <= excluded < len(s):
        raise IndexError(f"player index {excluded} out of range")
    return all(a != b for j, (a, b) in enumerate(zip(s, q)) if j != excluded)


def b_matrix(game: Game, left: np.ndarray, right: np.ndarray, eps: float,
             left_payoffs: np.ndarray | None = None) -> np.ndarray:
    """Counts ``b(left[a], right[b])`` for every pair, shape ``(len(left), len(right))``.

    ``left_payoffs`` may carry precomputed ``u(left)`` to skip one evaluation.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    n = game.n
    base = game.payoff(left) if left_payoffs is None else np.asarray(left_payoffs, dtype=float)
    equal = left[:, None, :] == right[None, :, :]
    n_equal = equal.sum(axis=-1)
    counts = np.zeros((len(left), len(right)), dtype=np.int64)
    for i in range(n):
        # all others differ <=> no equal component apart from (possibly) i
        others_differ = (n_equal - equal[..., i]) == 0
        mixed = np.broadcast_to(right[None, :, :], equal.shape).copy()
        mixed[..., i] = left[:, None, i]
        gain = game.payoff(mixed)[..., i]
        counts += (base[:, None, i] + eps < gain) & others_differ
    return counts


def b_count(game: Game, s, q, eps) -> int:
    eps = check_epsilon(eps)
    s = game.check_profile(s)
    q = game.check_profile(q)
    return int(b_matrix(game, s[None, :], q[None, :], eps)[0, 0])


def compare(game: Game, s, q, eps) -> DominanceOutcome:
    forward = b_count(game, s, q, eps)
    backward = b_count(game, q, s, eps)
    if forward < backward:
        return DominanceOutcome.LEFT_DOMINATES
    if backward < forward:
        return DominanceOutcome.RIGHT_DOMINATES
    return DominanceOutcome.INDIFFERENT


def dominance_matrix(game: Game, profiles: np.ndarray, eps: float,
                     payoffs: np.ndarray | None = None) -> np.ndarray:
    """``D[a, b]`` is True iff ``profiles[a]`` dominates ``profiles[b]``."""
    counts = b_matrix(game, profiles, profiles, eps, left_payoffs=payoffs)
    return counts < counts.T


def _dominated_mask(game: Game, profiles: np.ndarray, eps: float) -> np.ndarray:
    k = len(profiles)
    payoffs = game.payoff(profiles)
    dominated = np.zeros(k, dtype=bool)
    chunk = max(1, _BLOCK_ELEMENTS // (k * game.n))
    for start in range(0, k, chunk):
        block = slice(start, min(start + chunk, k))
        # forward[a, c] = b(block[a], all[c]); backward[c, a] = b(all[c], block[a])
        forward = b_matrix(game, profiles[block], profiles, eps, left_payoffs=payoffs[block])
        backward = b_matrix(game, profiles, profiles[block], eps, left_payoffs=payoffs)
        dominated[block] = (backward.T < forward).any(axis=1)
    return dominated


def nondominated_filter(game: Game, profiles, eps) -> list[tuple]:
    """Members of ``profiles`` not dominated by any other member, in input order.

    The result can be empty when the relation has a cycle through every
    member (e.g. a finite game without any epsilon-BZ equilibrium).
    """
    eps = check_epsilon(eps)
    profiles = list(profiles)
    if not profiles:
        raise ValueError("nondominated_filter needs at least one profile")
    arr = game.check_profiles(profiles)
    dominated = _dominated_mask(game, arr, eps)
    return [game.as_profile(arr[a]) for a in range(len(arr)) if not dominated[a]]
