"""Detection of epsilon Berge-Zhukovskii equilibria in non-cooperative games."""

from .config import ConfigError, dump_game, load_game
from .evolver import EvolverConfig, FrontResult, Individual, run
from .games import (
    FiniteSpace,
    Game,
    IntervalSpace,
    InvalidProfileError,
    evaluate,
    finite_game,
    game_g1,
    game_vcm,
    prisoners_dilemma,
    random_game,
)
from .oracle import GridSpec, OracleReport, bz_set_bruteforce, nash_set_bruteforce, verify_equivalence
from .relation import DominanceOutcome, b_count, compare, nondominated_filter

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "dump_game",
    "load_game",
    "EvolverConfig",
    "FrontResult",
    "Individual",
    "run",
    "FiniteSpace",
    "Game",
    "IntervalSpace",
    "InvalidProfileError",
    "evaluate",
    "finite_game",
    "game_g1",
    "game_vcm",
    "prisoners_dilemma",
    "random_game",
    "GridSpec",
    "OracleReport",
    "bz_set_bruteforce",
    "nash_set_bruteforce",
    "verify_equivalence",
    "DominanceOutcome",
    "b_count",
    "compare",
    "nondominated_filter",
]
