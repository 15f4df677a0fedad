import itertools

import numpy as np
import pytest

from berge_eq import evaluate, random_game
from berge_eq.relation import all_differ

CORPUS_SEEDS = range(120)
CORPUS_EPSILONS = (0.0, 0.5, 1.0, 2.0)

_criteria: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(key, passed, detail)``."""

    def record(key: str, passed: bool, detail: str = "") -> bool:
        _criteria[key] = f"{'PASS' if passed else 'FAIL'}  {key}  {detail}".rstrip()
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k.split()[0].lstrip("C"))):
        terminalreporter.write_line(_criteria[key])


@pytest.fixture(scope="session")
def corpus():
    """Seeded random finite games: 2-3 players, 2-4 actions, payoffs in [0, 10]."""
    return [random_game(seed) for seed in CORPUS_SEEDS]


def literal_profiles(game):
    return list(itertools.product(*(range(sp.size) for sp in game.spaces)))


def literal_b(game, s, q, eps):
    """Direct transcription of the counting formula, one player at a time."""
    count = 0
    u_s = evaluate(game, s)
    for i in range(game.n):
        if not all_differ(s, q, i):
            continue
        mixed = list(q)
        mixed[i] = s[i]
        if u_s[i] + eps < evaluate(game, mixed)[i]:
            count += 1
    return count


def literal_bz(game, eps):
    """Epsilon-BZ profiles of a finite game by checking every deviation."""
    profiles = literal_profiles(game)
    out = []
    for s in profiles:
        u_s = evaluate(game, s)
        ok = True
        for i in range(game.n):
            for d in profiles:
                mixed = list(d)
                mixed[i] = s[i]
                if u_s[i] < evaluate(game, mixed)[i] - eps:
                    ok = False
        if ok:
            out.append(tuple(s))
    return out


def literal_nondominated(game, eps):
    profiles = literal_profiles(game)
    return [
        s for s in profiles
        if not any(literal_b(game, q, s, eps) < literal_b(game, s, q, eps) for q in profiles if q != s)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
