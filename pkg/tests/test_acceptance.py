"""Exit criteria.  Each test records one PASS/FAIL line, printed in the
pytest terminal summary under "acceptance criteria"."""

import json
import time

import numpy as np

from berge_eq import EvolverConfig, GridSpec, game_g1, game_vcm, run
from berge_eq.cli import main
from berge_eq.experiments import analytic_region, region_mask, sweep
from berge_eq.oracle import (
    berge_zhukovskii_structure,
    bz_set_bruteforce,
    general_berge_set,
    nash_set_bruteforce,
    nash_structure,
    profile_grid,
    verify_equivalence,
)
from berge_eq.relation import b_count

from conftest import CORPUS_EPSILONS, literal_profiles

SEEDS = range(1, 11)
SWEEP_EPSILONS = [0.1, 0.2, 0.5, 0.9]


def test_c1_prisoners_dilemma_ground_truth(capsys, criterion):
    t0 = time.perf_counter()
    code = main(["oracle", "--game", "pd", "--epsilon", "0"])
    elapsed = time.perf_counter() - t0
    report = json.loads(capsys.readouterr().out)
    ok = (
        code == 0
        and report["bz_set"] == [["Cooperate", "Cooperate"]]
        and report["nash_set"] == [["Defect", "Defect"]]
        and elapsed < 1.0
    )
    criterion("C1 PD ground truth", ok, f"bz={report['bz_set']} nash={report['nash_set']} {elapsed:.3f}s")
    assert ok


def test_c2_theorem_suite(corpus, criterion):
    t0 = time.perf_counter()
    cases = 0
    unequal = {2: 0, 3: 0}
    per_players = {2: 0, 3: 0}
    prop1_failures = 0
    for game in corpus:
        profiles = literal_profiles(game)
        for eps in CORPUS_EPSILONS:
            cases += 1
            per_players[game.n] += 1
            report = verify_equivalence(game, eps)
            if not report.sets_equal:
                unequal[game.n] += 1
            for s in report.bz_set:
                if any(b_count(game, s, q, eps) != 0 for q in profiles):
                    prop1_failures += 1
    elapsed = time.perf_counter() - t0
    ok = sum(unequal.values()) == 0 and prop1_failures == 0 and elapsed < 30 and len(corpus) >= 100
    detail = (
        f"{len(corpus)} games x {len(CORPUS_EPSILONS)} eps = {cases} cases; sets unequal: "
        f"{unequal[2]}/{per_players[2]} two-player, {unequal[3]}/{per_players[3]} three-player; "
        f"b_count(s*, q) != 0 for {prop1_failures} BZ members; {elapsed:.1f}s"
    )
    criterion("C2 BZ = non-dominated on random games", ok, detail)
    assert ok, detail


def test_c3_epsilon_nesting(corpus, criterion):
    violations = 0
    for game in corpus:
        sets = [set(bz_set_bruteforce(game, e)) for e in sorted(CORPUS_EPSILONS)]
        violations += sum(not a <= b for a, b in zip(sets, sets[1:]))
    criterion("C3 epsilon nesting", violations == 0, f"{violations} violations over {len(corpus)} games")
    assert violations == 0


def test_c4_g1_convergence(criterion):
    worst, slowest = 0.0, 0.0
    for seed in SEEDS:
        t0 = time.perf_counter()
        front = run(game_g1(), 0.0, EvolverConfig(seed=seed))
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, float(np.abs(front.payoffs - [-1.0, 1.0]).max()))
    ok = worst <= 0.05 and slowest < 10
    criterion("C4 G1 convergence to (-1, 1)", ok, f"max L-inf payoff error {worst:.3g}, slowest run {slowest:.2f}s")
    assert ok


def test_c5_g1_sweep_soundness(criterion):
    game = game_g1()
    grid = GridSpec(201)
    nodes = profile_grid(game, grid)
    disagreements = 0
    for eps in SWEEP_EPSILONS:
        oracle = {tuple(p) for p in bz_set_bruteforce(game, eps, grid)}
        mask = region_mask(analytic_region(game, eps), nodes)
        disagreements += sum(m != (tuple(p) in oracle) for m, p in zip(mask, nodes.tolist()))
    t0 = time.perf_counter()
    rows = sweep(game, SWEEP_EPSILONS, EvolverConfig(seed=1))
    elapsed = time.perf_counter() - t0
    fractions = [r.in_region for r in rows]
    ok = disagreements == 0 and min(fractions) >= 0.9 and elapsed < 60
    criterion(
        "C5 G1 sweep inside analytic region",
        ok,
        f"grid disagreements {disagreements}; in-region {[round(f, 3) for f in fractions]}; {elapsed:.1f}s",
    )
    assert ok


def test_c6_vcm_convergence(criterion):
    hits = {}
    for n in (2, 3):
        good = 0
        for seed in SEEDS:
            front = run(game_vcm(n), 0.0, EvolverConfig(seed=seed))
            if np.abs(front.profiles - 10.0).max() <= 0.05 and np.abs(front.payoffs - (8.0 if n == 2 else 12.0)).max() < 0.1:
                good += 1
        hits[n] = good
    ok = hits[2] == len(SEEDS) and hits[3] == len(SEEDS)
    criterion("C6 VCM convergence to full contribution", ok, f"2 players {hits[2]}/10, 3 players {hits[3]}/10")
    assert ok


def test_c7_nash_berge_bridge(corpus, criterion):
    mismatches = 0
    for game in corpus:
        if general_berge_set(game, nash_structure(game.n)) != nash_set_bruteforce(game):
            mismatches += 1
        if general_berge_set(game, berge_zhukovskii_structure(game.n)) != bz_set_bruteforce(game, 0.0):
            mismatches += 1
    criterion("C7 Nash-Berge bridge", mismatches == 0, f"{mismatches} mismatches over {len(corpus)} games")
    assert mismatches == 0


def test_c8_cli_determinism(tmp_path, criterion):
    commands = {
        "g1": ["solve", "--game", "g1", "--epsilon", "0.5", "--seed", "7"],
        "vcm3": ["solve", "--game", "vcm", "--players", "3", "--epsilon", "0.2", "--seed", "7"],
    }
    identical = 0
    total = 0
    for name, argv in commands.items():
        outputs = []
        for rep in range(5):
            out = tmp_path / f"{name}_{rep}.csv"
            assert main(argv + ["--out", str(out)]) == 0
            outputs.append(out.read_bytes())
        total += 5
        identical += sum(o == outputs[0] for o in outputs)
    ok = identical == total
    criterion("C8 CLI determinism", ok, f"{identical}/{total} byte-identical")
    assert ok
