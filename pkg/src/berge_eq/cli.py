"""Command line entry point: ``berge-eq {solve,oracle,sweep}``.

Exit codes: 0 success, 1 usage error, 2 the oracle found BZ != non-dominated
set, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .config import ConfigError, load_game
from .evolver import EvolverConfig, run
from .experiments import RunRecord, front_to_csv, sweep, write_atomic
from .games import Game, game_g1, game_vcm, prisoners_dilemma
from .oracle import EnumerationTooLarge, GridSpec, nash_set_bruteforce, verify_equivalence

EXIT_OK, EXIT_USAGE, EXIT_THEOREM, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def resolve_game(name: str, players: int | None) -> Game:
    if name == "pd":
        return prisoners_dilemma()
    if name == "g1":
        return game_g1()
    if name == "vcm":
        return game_vcm(players if players is not None else 2)
    if name.startswith("file:"):
        path = Path(name[len("file:"):])
        try:
            return load_game(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read game file {path}: {exc.strerror}") from None
    raise UsageError(f"unknown game {name!r} (expected pd, g1, vcm or file:<path>)")


def _epsilon(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"epsilon must be finite and >= 0, got {text}")
    return value


def _epsilons(text: str) -> list[float]:
    values = [_epsilon(part) for part in text.split(",") if part.strip()]
    if not values:
        raise argparse.ArgumentTypeError("empty epsilon list")
    return values


def _config(args) -> EvolverConfig:
    return EvolverConfig(
        population_size=args.pop_size,
        generations=args.generations,
        eta_c=args.eta_c,
        eta_m=args.eta_m,
        crossover_probability=args.crossover_p,
        mutation_probability=args.mutation_p,
        seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="berge-eq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--game", required=True, help="pd, g1, vcm or file:<path>")
    common.add_argument("--players", type=int, default=None, help="number of players (vcm only)")
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")

    evo = _Parser(add_help=False)
    evo.add_argument("--pop-size", type=int, default=150)
    evo.add_argument("--generations", type=int, default=150)
    evo.add_argument("--eta-c", type=float, default=20.0)
    evo.add_argument("--eta-m", type=float, default=20.0)
    evo.add_argument("--crossover-p", type=float, default=0.9)
    evo.add_argument("--mutation-p", type=float, default=None, help="default 1/number of players")
    evo.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", parents=[common, evo], help="run the evolutionary detector once")
    p.add_argument("--epsilon", type=_epsilon, required=True)

    p = sub.add_parser("oracle", parents=[common], help="brute-force BZ and non-dominated sets")
    p.add_argument("--epsilon", type=_epsilon, required=True)
    p.add_argument("--grid", type=int, default=11, help="points per continuous dimension")

    p = sub.add_parser("sweep", parents=[common, evo], help="one detector run per epsilon")
    p.add_argument("--epsilons", type=_epsilons, default=[0.0, 0.1, 0.2, 0.5, 0.9])
    p.add_argument("--grid", type=int, default=11, help="grid for oracle regions of file games")
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=1000)
    return parser


def cmd_solve(args) -> int:
    game = resolve_game(args.game, args.players)
    config = _config(args)
    t0 = time.perf_counter()
    front = run(game, args.epsilon, config)
    elapsed = time.perf_counter() - t0
    text = front_to_csv(game, front.profiles.reshape(-1, game.n), front.payoffs.reshape(-1, game.n))
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    write_atomic(args.out, text)
    record = RunRecord("solve", game.name, args.epsilon, config.seed, config.as_dict(), args.out, elapsed, __version__)
    write_atomic(Path(args.out).with_suffix(".json"), record.to_json())
    return EXIT_OK


def cmd_oracle(args) -> int:
    game = resolve_game(args.game, args.players)
    grid = GridSpec(args.grid)
    report = verify_equivalence(game, args.epsilon, grid)
    payload = report.as_dict(game)
    payload["nash_set"] = [list(game.labels(s)) for s in nash_set_bruteforce(game, grid)]
    text = json.dumps(payload, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_atomic(args.out, text)
    if not report.sets_equal:
        print(
            f"berge-eq: epsilon-BZ set and non-dominated set differ "
            f"({len(report.only_bz)} only BZ, {len(report.only_nondominated)} only non-dominated)",
            file=sys.stderr,
        )
        return EXIT_THEOREM
    return EXIT_OK


def cmd_sweep(args) -> int:
    game = resolve_game(args.game, args.players)
    if args.out is None:
        raise UsageError("sweep needs --out <directory>")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rows = sweep(game, args.epsilons, _config(args), args.out, args.samples, args.radius,
                 GridSpec(args.grid), __version__)
    for r in rows:
        print(f"eps={r.epsilon:g} seed={r.seed} front={r.front_size} in_region={r.in_region:.3f} "
              f"coverage={r.coverage:.3f} bbox_volume={r.bbox_volume:.4g}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "oracle": cmd_oracle, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except EnumerationTooLarge as exc:
        print(f"berge-eq: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"berge-eq: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"berge-eq: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
