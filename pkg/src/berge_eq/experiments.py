"""Reference regions, coverage metrics, CSV output and epsilon sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .evolver import EvolverConfig, FrontResult, run
from .games import FiniteSpace, Game, _g1_payoff, _vcm_payoff
from .oracle import GridSpec, bz_set_bruteforce
from .relation import check_epsilon

__all__ = [
    "RegionSpec",
    "RunRecord",
    "analytic_region",
    "grid_region",
    "region_for",
    "region_membership",
    "region_mask",
    "sample_region",
    "coverage_fraction",
    "front_to_csv",
    "write_front_csv",
    "read_front_csv",
    "parse_front_csv",
    "write_atomic",
    "child_seed",
    "sweep",
]

_SEED_MIX = 0x9E3779B97F4A7C15
_U64 = 2**64


@dataclass(frozen=True)
class RegionSpec:
    """Epsilon-BZ reference region of a game.

    ``best_response`` maps an array of profiles ``(k, n)`` to the highest
    payoff each player can reach when all other players deviate; a profile
    belongs to the region iff ``u_i(s) + eps >= best_i(s)`` for every ``i``.
    ``box`` bounds the region in strategy space (used for sampling).
    """

    game: Game
    epsilon: float
    description: str
    box: tuple[tuple[float, float], ...]
    best_response: Callable[[np.ndarray], np.ndarray] | None = None
    nodes: np.ndarray | None = field(default=None, repr=False)

    @property
    def analytic(self) -> bool:
        return self.best_response is not None


def g1_root(eps: float) -> float:
    """Root in ``[-2, 1]`` of ``2x^2 + 3x = 5 - eps`` (valid for ``eps < 3``)."""
    return (-3 + math.sqrt(9 + 8 * (5 - eps))) / 4


def _g1_best(game: Game) -> Callable[[np.ndarray], np.ndarray]:
    # u1 is increasing in s2 and u2 is maximised over s1 at s1 = 1
    def best(x: np.ndarray) -> np.ndarray:
        at_s2 = x.copy()
        at_s2[:, 1] = 1.0
        at_s1 = x.copy()
        at_s1[:, 0] = 1.0
        return np.stack([game.payoff(at_s2)[:, 0], game.payoff(at_s1)[:, 1]], axis=-1)

    return best


def _vcm_best(game: Game) -> Callable[[np.ndarray], np.ndarray]:
    # every u_i is increasing in the other players' contributions
    def best(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        for i in range(x.shape[1]):
            others_full = np.full_like(x, 10.0)
            others_full[:, i] = x[:, i]
            out[:, i] = game.payoff(others_full)[:, i]
        return out

    return best


def analytic_region(game: Game, eps) -> RegionSpec:
    """Closed-form region for the builtin continuous games ``g1`` and ``vcm<n>``."""
    eps = check_epsilon(eps)
    if game.payoff is _g1_payoff:
        s1_lo = g1_root(eps) if eps < 3 else -2.0
        s2_lo = max(-2.0, 1.0 - eps)
        desc = f"s2 in [{s2_lo!r}, 1], 2*s1^2 + 3*s1 >= {5 - eps!r}"
        return RegionSpec(game, eps, desc, ((s1_lo, 1.0), (s2_lo, 1.0)), _g1_best(game))
    if game.payoff is _vcm_payoff:
        n = game.n
        lo = max(0.0, 10.0 - 2.5 * eps)
        desc = f"sum_(j != i) s_j >= {10 * (n - 1) - 2.5 * eps!r} for every i"
        return RegionSpec(game, eps, desc, tuple((lo, 10.0) for _ in range(n)), _vcm_best(game))
    raise ValueError(f"no analytic region for game {game.name!r}")


def grid_region(game: Game, eps, grid: GridSpec = GridSpec()) -> RegionSpec:
    """Region given by the grid oracle's epsilon-BZ nodes (for arbitrary games)."""
    eps = check_epsilon(eps)
    nodes = np.array(bz_set_bruteforce(game, eps, grid), dtype=float).reshape(-1, game.n)
    if len(nodes):
        box = tuple((float(lo), float(hi)) for lo, hi in zip(nodes.min(axis=0), nodes.max(axis=0)))
    else:
        box = tuple((sp.lower, sp.upper) for sp in game.spaces)
    desc = f"grid oracle, {grid.points_per_interval} points per interval, {len(nodes)} nodes"
    return RegionSpec(game, eps, desc, box, None, nodes)


def region_for(game: Game, eps, grid: GridSpec = GridSpec()) -> RegionSpec:
    try:
        return analytic_region(game, eps)
    except ValueError:
        return grid_region(game, eps, grid)


def region_membership(region: RegionSpec, s, game: Game | None = None) -> bool:
    """Whether profile ``s`` lies in ``region``."""
    if game is not None and game.name != region.game.name:
        raise ValueError(f"region is for {region.game.name!r}, not {game.name!r}")
    return bool(region_mask(region, np.asarray(s, dtype=float)[None, :])[0])


def region_mask(region: RegionSpec, profiles: np.ndarray) -> np.ndarray:
    x = region.game.check_profiles(profiles)
    if region.analytic:
        u = region.game.payoff(x)
        return ~np.any(u + region.epsilon < region.best_response(x), axis=1)
    # grid regions: exact node membership
    nodes = {tuple(row) for row in region.nodes.tolist()}
    return np.array([tuple(row) in nodes for row in x.tolist()], dtype=bool)


def sample_region(region: RegionSpec, samples: int, seed: int = 0, max_rounds: int = 64) -> np.ndarray:
    """Quasi-uniform points of the region (scrambled Halton draws in its box,
    kept when inside).  Grid regions return their nodes."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not region.analytic:
        return region.nodes
    lo = np.array([b[0] for b in region.box])
    hi = np.array([b[1] for b in region.box])
    sampler = qmc.Halton(d=len(lo), scramble=True, seed=seed)
    kept: list[np.ndarray] = []
    total = 0
    for _ in range(max_rounds):
        pts = lo + sampler.random(samples) * (hi - lo)
        pts = np.clip(pts, lo, hi)
        inside = pts[region_mask(region, pts)]
        kept.append(inside)
        total += len(inside)
        if total >= samples:
            break
    pts = np.vstack(kept)[:samples]
    if not len(pts):
        raise RuntimeError(f"could not sample region {region.description!r}")
    return pts


def coverage_fraction(front: FrontResult | np.ndarray, region: RegionSpec, samples: int = 1000,
                      radius: float = 0.1, seed: int = 0) -> float:
    """Fraction of region samples whose payoff vector has a front member within
    ``radius`` (L-infinity, payoff units)."""
    payoffs = front.payoffs if isinstance(front, FrontResult) else np.asarray(front, dtype=float)
    if payoffs.size == 0:
        raise ValueError("empty front")
    pts = sample_region(region, samples, seed)
    target = region.game.payoff(pts)
    dist, _ = cKDTree(payoffs).query(target, k=1, p=np.inf)
    return float(np.mean(dist <= radius))


# -- output -------------------------------------------------------------------


@dataclass
class RunRecord:
    command: str
    game: str
    epsilon: float
    seed: int
    config: dict
    output: str
    duration_s: float
    version: str

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt_strategy(value: float, space) -> str:
    if isinstance(space, FiniteSpace):
        return space.actions[int(value)]
    return repr(float(value))


def front_to_csv(game: Game, profiles: np.ndarray, payoffs: np.ndarray) -> str:
    """CSV text with columns ``s_1..s_n, u_1..u_n`` (shortest round-trip floats)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = game.n
    writer.writerow([f"s_{i}" for i in range(1, n + 1)] + [f"u_{i}" for i in range(1, n + 1)])
    for x, u in zip(profiles, payoffs):
        writer.writerow([_fmt_strategy(v, sp) for v, sp in zip(x, game.spaces)] + [repr(float(v)) for v in u])
    return buf.getvalue()


def write_front_csv(path, game: Game, front: FrontResult) -> None:
    write_atomic(path, front_to_csv(game, front.profiles.reshape(-1, game.n), front.payoffs.reshape(-1, game.n)))


def read_front_csv(path, game: Game) -> tuple[np.ndarray, np.ndarray]:
    return parse_front_csv(Path(path).read_text(), game)


def parse_front_csv(text: str, game: Game) -> tuple[np.ndarray, np.ndarray]:
    """Parse front CSV text back into ``(profiles, payoffs)`` arrays."""
    rows = list(csv.reader(io.StringIO(text)))
    n = game.n
    profiles, payoffs = [], []
    for row in rows[1:]:
        x = []
        for value, sp in zip(row[:n], game.spaces):
            x.append(sp.actions.index(value) if isinstance(sp, FiniteSpace) else float(value))
        profiles.append(x)
        payoffs.append([float(v) for v in row[n:]])
    return np.array(profiles, dtype=float).reshape(-1, n), np.array(payoffs, dtype=float).reshape(-1, n)


def child_seed(base_seed: int, index: int) -> int:
    return (base_seed ^ (((index + 1) * _SEED_MIX) % _U64)) % _U64


def _bbox(payoffs: np.ndarray, n: int) -> tuple[list[float], list[float], float]:
    if payoffs.size == 0:
        return [math.nan] * n, [math.nan] * n, 0.0
    lo, hi = payoffs.min(axis=0), payoffs.max(axis=0)
    return lo.tolist(), hi.tolist(), float(np.prod(hi - lo))


@dataclass
class SweepRow:
    epsilon: float
    seed: int
    front_size: int
    payoff_min: list[float]
    payoff_max: list[float]
    bbox_volume: float
    in_region: float
    coverage: float
    path: str = ""


def sweep(game: Game, epsilons: Sequence[float], config: EvolverConfig = EvolverConfig(),
          out_dir: str | os.PathLike | None = None, samples: int = 1000, radius: float = 0.1,
          grid: GridSpec = GridSpec(), version: str = "") -> list[SweepRow]:
    """Run the detector once per epsilon and summarise each front.

    With ``out_dir`` set, each front is written to ``eps<k>_<eps>.csv`` next
    to a JSON run record, and the summary goes to ``summary.csv``.
    """
    if not epsilons:
        raise ValueError("empty epsilon list")
    rows = []
    for k, eps in enumerate(epsilons):
        eps = check_epsilon(eps)
        cfg = replace(config, seed=child_seed(config.seed, k))
        t0 = time.perf_counter()
        front = run(game, eps, cfg)
        elapsed = time.perf_counter() - t0
        region = region_for(game, eps, grid)
        payoffs = front.payoffs.reshape(-1, game.n)
        lo, hi, vol = _bbox(payoffs, game.n)
        in_region = float(region_mask(region, front.profiles).mean()) if front.members else 0.0
        cov = coverage_fraction(front, region, samples, radius) if front.members else 0.0
        row = SweepRow(eps, cfg.seed, len(front.members), lo, hi, vol, in_region, cov)
        if out_dir is not None:
            path = Path(out_dir) / f"eps{k}_{eps!r}.csv"
            write_front_csv(path, game, front)
            record = RunRecord("sweep", game.name, eps, cfg.seed, cfg.as_dict(), str(path), elapsed, version)
            write_atomic(path.with_suffix(".json"), record.to_json())
            row.path = str(path)
        rows.append(row)
    if out_dir is not None:
        write_atomic(Path(out_dir) / "summary.csv", summary_csv(rows, game.n))
    return rows


def summary_csv(rows: list[SweepRow], n: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["epsilon", "seed", "front_size"]
        + [f"u_{i}_min" for i in range(1, n + 1)]
        + [f"u_{i}_max" for i in range(1, n + 1)]
        + ["bbox_volume", "in_region", "coverage", "file"]
    )
    for r in rows:
        writer.writerow(
            [repr(r.epsilon), r.seed, r.front_size]
            + [repr(v) for v in r.payoff_min]
            + [repr(v) for v in r.payoff_max]
            + [repr(r.bbox_volume), repr(r.in_region), repr(r.coverage), Path(r.path).name if r.path else ""]
        )
    return buf.getvalue()
