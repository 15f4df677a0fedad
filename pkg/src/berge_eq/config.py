"""Text configuration format for games.

Flat ``key = value`` lines, ``#`` comments and optional ``[section]``
headers.  Inside ``[game]`` (or before any header) keys are used verbatim;
inside any other section ``[foo]`` a key ``k`` is read as ``foo.k``.

Builtin games::

    name = my-vcm
    builtin = vcm
    players = 3

Finite games (action indices are 0-based, players 1-based)::

    name = pd
    players = 2
    actions.1 = Cooperate,Defect
    actions.2 = Cooperate,Defect
    payoff.0,0 = 2,2
    payoff.0,1 = 0,3
    ...

Continuous games with polynomial payoffs in ``s1..sn``::

    name = g1-copy
    players = 2
    bounds.1 = -2,1
    bounds.2 = -2,1
    payoff_expr.1 = -s1^2 - s1 + s2
    payoff_expr.2 = 2*s1^2 + 3*s1 - s2^2 - 3*s2
"""

from __future__ import annotations

import ast
import itertools
import re

import numpy as np

from .games import FiniteSpace, Game, IntervalSpace, finite_game, game_g1, game_vcm, prisoners_dilemma

__all__ = ["ConfigError", "load_game", "dump_game", "compile_polynomial"]

BUILTINS = ("pd", "g1", "vcm")


class ConfigError(ValueError):
    """Parse or validation error in a game configuration."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field {key!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.key = key


def _parse_lines(text: str) -> dict[str, tuple[str, int]]:
    entries: dict[str, tuple[str, int]] = {}
    section = "game"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", lineno)
        if section != "game":
            key = f"{section}.{key}"
        if key in entries:
            raise ConfigError(f"duplicate key (first defined on line {entries[key][1]})", lineno, key)
        entries[key] = (value, lineno)
    return entries


def _floats(value: str, line: int, key: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",")]
    except ValueError:
        raise ConfigError(f"expected comma separated numbers, got {value!r}", line, key) from None


def _player_keys(entries, prefix: str, n: int) -> list[tuple[str, str, int]]:
    out = []
    for i in range(1, n + 1):
        key = f"{prefix}.{i}"
        if key not in entries:
            raise ConfigError(f"missing key {key!r}", key=key)
        value, line = entries[key]
        out.append((key, value, line))
    extra = [k for k in entries if k.startswith(prefix + ".") and k not in {o[0] for o in out}]
    if extra:
        value, line = entries[extra[0]]
        raise ConfigError(f"unexpected key for a {n}-player game", line, extra[0])
    return out


_ALLOWED_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply, ast.Pow: np.power}


def compile_polynomial(expr: str, n: int):
    """Compile a polynomial in ``s1..sn`` (operators ``+ - * ^``, real
    literals, parentheses) into a vectorized function of ``x[..., n]``."""
    source = expr.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {expr!r}: {exc.msg}") from None

    def check(node):
        if isinstance(node, ast.Expression):
            return check(node.body)
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise ValueError(f"exponents must be non-negative integer literals in {expr!r}")
            check(node.left)
            check(node.right)
            return
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            return check(node.operand)
        if isinstance(node, ast.Constant) and type(node.value) in (int, float):
            return
        if isinstance(node, ast.Name):
            m = re.fullmatch(r"s([1-9][0-9]*)", node.id)
            if m and int(m.group(1)) <= n:
                return
            raise ValueError(f"unknown variable {node.id!r} in {expr!r} (use s1..s{n})")
        raise ValueError(f"unsupported syntax {ast.dump(node)[:40]!r} in {expr!r}")

    check(tree)

    def run(node, x):
        if isinstance(node, ast.Expression):
            return run(node.body, x)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return np.power(run(node.left, x), node.right.value)
            return _ALLOWED_BINOPS[type(node.op)](run(node.left, x), run(node.right, x))
        if isinstance(node, ast.UnaryOp):
            val = run(node.operand, x)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.Constant):
            return float(node.value)
        return x[..., int(node.id[1:]) - 1]

    def fn(x: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(run(tree, x), dtype=float), x.shape[:-1])

    return fn


def load_game(config_text: str) -> Game:
    """Build a :class:`Game` from configuration text."""
    entries = _parse_lines(config_text)

    def get(key, required=True):
        if key not in entries:
            if required:
                raise ConfigError(f"missing required key {key!r}", key=key)
            return None, None
        return entries[key]

    name, _ = get("name")
    players_raw, players_line = get("players")
    try:
        n = int(players_raw)
    except ValueError:
        raise ConfigError(f"players must be an integer, got {players_raw!r}", players_line, "players") from None
    if n < 2:
        raise ConfigError("players must be >= 2", players_line, "players")

    builtin, builtin_line = get("builtin", required=False)
    if builtin is not None:
        builtin = builtin.lower()
        if builtin not in BUILTINS:
            raise ConfigError(f"unknown builtin {builtin!r}, expected one of {BUILTINS}", builtin_line, "builtin")
        if builtin == "vcm":
            return game_vcm(n)
        game = prisoners_dilemma() if builtin == "pd" else game_g1()
        if n != game.n:
            raise ConfigError(f"builtin {builtin!r} has {game.n} players", players_line, "players")
        return game

    has_actions = any(k.startswith("actions.") for k in entries)
    has_bounds = any(k.startswith("bounds.") for k in entries)
    if has_actions == has_bounds:
        raise ConfigError("give either actions.<i> (finite game) or bounds.<i> (continuous game)")

    if has_actions:
        actions = []
        for key, value, line in _player_keys(entries, "actions", n):
            labels = [a.strip() for a in value.split(",")]
            try:
                FiniteSpace(tuple(labels))
            except ValueError as exc:
                raise ConfigError(str(exc), line, key) from None
            actions.append(labels)
        sizes = [len(a) for a in actions]
        table = np.empty(tuple(sizes) + (n,))
        seen = set()
        for key, (value, line) in entries.items():
            if not key.startswith("payoff."):
                continue
            tup = key[len("payoff."):].strip().strip("()")
            try:
                idx = tuple(int(t) for t in tup.split(","))
            except ValueError:
                raise ConfigError(f"bad profile tuple {tup!r}", line, key) from None
            if len(idx) != n or any(not 0 <= j < k for j, k in zip(idx, sizes)):
                raise ConfigError(f"profile {idx} does not fit action counts {sizes}", line, key)
            vals = _floats(value, line, key)
            if len(vals) != n:
                raise ConfigError(f"expected {n} payoffs, got {len(vals)}", line, key)
            if idx in seen:
                raise ConfigError(f"profile {idx} given twice", line, key)
            seen.add(idx)
            table[idx] = vals
        missing = [p for p in itertools.product(*(range(k) for k in sizes)) if p not in seen]
        if missing:
            raise ConfigError(
                f"payoff table size mismatch: {len(seen)} of {int(np.prod(sizes))} profiles given, "
                f"first missing {missing[0]}"
            )
        return finite_game(name, actions, table)

    spaces = []
    for key, value, line in _player_keys(entries, "bounds", n):
        vals = _floats(value, line, key)
        if len(vals) != 2:
            raise ConfigError("bounds need exactly 'lo,hi'", line, key)
        try:
            spaces.append(IntervalSpace(*vals))
        except ValueError as exc:
            raise ConfigError(str(exc), line, key) from None
    funcs = []
    for key, value, line in _player_keys(entries, "payoff_expr", n):
        try:
            funcs.append(compile_polynomial(value, n))
        except ValueError as exc:
            raise ConfigError(str(exc), line, key) from None

    def payoff(x: np.ndarray) -> np.ndarray:
        return np.stack([f(x) for f in funcs], axis=-1)

    return Game(name, tuple(spaces), payoff)


def dump_game(game: Game) -> str:
    """Serialize a finite game to configuration text (round-trips exactly)."""
    if not game.is_finite or game.table is None:
        raise ValueError("only finite table games can be dumped")
    lines = [f"name = {game.name}", f"players = {game.n}"]
    for i, sp in enumerate(game.spaces, start=1):
        lines.append(f"actions.{i} = {','.join(sp.actions)}")
    for idx in itertools.product(*(range(sp.size) for sp in game.spaces)):
        vals = ",".join(repr(float(v)) for v in game.table[idx])
        lines.append(f"payoff.{','.join(map(str, idx))} = {vals}")
    return "\n".join(lines) + "\n"
