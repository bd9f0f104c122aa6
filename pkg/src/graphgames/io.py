"""JSON game files, profile files and exact rational strings."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from .core import CHANCE, CYCLE, KINDS, PLAYER, GameError, GameStructure, Payoff, Position

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class ParseError(GameError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer; floats and zero denominators are rejected."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL.match(str(text))
    if not m:
        raise ParseError(f"not a rational 'p/q' string: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None


def game_from_dict(data: dict) -> Tuple[GameStructure, Optional[Payoff]]:
    try:
        n = int(data["players"])
        positions = []
        for k, p in enumerate(data["positions"]):
            kind = p["kind"]
            if kind not in KINDS:
                raise ParseError(f"positions[{k}]: unknown kind {kind!r}")
            player = p.get("player")
            if (kind == PLAYER) != (player is not None):
                raise ParseError(f"positions[{k}] ({p['id']}): 'player' is required iff kind is 'player'")
            positions.append(Position(str(p["id"]), kind, None if player is None else int(player)))
        kinds = {p.id: p.kind for p in positions}
        moves, chance = [], {}
        for k, m in enumerate(data["moves"]):
            a, b = str(m["from"]), str(m["to"])
            moves.append((a, b))
            if kinds.get(a) == CHANCE:
                if "prob" not in m:
                    raise ParseError(f"moves[{k}] ({a} -> {b}): chance move needs 'prob'")
                chance.setdefault(a, {})[b] = parse_rational(m["prob"])
            elif "prob" in m:
                raise ParseError(f"moves[{k}] ({a} -> {b}): 'prob' only allowed on chance moves")
    except KeyError as e:
        raise ParseError(f"missing key {e}") from None
    for v in kinds:
        if kinds[v] == CHANCE:
            chance.setdefault(v, {})
    g = GameStructure(tuple(positions), tuple(moves), chance, data.get("initial"), n)
    u = payoff_from_dict(data["payoffs"]) if "payoffs" in data else None
    return g, u


def payoff_from_dict(table: dict) -> Payoff:
    return Payoff.build({int(i): {a: parse_rational(x) for a, x in row.items()} for i, row in table.items()})


def payoff_to_dict(u: Payoff) -> dict:
    return {
        str(i): {("c" if a is CYCLE else a): format_rational(x) for a, x in row.items()}
        for i, row in sorted(u.values.items())
    }


def game_to_dict(g: GameStructure, u: Optional[Payoff] = None) -> dict:
    positions = []
    for p in g.positions:
        d = {"id": p.id, "kind": p.kind}
        if p.player is not None:
            d["player"] = p.player
        positions.append(d)
    moves = []
    for a, b in g.moves:
        m = {"from": a, "to": b}
        if g.kind[a] == CHANCE:
            m["prob"] = format_rational(g.chance[a][b])
        moves.append(m)
    data = {"players": g.n_players, "positions": positions, "moves": moves}
    if u is not None:
        data["payoffs"] = payoff_to_dict(u)
    if g.initial is not None:
        data["initial"] = g.initial
    return data


def dumps_game(g: GameStructure, u: Optional[Payoff] = None) -> str:
    return json.dumps(game_to_dict(g, u), indent=2) + "\n"


def loads_game(text: str, source: str = "<string>") -> Tuple[GameStructure, Optional[Payoff]]:
    data = _load_json(text, source)
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    return game_from_dict(data)


def load_game(path: Union[str, Path]) -> Tuple[GameStructure, Optional[Payoff]]:
    path = Path(path)
    return loads_game(path.read_text(), str(path))


def save_game(path: Union[str, Path], g: GameStructure, u: Optional[Payoff] = None):
    Path(path).write_text(dumps_game(g, u))


def load_payoff(path: Union[str, Path]) -> Payoff:
    path = Path(path)
    data = _load_json(path.read_text(), str(path))
    return payoff_from_dict(data.get("payoffs", data))


def save_payoff(path: Union[str, Path], u: Payoff):
    Path(path).write_text(json.dumps({"payoffs": payoff_to_dict(u)}, indent=2) + "\n")


def profile_from_dict(data: dict) -> Dict[str, Dict[str, Fraction]]:
    """``{position: {target: "p/q"}}`` or ``{position: [[target, "p/q"], ...]}``."""
    y = {}
    for v, dist in data.items():
        items = dist.items() if isinstance(dist, dict) else dist
        y[str(v)] = {str(w): parse_rational(q) for w, q in items}
    return y


def profile_to_dict(y) -> dict:
    return {v: {w: format_rational(q) for w, q in dist.items()} for v, dist in y.items()}


def load_profile(path: Union[str, Path]) -> Dict[str, Dict[str, Fraction]]:
    path = Path(path)
    return profile_from_dict(_load_json(path.read_text(), str(path)))


def data_path(name: str) -> Path:
    """Path of a bundled fixture such as ``"g2.game"``."""
    return Path(__file__).parent / "data" / name
