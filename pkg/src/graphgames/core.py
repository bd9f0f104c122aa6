"""Game structures, pure plays, normal forms and effective payoffs.

All probabilities and payoffs are :class:`fractions.Fraction` values.  Terminal
outcomes are identified by their position id; the single cycle outcome is the
:data:`CYCLE` sentinel, which is never a position id.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

PLAYER = "player"
CHANCE = "chance"
TERMINAL = "terminal"
KINDS = (PLAYER, CHANCE, TERMINAL)

DEFAULT_BUDGET = 10**6


class _Cycle:
    """The outcome shared by every infinite play."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "c"

    def __reduce__(self):
        return (_Cycle, ())


CYCLE = _Cycle()

Outcome = Union[str, _Cycle]
PureProfile = Dict[str, str]
MixedProfile = Dict[str, Dict[str, Fraction]]


class GameError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration grew past its configured budget."""


def budget(default: int = DEFAULT_BUDGET) -> int:
    """Enumeration budget, overridable with the ``GG_BUDGET`` environment variable."""
    env = os.environ.get("GG_BUDGET")
    return int(env) if env else default


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an int, str or Fraction")
    return Fraction(x)


@dataclass(frozen=True)
class Position:
    id: str
    kind: str
    player: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GameError(f"unknown position kind {self.kind!r} for {self.id!r}")
        if (self.kind == PLAYER) != (self.player is not None):
            raise GameError(f"position {self.id!r}: player index required iff kind is 'player'")


@dataclass(frozen=True)
class GameStructure:
    """A digraph with a position partition, chance distributions and an optional start.

    ``moves`` keeps insertion order; the order of the arcs leaving a position is
    the order used when enumerating pure strategies.
    """

    positions: Tuple[Position, ...]
    moves: Tuple[Tuple[str, str], ...]
    chance: Mapping[str, Mapping[str, Fraction]] = field(default_factory=dict)
    initial: Optional[str] = None
    n_players: Optional[int] = None

    @classmethod
    def build(cls, positions, moves, chance=None, initial=None, n_players=None):
        """Convenience constructor accepting tuples/lists/dicts and plain numbers."""
        pos = tuple(p if isinstance(p, Position) else Position(*p) for p in positions)
        mv = tuple((str(a), str(b)) for a, b in moves)
        ch = {
            str(v): {str(w): as_fraction(q) for w, q in dist.items()}
            for v, dist in (chance or {}).items()
        }
        if n_players is None:
            n_players = max((p.player for p in pos if p.kind == PLAYER), default=0)
        return cls(pos, mv, ch, initial, n_players)

    @cached_property
    def kind(self) -> Dict[str, str]:
        return {p.id: p.kind for p in self.positions}

    @cached_property
    def owner(self) -> Dict[str, int]:
        return {p.id: p.player for p in self.positions if p.kind == PLAYER}

    @cached_property
    def succ(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {p.id: [] for p in self.positions}
        for a, b in self.moves:
            out.setdefault(a, []).append(b)
        return out

    @cached_property
    def ids(self) -> List[str]:
        return [p.id for p in self.positions]

    @property
    def terminals(self) -> List[str]:
        return [p.id for p in self.positions if p.kind == TERMINAL]

    @property
    def nonterminals(self) -> List[str]:
        return [p.id for p in self.positions if p.kind != TERMINAL]

    @property
    def chance_positions(self) -> List[str]:
        return [p.id for p in self.positions if p.kind == CHANCE]

    @property
    def outcomes(self) -> List[Outcome]:
        return [*self.terminals, CYCLE]

    @property
    def players(self) -> List[int]:
        return list(range(1, (self.n_players or 0) + 1))

    def player_positions(self, i: Optional[int] = None) -> List[str]:
        return [p.id for p in self.positions if p.kind == PLAYER and (i is None or p.player == i)]

    @property
    def is_deterministic(self) -> bool:
        return not self.chance_positions

    @property
    def is_play_once(self) -> bool:
        return all(len(self.player_positions(i)) == 1 for i in self.players)

    def replace(self, **kw) -> "GameStructure":
        data = dict(
            positions=self.positions,
            moves=self.moves,
            chance=self.chance,
            initial=self.initial,
            n_players=self.n_players,
        )
        data.update(kw)
        return GameStructure(**data)


@dataclass(frozen=True)
class Payoff:
    """Values ``u(i, a)`` keyed by player index and outcome."""

    values: Mapping[int, Mapping[Outcome, Fraction]]

    @classmethod
    def build(cls, table) -> "Payoff":
        vals = {}
        for i, row in table.items():
            vals[int(i)] = {
                (CYCLE if a == "c" or a is CYCLE else str(a)): as_fraction(x) for a, x in row.items()
            }
        return cls(vals)

    def __call__(self, i: int, a: Outcome) -> Fraction:
        return self.values[i][a]

    def scale(self) -> Fraction:
        return max(abs(x) for row in self.values.values() for x in row.values())

    def check_total(self, g: GameStructure):
        for i in g.players:
            row = self.values.get(i)
            if row is None:
                raise GameError(f"no payoff row for player {i}")
            missing = [a for a in g.outcomes if a not in row]
            if missing:
                raise GameError(f"player {i} has no payoff for {missing}")


@dataclass(frozen=True)
class OutcomeDistribution:
    probs: Mapping[Outcome, Fraction]
    initial: str

    def __getitem__(self, a: Outcome) -> Fraction:
        return self.probs.get(a, Fraction(0))

    def as_tuple(self, order: Sequence[Outcome]) -> Tuple[Fraction, ...]:
        return tuple(self[a] for a in order)

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))


@dataclass(frozen=True)
class DeviationCertificate:
    """Player ``player`` strictly gains by switching to ``deviation`` when play starts at ``start``."""

    player: int
    start: str
    deviation: Mapping[str, str]
    old: Fraction
    new: Fraction

    def __post_init__(self):
        if not self.new > self.old:
            raise ValueError(f"not an improvement: {self.new} <= {self.old}")


# ---------------------------------------------------------------- validation


def validate(g: GameStructure, allow_forced: bool = False) -> List[str]:
    """Return a list of human-readable invariant violations (empty when valid)."""
    problems = []
    seen = set()
    for p in g.positions:
        if p.id in seen:
            problems.append(f"duplicate position id {p.id!r}")
        seen.add(p.id)
        if p.id == "c":
            problems.append("position id 'c' is reserved for the cycle outcome")
        if p.kind == PLAYER and not (1 <= p.player <= (g.n_players or 0)):
            problems.append(f"position {p.id!r}: player {p.player} outside 1..{g.n_players}")
    arcs = set()
    for a, b in g.moves:
        for x in (a, b):
            if x not in seen:
                problems.append(f"arc ({a}, {b}) references unknown position {x!r}")
        if (a, b) in arcs:
            problems.append(f"duplicate arc ({a}, {b})")
        arcs.add((a, b))
    for p in g.positions:
        deg = len(g.succ.get(p.id, ()))
        if p.kind == TERMINAL and deg:
            problems.append(f"terminal out-degree: {p.id!r} has {deg} outgoing arcs")
        elif p.kind != TERMINAL and deg == 0:
            problems.append(f"dead end: non-terminal {p.id!r} has no moves")
        elif p.kind != TERMINAL and deg == 1 and not allow_forced:
            problems.append(f"forced move: {p.id!r} has a single move")
    for v in g.chance_positions:
        dist = g.chance.get(v)
        if dist is None:
            problems.append(f"chance position {v!r} has no distribution")
            continue
        for w, q in dist.items():
            if (v, w) not in arcs:
                problems.append(f"chance position {v!r}: probability on missing arc ({v}, {w})")
            if q < 0:
                problems.append(f"chance position {v!r}: negative probability on ({v}, {w})")
        for w in g.succ.get(v, ()):
            if w not in dist:
                problems.append(f"chance position {v!r}: arc ({v}, {w}) has no probability")
        total = sum(dist.values(), Fraction(0))
        if total != 1:
            problems.append(f"chance mass != 1 at {v!r} (sum {total})")
    for v in g.chance:
        if g.kind.get(v) != CHANCE:
            problems.append(f"distribution given for non-chance position {v!r}")
    if g.initial is not None:
        if g.initial not in seen:
            problems.append(f"initial position {g.initial!r} does not exist")
        elif g.kind[g.initial] == TERMINAL:
            problems.append(f"initial position {g.initial!r} is terminal")
    return problems


def check(g: GameStructure, allow_forced: bool = False) -> GameStructure:
    problems = validate(g, allow_forced)
    if problems:
        raise GameError("; ".join(problems))
    return g


def contract_forced_moves(g: GameStructure) -> GameStructure:
    """Merge every position with a single move into its successor, to fixpoint.

    Raises :class:`GameError` on a cycle made only of forced moves, and when the
    initial position would contract onto a terminal.
    """
    check(g, allow_forced=True)
    positions = {p.id: p for p in g.positions}
    succ = {v: list(ws) for v, ws in g.succ.items()}
    chance = {v: dict(d) for v, d in g.chance.items()}
    initial = g.initial

    while True:
        forced = [v for v in positions if positions[v].kind != TERMINAL and len(succ[v]) == 1]
        if not forced:
            break
        # follow the forced chain from the first forced position to find its sink
        v = forced[0]
        chain = [v]
        w = succ[v][0]
        while positions[w].kind != TERMINAL and len(succ[w]) == 1:
            if w in chain:
                raise GameError(f"forced cycle through {', '.join(chain)}")
            chain.append(w)
            w = succ[w][0]
        if w in chain:
            raise GameError(f"forced cycle through {', '.join(chain)}")
        target = w
        for x in chain:
            del positions[x]
            del succ[x]
            chance.pop(x, None)
        for u, ws in succ.items():
            if not any(x in chain for x in ws):
                continue
            new = []
            for x in ws:
                y = target if x in chain else x
                if y not in new:
                    new.append(y)
            if u in chance:
                dist = {}
                for x, q in chance[u].items():
                    y = target if x in chain else x
                    dist[y] = dist.get(y, Fraction(0)) + q
                chance[u] = dist
            succ[u] = new
        if initial in chain:
            if positions[target].kind == TERMINAL:
                raise GameError(f"initial position {initial!r} contracts onto terminal {target!r}")
            initial = target

    moves = tuple((v, w) for v in positions for w in succ[v])
    return GameStructure(tuple(positions.values()), moves, chance, initial, g.n_players)


def initializing_extension(
    g: GameStructure, q0: Mapping[str, object], start_id: str = "v0"
) -> GameStructure:
    """Add a chance start ``start_id`` with an arc to every non-terminal of ``g``."""
    if g.initial is not None:
        raise GameError("game structure is already initialized")
    if start_id in g.kind:
        raise GameError(f"position id {start_id!r} already in use")
    q = {str(v): as_fraction(x) for v, x in q0.items()}
    for v, x in q.items():
        if v not in g.kind or g.kind[v] == TERMINAL:
            raise GameError(f"q0 puts mass on {v!r}, which is not a non-terminal position")
        if x < 0:
            raise GameError(f"q0 has negative mass on {v!r}")
    if sum(q.values(), Fraction(0)) != 1:
        raise GameError("q0 must sum to 1")
    targets = g.nonterminals
    dist = {v: q.get(v, Fraction(0)) for v in targets}
    chance = dict(g.chance)
    chance[start_id] = dist
    return GameStructure(
        (*g.positions, Position(start_id, CHANCE)),
        (*g.moves, *((start_id, v) for v in targets)),
        chance,
        start_id,
        g.n_players,
    )


# ------------------------------------------------------------ pure strategies


def play_pure(
    g: GameStructure,
    s: Mapping[str, str],
    v0: str,
    chance_choice: Optional[Mapping[str, str]] = None,
) -> Outcome:
    """Follow ``s`` (and ``chance_choice``) from ``v0``; a revisit yields :data:`CYCLE`."""
    chance_choice = chance_choice or {}
    seen = set()
    v = v0
    while g.kind[v] != TERMINAL:
        if v in seen:
            return CYCLE
        seen.add(v)
        if g.kind[v] == CHANCE:
            try:
                v = chance_choice[v]
            except KeyError:
                raise GameError(f"no chance_choice entry for chance position {v!r}") from None
        else:
            v = s[v]
    return v


def pure_strategies(g: GameStructure, i: int) -> Iterator[PureProfile]:
    """Every pure strategy of player ``i``, in arc order (lexicographic by position)."""
    vs = g.player_positions(i)
    for combo in itertools.product(*(g.succ[v] for v in vs)):
        yield dict(zip(vs, combo))


def pure_profiles(g: GameStructure, limit: Optional[int] = None) -> Iterator[PureProfile]:
    vs = g.player_positions()
    count = 1
    for v in vs:
        count *= len(g.succ[v])
    limit = budget() if limit is None else limit
    if count > limit:
        raise BudgetExceeded(f"{count} pure profiles exceed budget {limit}")
    for combo in itertools.product(*(g.succ[v] for v in vs)):
        yield dict(zip(vs, combo))


def profile_key(s: Mapping[str, str]) -> Tuple[Tuple[str, str], ...]:
    return tuple(sorted(s.items()))


def normal_form(g: GameStructure) -> Dict[tuple, object]:
    """Map each pure profile (as :func:`profile_key`) to its outcome.

    For an initialized structure the value is the outcome from the initial
    position; otherwise it is a dict ``start -> outcome`` over all non-terminals.
    """
    if not g.is_deterministic:
        raise GameError("not deterministic: normal form needs a structure without chance positions")
    table = {}
    for s in pure_profiles(g):
        if g.initial is not None:
            table[profile_key(s)] = play_pure(g, s, g.initial)
        else:
            table[profile_key(s)] = {v: play_pure(g, s, v) for v in g.nonterminals}
    return table


def point_mass(g: GameStructure, s: Mapping[str, str]) -> MixedProfile:
    return {v: {w: Fraction(int(w == s[v])) for w in g.succ[v]} for v in s}


def with_strategy(g: GameStructure, y: Mapping, s: Mapping[str, str]) -> dict:
    """``y`` with the positions in ``s`` replaced by point masses."""
    z = dict(y)
    for v, w in s.items():
        z[v] = {x: Fraction(int(x == w)) for x in g.succ[v]}
    return z


def effective_payoff(u: Payoff, P: OutcomeDistribution, i: int) -> Fraction:
    row = u.values[i]
    extra = [a for a in P.probs if a not in row]
    if extra:
        raise GameError(f"outcomes {extra} have no payoff for player {i}")
    return sum((P.probs[a] * row[a] for a in P.probs), Fraction(0))


def count_strategies(g: GameStructure, i: int) -> Tuple[int, int]:
    """(number of pure strategies, dimension of the independently mixed strategies)."""
    degrees = [len(g.succ[v]) for v in g.player_positions(i)]
    k = 1
    for d in degrees:
        k *= d
    k_mixed = sum(d - 1 for d in degrees)
    # k - 1 is the dimension of the full mixed-strategy simplex
    if degrees and all(d >= 2 for d in degrees):
        assert k_mixed <= k - 1 and ((k_mixed == k - 1) == (len(degrees) == 1)), (k, k_mixed)
    return k, k_mixed


def check_mixed(g: GameStructure, y: Mapping[str, Mapping[str, Fraction]]):
    for v in g.player_positions():
        if v not in y:
            raise GameError(f"mixed profile has no distribution for {v!r}")
        dist = y[v]
        if any(w not in g.succ[v] for w in dist):
            raise GameError(f"mixed profile at {v!r} puts mass off its arcs")
        if any(isinstance(x, float) for x in dist.values()):
            raise TypeError(f"mixed profile at {v!r} holds floats; use exact rationals")
        if any(x < 0 for x in dist.values()) or sum(dist.values(), Fraction(0)) != 1:
            raise GameError(f"mixed profile at {v!r} is not a probability distribution")


def transition(g: GameStructure, y: Mapping[str, Mapping[str, Fraction]], v: str) -> Dict[str, Fraction]:
    """Positive-probability successors of non-terminal ``v`` under ``y`` and ``q``."""
    dist = g.chance[v] if g.kind[v] == CHANCE else y[v]
    return {w: q for w, q in dist.items() if q > 0}
