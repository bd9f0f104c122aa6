"""Markov realization: a fresh move is drawn at every visit of a position."""

from __future__ import annotations

from collections import Counter, deque
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Set

import numpy as np

from . import _linalg
from .core import (
    CYCLE,
    TERMINAL,
    GameError,
    GameStructure,
    OutcomeDistribution,
    Payoff,
    check_mixed,
    effective_payoff,
    pure_strategies,
    transition,
    with_strategy,
)


class _StepCap:
    def __repr__(self):
        return "step-cap"


STEP_CAP = _StepCap()


def _reachable(g, y, sources: Iterable[str]) -> List[str]:
    order, seen = [], set()
    queue = deque(sources)
    while queue:
        v = queue.popleft()
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        if g.kind[v] != TERMINAL:
            queue.extend(transition(g, y, v))
    return order


def trapped_states(g: GameStructure, y, states: Iterable[str]) -> Set[str]:
    """Non-terminals among ``states`` from which no terminal is reachable.

    These are exactly the closed recurrent classes of non-terminals together with
    the states that can only drain into them; from each of them the play cycles
    with probability 1.
    """
    states = list(states)
    pred: Dict[str, List[str]] = {v: [] for v in states}
    for v in states:
        if g.kind[v] != TERMINAL:
            for w in transition(g, y, v):
                pred.setdefault(w, []).append(v)
    alive = set()
    queue = deque(v for v in states if g.kind[v] == TERMINAL)
    while queue:
        w = queue.popleft()
        for v in pred.get(w, ()):
            if v not in alive:
                alive.add(v)
                queue.append(v)
    return {v for v in states if g.kind[v] != TERMINAL and v not in alive}


def _absorption(g: GameStructure, y, states: List[str]) -> Dict[str, OutcomeDistribution]:
    terminals = [v for v in states if g.kind[v] == TERMINAL]
    trapped = trapped_states(g, y, states)
    transient = [v for v in states if g.kind[v] != TERMINAL and v not in trapped]
    index = {v: k for k, v in enumerate(transient)}
    cols = {a: k for k, a in enumerate(terminals)}
    c_col = len(terminals)
    n = len(transient)
    one, zero = Fraction(1), Fraction(0)
    A = [[zero] * n for _ in range(n)]
    B = [[zero] * (c_col + 1) for _ in range(n)]
    for r, v in enumerate(transient):
        A[r][r] = one
        for w, q in transition(g, y, v).items():
            if w in index:
                A[r][index[w]] -= q
            elif w in cols:
                B[r][cols[w]] += q
            else:
                B[r][c_col] += q
    X = _linalg.solve(A, B) if n else []
    out = {}
    for v in transient:
        row = X[index[v]]
        probs = {a: row[cols[a]] for a in terminals}
        probs[CYCLE] = row[c_col]
        out[v] = OutcomeDistribution(probs, v)
    for v in trapped:
        probs = {a: zero for a in terminals}
        probs[CYCLE] = one
        out[v] = OutcomeDistribution(probs, v)
    return out


def _full(g: GameStructure, d: OutcomeDistribution) -> OutcomeDistribution:
    probs = {a: d[a] for a in g.terminals}
    probs[CYCLE] = d[CYCLE]
    return OutcomeDistribution(probs, d.initial)


def markov_limit(g: GameStructure, y: Mapping, v0: str) -> OutcomeDistribution:
    """Exact absorption probabilities from ``v0``; ``CYCLE`` gets the mass never absorbed.

    Only positions reachable from ``v0`` through positive-probability arcs enter
    the linear system.
    """
    if g.kind.get(v0) in (None, TERMINAL):
        raise GameError(f"start {v0!r} must be a non-terminal position")
    check_mixed(g, y)
    states = _reachable(g, y, [v0])
    return _full(g, _absorption(g, y, states)[v0])


def markov_limits(g: GameStructure, y: Mapping) -> Dict[str, OutcomeDistribution]:
    """:func:`markov_limit` for every non-terminal start, from a single solve."""
    check_mixed(g, y)
    res = _absorption(g, y, g.ids)
    return {v: _full(g, res[v]) for v in g.nonterminals}


def payoff_vector(g: GameStructure, u: Payoff, y: Mapping, i: int) -> Dict[str, Fraction]:
    """Effective payoff of player ``i`` from every non-terminal start."""
    return {v: effective_payoff(u, d, i) for v, d in markov_limits(g, y).items()}


def uniformly_best_pure_response(g: GameStructure, u: Payoff, y: Mapping, i: int) -> Dict[str, str]:
    """A pure strategy of player ``i`` that is optimal from every start simultaneously."""
    candidates = []
    for s in pure_strategies(g, i):
        candidates.append((s, payoff_vector(g, u, with_strategy(g, y, s), i)))
    for s, vec in candidates:
        if all(all(vec[v] >= other[v] for v in vec) for _, other in candidates):
            return s
    raise RuntimeError(f"no uniformly best pure response for player {i}; this is a bug")


# ------------------------------------------------------------------ sampling


class _Sampler:
    """Float-weighted move tables and a buffered uniform stream for fast sampling."""

    def __init__(self, g: GameStructure, y: Mapping, rng: np.random.Generator):
        self.g = g
        self.rng = rng
        self.table = {}
        for v in g.nonterminals:
            moves = transition(g, y, v)
            targets = list(moves)
            cum = np.cumsum([float(moves[w]) for w in targets])
            cum[-1] = 1.0
            self.table[v] = (targets, cum.tolist())
        self._buf: List[float] = []

    def uniform(self) -> float:
        if not self._buf:
            self._buf = self.rng.random(4096).tolist()
        return self._buf.pop()

    def draw(self, v: str) -> str:
        targets, cum = self.table[v]
        if len(targets) == 1:
            return targets[0]
        x = self.uniform()
        for w, c in zip(targets, cum):
            if x < c:
                return w
        return targets[-1]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def simulate_markov(g: GameStructure, y: Mapping, v0: str, seed=None, max_steps: int = 10_000):
    """One Markov play from ``v0``.

    Returns a terminal id, :data:`CYCLE` once the walk is trapped where no terminal
    is reachable, or :data:`STEP_CAP` if ``max_steps`` moves elapse first.
    """
    return sample_markov(g, y, v0, 1, seed, max_steps)[0]


def sample_markov(g: GameStructure, y: Mapping, v0: str, n: int, seed=None, max_steps: int = 10_000) -> list:
    check_mixed(g, y)
    sampler = _Sampler(g, y, _rng(seed))
    trapped = trapped_states(g, y, g.ids)
    out = []
    for _ in range(n):
        v = v0
        steps = 0
        while True:
            if g.kind[v] == TERMINAL:
                out.append(v)
                break
            if v in trapped:
                out.append(CYCLE)
                break
            if steps >= max_steps:
                out.append(STEP_CAP)
                break
            v = sampler.draw(v)
            steps += 1
    return out


def empirical(samples: list) -> Dict[object, float]:
    counts = Counter(samples)
    return {a: k / len(samples) for a, k in counts.items()}
