"""A priori realization: one move per position is committed before the play starts.

The play follows the committed moves, so the first revisit of any position
closes a lasso and the outcome is the cycle.  Chance positions commit as well.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .core import (
    CYCLE,
    TERMINAL,
    BudgetExceeded,
    GameError,
    GameStructure,
    OutcomeDistribution,
    Payoff,
    budget,
    check_mixed,
    effective_payoff,
    pure_strategies,
    transition,
    with_strategy,
)
from .markov import _rng, _Sampler

APRIORI_BUDGET = 10**6


def apriori_limit(g: GameStructure, y: Mapping, v0: str, max_nodes: Optional[int] = None) -> OutcomeDistribution:
    """Exact outcome distribution from ``v0`` by enumerating every play.

    Each play (terminal path or lasso) contributes the product of the
    probabilities of its moves.  Raises :class:`BudgetExceeded` when more than
    ``max_nodes`` branch nodes would be explored (default ``GG_BUDGET`` or 10**6).
    """
    if g.kind.get(v0) in (None, TERMINAL):
        raise GameError(f"start {v0!r} must be a non-terminal position")
    check_mixed(g, y)
    limit = budget(APRIORI_BUDGET) if max_nodes is None else max_nodes
    moves = {v: list(transition(g, y, v).items()) for v in g.nonterminals}
    probs: Dict[object, Fraction] = {a: Fraction(0) for a in g.terminals}
    probs[CYCLE] = Fraction(0)
    nodes = 0
    # explicit stack of (position, probability so far, positions on the walk)
    stack: List[Tuple[str, Fraction, frozenset]] = [(v0, Fraction(1), frozenset())]
    while stack:
        v, pr, walk = stack.pop()
        if g.kind[v] == TERMINAL:
            probs[v] += pr
            continue
        if v in walk:
            probs[CYCLE] += pr
            continue
        nodes += 1
        if nodes > limit:
            raise BudgetExceeded(f"a priori enumeration exceeded {limit} branch nodes")
        walk = walk | {v}
        for w, q in moves[v]:
            stack.append((w, pr * q, walk))
    return OutcomeDistribution(probs, v0)


def apriori_limits(g: GameStructure, y: Mapping, max_nodes: Optional[int] = None) -> Dict[str, OutcomeDistribution]:
    return {v: apriori_limit(g, y, v, max_nodes) for v in g.nonterminals}


def best_pure_response_at(g: GameStructure, u: Payoff, y: Mapping, i: int, v0: str) -> Dict[str, str]:
    """Player ``i``'s best pure strategy from ``v0``.

    Ties go to the lexicographically smallest strategy, comparing
    (position id, target id) pairs in position-id order.
    """
    best, best_val = None, None
    for s in sorted(pure_strategies(g, i), key=lambda s: sorted(s.items())):
        val = effective_payoff(u, apriori_limit(g, with_strategy(g, y, s), v0), i)
        if best_val is None or val > best_val:
            best, best_val = s, val
    return best


def best_pure_responses(g: GameStructure, u: Payoff, y: Mapping, i: int) -> Dict[str, List[Dict[str, str]]]:
    """For every start, the full argmax set of player ``i``'s pure strategies."""
    strategies = list(pure_strategies(g, i))
    values = [apriori_limits(g, with_strategy(g, y, s)) for s in strategies]
    out = {}
    for v in g.nonterminals:
        vals = [effective_payoff(u, d[v], i) for d in values]
        top = max(vals)
        out[v] = [s for s, x in zip(strategies, vals) if x == top]
    return out


def uniform_best_response(g: GameStructure, u: Payoff, y: Mapping, i: int) -> Optional[Dict[str, str]]:
    """A pure strategy optimal from every start at once, or None when the argmax sets do not meet."""
    sets = best_pure_responses(g, u, y, i)
    common = None
    for v, ss in sets.items():
        keys = {tuple(sorted(s.items())) for s in ss}
        common = keys if common is None else common & keys
    if not common:
        return None
    for s in pure_strategies(g, i):
        if tuple(sorted(s.items())) in common:
            return s
    return None


def simulate_apriori(g: GameStructure, y: Mapping, v0: str, seed=None):
    """One a priori play from ``v0``; moves are drawn lazily on first visit."""
    return sample_apriori(g, y, v0, 1, seed)[0]


def sample_apriori(g: GameStructure, y: Mapping, v0: str, n: int, seed=None) -> list:
    check_mixed(g, y)
    sampler = _Sampler(g, y, _rng(seed))
    out = []
    for _ in range(n):
        seen = set()
        v = v0
        while g.kind[v] != TERMINAL:
            if v in seen:
                v = CYCLE
                break
            seen.add(v)
            v = sampler.draw(v)
        out.append(v)
    return out
