"""The cycle games G1, G2, G3 and Gn, their payoff families, and closed-form oracles.

In ``Gn`` player ``i`` controls ``v{i}`` and either follows the cycle to
``v{i+1}`` (``f``) or terminates in ``a{i}`` (``t``).  The follow arc is listed
first, so a play-once mixed profile is described by the follow probabilities
``p = (p1, ..., pn)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    CHANCE,
    CYCLE,
    PLAYER,
    TERMINAL,
    DeviationCertificate,
    GameError,
    GameStructure,
    OutcomeDistribution,
    Payoff,
    Position,
    as_fraction,
    play_pure,
)


def build_gn(n: int) -> GameStructure:
    if n < 2:
        raise GameError(f"Gn needs n >= 2, got {n}")
    positions = [Position(f"v{i}", PLAYER, i) for i in range(1, n + 1)]
    positions += [Position(f"a{i}", TERMINAL) for i in range(1, n + 1)]
    moves = []
    for i in range(1, n + 1):
        moves.append((f"v{i}", f"v{i % n + 1}"))
        moves.append((f"v{i}", f"a{i}"))
    return GameStructure(tuple(positions), tuple(moves), {}, None, n)


def build_g2() -> GameStructure:
    return build_gn(2)


def build_g3() -> GameStructure:
    return build_gn(3)


def build_g1() -> GameStructure:
    """One player at ``v1`` (to ``v0`` or ``a1``); chance ``v0`` goes to ``v1`` or ``a2`` evenly."""
    half = Fraction(1, 2)
    return GameStructure(
        (
            Position("v0", CHANCE),
            Position("v1", PLAYER, 1),
            Position("a1", TERMINAL),
            Position("a2", TERMINAL),
        ),
        (("v0", "v1"), ("v0", "a2"), ("v1", "v0"), ("v1", "a1")),
        {"v0": {"v1": half, "a2": half}},
        None,
        1,
    )


def gn_mixed(p: Sequence) -> Dict[str, Dict[str, Fraction]]:
    """Mixed profile on ``Gn`` where ``p[i-1]`` is player i's probability of following."""
    n = len(p)
    y = {}
    for i, pi in enumerate(p, start=1):
        pi = as_fraction(pi)
        y[f"v{i}"] = {f"v{i % n + 1}": pi, f"a{i}": 1 - pi}
    return y


def gn_pure(word: str) -> Dict[str, str]:
    """Pure profile on ``Gn`` from a word over {t, f}, e.g. ``"fft"``."""
    n = len(word)
    s = {}
    for i, ch in enumerate(word, start=1):
        if ch not in "tf":
            raise GameError(f"strategy letter must be 't' or 'f', got {ch!r}")
        s[f"v{i}"] = f"a{i}" if ch == "t" else f"v{i % n + 1}"
    return s


def gn_word(s: Dict[str, str]) -> str:
    n = len(s)
    return "".join("t" if s[f"v{i}"] == f"a{i}" else "f" for i in range(1, n + 1))


def gn_payoff(rows: Dict[int, Sequence]) -> Payoff:
    """Payoff on ``Gn`` from ``rows[i] = (u(i,a1), ..., u(i,an), u(i,c))``."""
    table = {}
    for i, vals in rows.items():
        *terms, c = vals
        row = {f"a{k}": x for k, x in enumerate(terms, start=1)}
        row["c"] = c
        table[i] = row
    return Payoff.build(table)


def _u(u: Payoff, i: int, k) -> Fraction:
    return u(i, CYCLE) if k == "c" else u(i, f"a{k}")


# ------------------------------------------------------------ payoff families


def in_u2(u: Payoff) -> bool:
    return _u(u, 1, "c") > _u(u, 1, 1) > _u(u, 1, 2) and _u(u, 2, 1) > _u(u, 2, 2) > _u(u, 2, "c")


def in_u3(u: Payoff) -> bool:
    return (
        _u(u, 1, 2) > _u(u, 1, 1) > _u(u, 1, 3) > _u(u, 1, "c")
        and _u(u, 2, 3) > _u(u, 2, 2) > _u(u, 2, 1) > _u(u, 2, "c")
        and _u(u, 3, 1) > _u(u, 3, 3) > _u(u, 3, 2) > _u(u, 3, "c")
    )


@dataclass(frozen=True)
class UnCheck:
    a: bool
    b: bool
    c: bool
    failing: Dict[str, List[int]]

    def __bool__(self):
        return self.a and self.b and self.c


def check_un_conditions(n: int, u: Payoff) -> UnCheck:
    """Evaluate conditions (a), (b), (c) of the ``Un`` family; cyclic indices.

    (a) ``u(i, a_i) < u(i, a_{i+k})`` for ``k = 1..n//2``;
    (b) some ``j = i+k``, ``k = 1..(n-1)//2``, has ``u(j, a_i) < u(j, a_j)``;
    (c) ``u(i, c) < u(i, a_j)`` for all ``i, j``.
    """
    nxt = lambda i, k: (i - 1 + k) % n + 1  # noqa: E731
    fail_a, fail_b, fail_c = [], [], []
    for i in range(1, n + 1):
        own = _u(u, i, i)
        if not all(own < _u(u, i, nxt(i, k)) for k in range(1, n // 2 + 1)):
            fail_a.append(i)
        ahead = [nxt(i, k) for k in range(1, (n - 1) // 2 + 1)]
        if not any(_u(u, j, i) < _u(u, j, j) for j in ahead):
            fail_b.append(i)
        if not all(_u(u, i, "c") < _u(u, i, j) for j in range(1, n + 1)):
            fail_c.append(i)
    return UnCheck(not fail_a, not fail_b, not fail_c, {"a": fail_a, "b": fail_b, "c": fail_c})


def _ranks_to_values(order: List, rng: random.Random) -> Dict:
    """Strictly increasing random integers along ``order`` (worst first)."""
    vals, x = {}, 0
    for k in order:
        vals[k] = x
        x += rng.randint(1, 3)
    return vals


def _canonical_un(n: int, rng: random.Random) -> Payoff:
    # per player: c < (terminals not among the next n//2) < own < next n//2
    rows = {}
    for i in range(1, n + 1):
        nxt = [(i - 1 + k) % n + 1 for k in range(1, n // 2 + 1)]
        rest = [j for j in range(1, n + 1) if j != i and j not in nxt]
        rng.shuffle(nxt)
        rng.shuffle(rest)
        vals = _ranks_to_values(["c", *rest, i, *nxt], rng)
        rows[i] = [vals[j] for j in range(1, n + 1)] + [vals["c"]]
    return gn_payoff(rows)


def sample_un(n: int, seed=None, attempts: int = 2000) -> Payoff:
    """Random integer payoff in ``Un`` (``n >= 3``).

    Draws per-player random orders with ``c`` at the bottom and the next ``n//2``
    terminals above the player's own, until (b) also holds; after ``attempts``
    failures falls back to a shuffled canonical member of the family.
    """
    if n < 3:
        raise GameError("Un is defined for n >= 3")
    rng = random.Random(seed)
    for _ in range(attempts):
        rows = {}
        for i in range(1, n + 1):
            while True:
                order = list(range(1, n + 1))
                rng.shuffle(order)
                pos = {j: r for r, j in enumerate(order)}
                if all(pos[i] < pos[(i - 1 + k) % n + 1] for k in range(1, n // 2 + 1)):
                    break
            vals = _ranks_to_values(["c", *order], rng)
            rows[i] = [vals[j] for j in range(1, n + 1)] + [vals["c"]]
        u = gn_payoff(rows)
        if check_un_conditions(n, u):
            return u
    return _canonical_un(n, rng)


def random_order_payoff(n: int, rng: random.Random) -> Payoff:
    """Each player ranks ``a1..an, c`` by an independent uniform random strict order."""
    rows = {}
    for i in range(1, n + 1):
        order = [*range(1, n + 1), "c"]
        rng.shuffle(order)
        vals = _ranks_to_values(order, rng)
        rows[i] = [vals[j] for j in range(1, n + 1)] + [vals["c"]]
    return gn_payoff(rows)


def sample_u2(rng: random.Random) -> Payoff:
    x = _ranks_to_values([2, 1, "c"], rng)
    y = _ranks_to_values(["c", 2, 1], rng)
    return gn_payoff({1: [x[1], x[2], x["c"]], 2: [y[1], y[2], y["c"]]})


def sample_u3(rng: random.Random) -> Payoff:
    orders = {1: ["c", 3, 1, 2], 2: ["c", 1, 2, 3], 3: ["c", 2, 3, 1]}
    rows = {}
    for i, order in orders.items():
        v = _ranks_to_values(order, rng)
        rows[i] = [v[1], v[2], v[3], v["c"]]
    return gn_payoff(rows)


def payoff_from_mu(mu: Sequence) -> Payoff:
    """A payoff in ``U3`` whose gap ratios are exactly ``mu``."""
    m1, m2, m3 = (as_fraction(m) for m in mu)
    if min(m1, m2, m3) <= 0:
        raise GameError("mu must be positive")
    # own terminal 2, worse neighbour 1, better neighbour 2 + mu, cycle 0
    return gn_payoff(
        {
            1: [2, 2 + m1, 1, 0],
            2: [1, 2, 2 + m2, 0],
            3: [2 + m3, 1, 2, 0],
        }
    )


def mu_values(u: Payoff) -> Tuple[Fraction, Fraction, Fraction]:
    """Payoff-gap ratios of a 3-cycle payoff."""
    pairs = [
        ((1, 2), (1, 1), (1, 3)),
        ((2, 3), (2, 2), (2, 1)),
        ((3, 1), (3, 3), (3, 2)),
    ]
    out = []
    for better, own, worse in pairs:
        hi, mid, lo = (_u(u, *k) for k in (better, own, worse))
        if mid == lo:
            raise GameError(f"degenerate payoff: u({own[0]}, a{own[1]}) == u({worse[0]}, a{worse[1]})")
        out.append((hi - mid) / (mid - lo))
    return tuple(out)


# --------------------------------------------------------- closed-form oracles


def _start_index(v0, n: int) -> int:
    k = int(str(v0).lstrip("v"))
    if not 1 <= k <= n:
        raise GameError(f"start {v0!r} is not a cycle position of G{n}")
    return k


def _dist(n: int, vals: Sequence[Fraction], v0: int) -> OutcomeDistribution:
    probs = {f"a{k}": vals[k - 1] for k in range(1, n + 1)}
    probs[CYCLE] = vals[n]
    return OutcomeDistribution(probs, f"v{v0}")


def closed_form_markov(which: int, p: Sequence, v0) -> OutcomeDistribution:
    """Markov limiting distributions of G2 / G3 written out term by term."""
    p = [as_fraction(x) for x in p]
    j = _start_index(v0, which)
    zero, one = Fraction(0), Fraction(1)
    if which == 2:
        p1, p2 = p
        if p1 == p2 == 1:
            return _dist(2, (zero, zero, one), j)
        d = 1 - p1 * p2
        rows = {
            1: ((1 - p1) / d, p1 * (1 - p2) / d, zero),
            2: (p2 * (1 - p1) / d, (1 - p2) / d, zero),
        }
    elif which == 3:
        p1, p2, p3 = p
        if p1 == p2 == p3 == 1:
            return _dist(3, (zero, zero, zero, one), j)
        d = 1 - p1 * p2 * p3
        rows = {
            1: ((1 - p1) / d, p1 * (1 - p2) / d, p1 * p2 * (1 - p3) / d, zero),
            2: (p2 * p3 * (1 - p1) / d, (1 - p2) / d, p2 * (1 - p3) / d, zero),
            3: (p3 * (1 - p1) / d, p1 * p3 * (1 - p2) / d, (1 - p3) / d, zero),
        }
    else:
        raise GameError("closed forms exist for G2 and G3 only")
    return _dist(which, rows[j], j)


def closed_form_apriori(which: int, p: Sequence, v0) -> OutcomeDistribution:
    """A priori limiting distributions of G2 / G3 written out term by term."""
    p = [as_fraction(x) for x in p]
    j = _start_index(v0, which)
    if which == 2:
        p1, p2 = p
        rows = {
            1: (1 - p1, p1 * (1 - p2), p1 * p2),
            2: (p2 * (1 - p1), 1 - p2, p2 * p1),
        }
    elif which == 3:
        p1, p2, p3 = p
        rows = {
            1: (1 - p1, p1 * (1 - p2), p1 * p2 * (1 - p3), p1 * p2 * p3),
            2: (p2 * p3 * (1 - p1), 1 - p2, p2 * (1 - p3), p2 * p3 * p1),
            3: (p3 * (1 - p1), p3 * p1 * (1 - p2), 1 - p3, p3 * p1 * p2),
        }
    else:
        raise GameError("closed forms exist for G2 and G3 only")
    return _dist(which, rows[j], j)


# --------------------------------------------------------------- UNE-freeness


@dataclass(frozen=True)
class ImprovementWitness:
    profile: str
    case: int
    certificate: DeviationCertificate
    by_proof: bool


def _improvement(g, u, s, player, start) -> Optional[DeviationCertificate]:
    v = f"v{player}"
    alt = next(w for w in g.succ[v] if w != s[v])
    t = dict(s)
    t[v] = alt
    old = u(player, play_pure(g, s, start))
    new = u(player, play_pure(g, t, start))
    if new > old:
        return DeviationCertificate(player, start, {v: alt}, old, new)
    return None


def _proof_candidates(word: str) -> List[Tuple[int, int]]:
    """(player, start index) pairs the case analysis points at."""
    n = len(word)
    ts = [i + 1 for i, ch in enumerate(word) if ch == "t"]
    if not ts:
        return [(i, i) for i in range(1, n + 1)]
    if len(ts) == 1:
        i = ts[0]
        return [((i - 1 + k) % n + 1,) * 2 for k in range(1, (n - 1) // 2 + 1)]
    out = []
    for i in ts:
        gap = next(k for k in range(1, n + 1) if word[(i - 1 + k) % n] == "t")
        if gap <= n // 2:
            out.append((i, i))
    return out


def verify_prop8(n: int, u: Payoff) -> List[ImprovementWitness]:
    """Show every pure profile of ``(Gn, u)`` has a strict improvement for some start.

    The move suggested by the case analysis (cycle / one terminator / two or
    more) is tried first; otherwise all (player, start) pairs are searched.
    Raises ``AssertionError`` if some profile cannot be improved.
    """
    if not check_un_conditions(n, u):
        raise GameError("payoff is not in Un")
    g = build_gn(n)
    out = []
    for letters in itertools.product("ft", repeat=n):
        word = "".join(letters)
        s = gn_pure(word)
        case = min(word.count("t"), 2)
        cert, by_proof = None, True
        for player, start in _proof_candidates(word):
            cert = _improvement(g, u, s, player, f"v{start}")
            if cert:
                break
        if cert is None:
            by_proof = False
            for player in range(1, n + 1):
                for start in range(1, n + 1):
                    cert = _improvement(g, u, s, player, f"v{start}")
                    if cert:
                        break
                if cert:
                    break
        assert cert is not None, f"profile {word} admits no improvement: (Gn, u) has a pure UNE"
        out.append(ImprovementWitness(word, case, cert, by_proof))
    return out
