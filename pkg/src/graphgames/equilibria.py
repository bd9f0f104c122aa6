"""Nash and uniform Nash equilibria in pure and independently mixed strategies.

A profile is a UNE when it is a NE for every non-terminal start.  Mixed profiles
are verified against pure deviations only: under the Markov realization a
uniformly best pure response always exists, and under the a priori realization
every start's payoff is multilinear in the deviator's move probabilities, so
its maximum over the box of mixed strategies sits at a pure vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .apriori import apriori_limit
from .core import (
    BudgetExceeded,
    DeviationCertificate,
    GameError,
    GameStructure,
    OutcomeDistribution,
    Payoff,
    as_fraction,
    budget,
    effective_payoff,
    initializing_extension,
    play_pure,
    point_mass,
    profile_key,
    pure_profiles,
    pure_strategies,
    with_strategy,
)
from .families import gn_mixed, in_u3, mu_values
from .markov import markov_limit, markov_limits

MARKOV = "markov"
APRIORI = "apriori"
REALIZATIONS = (MARKOV, APRIORI)

FD_STEP = Fraction(1, 2**20)


def limits(g: GameStructure, y: Mapping, realization: str = MARKOV, starts=None) -> Dict[str, OutcomeDistribution]:
    """Limiting distributions of ``y`` from each start under ``realization``."""
    if realization == MARKOV:
        if starts is not None and len(starts) == 1:
            (v,) = starts
            return {v: markov_limit(g, y, v)}
        return markov_limits(g, y)
    if realization == APRIORI:
        return {v: apriori_limit(g, y, v) for v in (g.nonterminals if starts is None else starts)}
    raise GameError(f"unknown realization {realization!r}")


def _values(g, u, y, realization, starts) -> Dict[str, Dict[int, Fraction]]:
    dists = limits(g, y, realization, starts)
    return {v: {i: effective_payoff(u, dists[v], i) for i in g.players} for v in starts}


# ----------------------------------------------------------------- pure case


def pure_values(g: GameStructure, u: Payoff, s: Mapping[str, str], starts=None) -> Dict[str, Dict[int, Fraction]]:
    """Payoffs of a pure profile from each start.

    With chance positions the value is taken from the Markov limit of the point
    mass profile, which coincides with the a priori limit there.
    """
    starts = list(g.nonterminals if starts is None else starts)
    if g.is_deterministic:
        return {v: {i: u(i, play_pure(g, s, v)) for i in g.players} for v in starts}
    return _values(g, u, point_mass(g, s), MARKOV, starts)


def find_pure_deviation(g: GameStructure, u: Payoff, s: Mapping[str, str], starts=None) -> Optional[DeviationCertificate]:
    starts = list(g.nonterminals if starts is None else starts)
    base = pure_values(g, u, s, starts)
    for i in g.players:
        mine = g.player_positions(i)
        for alt in pure_strategies(g, i):
            if all(alt[v] == s[v] for v in mine):
                continue
            vals = pure_values(g, u, {**s, **alt}, starts)
            for v in starts:
                if vals[v][i] > base[v][i]:
                    return DeviationCertificate(i, v, alt, base[v][i], vals[v][i])
    return None


def is_pure_ne(g: GameStructure, u: Payoff, s: Mapping[str, str], v0: str) -> bool:
    return find_pure_deviation(g, u, s, [v0]) is None


def is_pure_une(g: GameStructure, u: Payoff, s: Mapping[str, str]) -> bool:
    return find_pure_deviation(g, u, s) is None


def pure_equilibria(g: GameStructure, u: Payoff, v0: Optional[str] = None) -> List[Dict[str, str]]:
    """All pure NE from ``v0``, or all pure UNE when ``v0`` is None."""
    starts = None if v0 is None else [v0]
    return [s for s in pure_profiles(g) if find_pure_deviation(g, u, s, starts) is None]


def improvement_graph(g: GameStructure, u: Payoff, mode: str = "uniform", v0: Optional[str] = None) -> nx.DiGraph:
    """Digraph on pure profiles (keyed by :func:`profile_key`) with an arc per strict unilateral improvement.

    In ``"uniform"`` mode an arc needs a strict gain from at least one start; in
    ``"fixed"`` mode the gain must occur from ``v0``.  Each arc carries its
    :class:`DeviationCertificate` as ``certificate``.
    """
    if mode == "fixed":
        if v0 is None:
            raise GameError("fixed mode needs a start position")
        starts = [v0]
    elif mode == "uniform":
        starts = list(g.nonterminals)
    else:
        raise GameError(f"unknown mode {mode!r}")
    G = nx.DiGraph()
    profiles = list(pure_profiles(g))
    vals = {profile_key(s): pure_values(g, u, s, starts) for s in profiles}
    for s in profiles:
        G.add_node(profile_key(s))
    for s in profiles:
        k = profile_key(s)
        for i in g.players:
            mine = g.player_positions(i)
            for alt in pure_strategies(g, i):
                if all(alt[v] == s[v] for v in mine):
                    continue
                t = profile_key({**s, **alt})
                for v in starts:
                    if vals[t][v][i] > vals[k][v][i]:
                        cert = DeviationCertificate(i, v, alt, vals[k][v][i], vals[t][v][i])
                        G.add_edge(k, t, certificate=cert)
                        break
    return G


def improvement_cycles(G: nx.DiGraph, max_length: Optional[int] = None) -> List[list]:
    """Elementary cycles of an improvement graph, shortest first."""
    cycles = nx.simple_cycles(G, length_bound=max_length)
    return sorted((list(c) for c in cycles), key=lambda c: (len(c), c))


# ---------------------------------------------------------------- mixed case


def find_mixed_deviation(
    g: GameStructure, u: Payoff, y: Mapping, starts=None, realization: str = MARKOV, players=None
) -> Optional[DeviationCertificate]:
    """First pure deviation strictly improving some player from some start, if any."""
    starts = list(g.nonterminals if starts is None else starts)
    base = _values(g, u, y, realization, starts)
    for i in players or g.players:
        for alt in pure_strategies(g, i):
            dists = limits(g, with_strategy(g, y, alt), realization, starts)
            for v in starts:
                new = effective_payoff(u, dists[v], i)
                if new > base[v][i]:
                    return DeviationCertificate(i, v, alt, base[v][i], new)
    return None


def is_mixed_ne(g: GameStructure, u: Payoff, y: Mapping, v0: str, realization: str = MARKOV) -> Union[bool, DeviationCertificate]:
    """True when ``y`` is a NE from ``v0``, otherwise a certificate of a strict improvement."""
    cert = find_mixed_deviation(g, u, y, [v0], realization)
    return True if cert is None else cert


def is_mixed_une(g: GameStructure, u: Payoff, y: Mapping, realization: str = MARKOV) -> Union[bool, DeviationCertificate]:
    cert = find_mixed_deviation(g, u, y, None, realization)
    return True if cert is None else cert


def replay(g: GameStructure, u: Payoff, y: Mapping, cert: DeviationCertificate, realization: str = MARKOV) -> bool:
    """Recompute both sides of a certificate from scratch."""
    lim = markov_limit if realization == MARKOV else apriori_limit
    old = effective_payoff(u, lim(g, y, cert.start), cert.player)
    new = effective_payoff(u, lim(g, with_strategy(g, y, cert.deviation), cert.start), cert.player)
    return old == cert.old and new == cert.new and new > old


def mixed_deviation_gain(
    g: GameStructure, u: Payoff, y: Mapping, i: int, z: Mapping, v0: str, realization: str = MARKOV
) -> Fraction:
    """Payoff change for player ``i`` from ``v0`` when swapping in mixed strategy ``z``."""
    lim = markov_limit if realization == MARKOV else apriori_limit
    return effective_payoff(u, lim(g, {**y, **z}, v0), i) - effective_payoff(u, lim(g, y, v0), i)


# ----------------------------------------------------------- play-once tools


def play_once_arcs(g: GameStructure) -> List[Tuple[str, str]]:
    """(position, first arc target) for each player of a play-once game with binary choices.

    The probability of that first arc is the player's single free variable.
    """
    if not g.is_play_once:
        raise GameError("game is not play-once")
    out = []
    for i in g.players:
        (v,) = g.player_positions(i)
        if len(g.succ[v]) != 2:
            raise GameError(f"position {v!r} must have exactly two moves")
        out.append((v, g.succ[v][0]))
    return out


def profile_from_point(g: GameStructure, p: Sequence) -> Dict[str, Dict[str, Fraction]]:
    """Mixed profile of a binary play-once game from first-arc probabilities."""
    y = {}
    for (v, w), pi in zip(play_once_arcs(g), p):
        pi = as_fraction(pi)
        other = g.succ[v][1]
        y[v] = {w: pi, other: 1 - pi}
    return y


def interior_point(mu: Sequence) -> Tuple[Fraction, Fraction, Fraction]:
    """Closed-form interior point of the 3-cycle game in terms of the gap ratios."""
    m1, m2, m3 = (as_fraction(m) for m in mu)
    p1 = m3 * (1 + m1 + m1 * m2) / (1 + m3 + m3 * m1)
    p2 = m1 * (1 + m2 + m2 * m3) / (1 + m1 + m1 * m2)
    p3 = m2 * (1 + m3 + m3 * m1) / (1 + m2 + m2 * m3)
    return p1, p2, p3


def indifference_residuals(mu: Sequence, p: Sequence) -> Tuple[Fraction, Fraction, Fraction]:
    """Left minus right side of each player's indifference condition at ``p``."""
    m1, m2, m3 = (as_fraction(m) for m in mu)
    p1, p2, p3 = (as_fraction(x) for x in p)
    return (
        m1 * (1 - p2) - p2 * (1 - p3),
        m2 * (1 - p3) - p3 * (1 - p1),
        m3 * (1 - p1) - p1 * (1 - p2),
    )


def g3_closed_form_ne(u: Payoff) -> Optional[Dict[str, Dict[str, Fraction]]]:
    """The unique strictly mixed Markov UNE of the 3-cycle game, or None when mu1*mu2*mu3 >= 1."""
    if not in_u3(u):
        raise GameError("payoff is not in U3")
    mu = mu_values(u)
    if mu[0] * mu[1] * mu[2] >= 1:
        return None
    p = interior_point(mu)
    assert all(0 < x < 1 for x in p), p
    assert indifference_residuals(mu, p) == (0, 0, 0), p
    return gn_mixed(p)


def stationarity_residuals(
    g: GameStructure,
    u: Payoff,
    y: Mapping,
    realization: str = MARKOV,
    h: Fraction = FD_STEP,
    normalize: bool = True,
) -> np.ndarray:
    """Central differences of each start's payoff in each player's own variable.

    Entry ``[j, i]`` approximates the derivative of player ``i+1``'s payoff from
    the ``j``-th non-terminal start with respect to that player's first-arc
    probability.  Differences are taken exactly in rationals and converted to
    float at the end; with ``normalize`` they are divided by ``max |u|``.
    """
    arcs = play_once_arcs(g)
    starts = list(g.nonterminals)
    p = [y[v][w] for v, w in arcs]
    if any(not 0 < x < 1 for x in p):
        raise GameError("boundary point: stationarity needs 0 < p < 1 everywhere")
    h = as_fraction(h)
    scale = u.scale() if normalize else Fraction(1)
    out = np.zeros((len(starts), len(arcs)))
    for col, i in enumerate(g.players):
        lo, hi = list(p), list(p)
        lo[col] -= h
        hi[col] += h
        f_hi = limits(g, profile_from_point(g, hi), realization)
        f_lo = limits(g, profile_from_point(g, lo), realization)
        for row, v in enumerate(starts):
            d = (effective_payoff(u, f_hi[v], i) - effective_payoff(u, f_lo[v], i)) / (2 * h)
            out[row, col] = float(d / scale)
    return out


def sweep_grid(n: int, step: Fraction) -> List[Tuple[Fraction, ...]]:
    """Interior points ``{step, ..., 1-step}^n`` followed by the pure vertices ``{0, 1}^n``."""
    step = as_fraction(step)
    k = int(1 / step)
    if k * step != 1:
        raise GameError("step must divide 1")
    axis = [step * m for m in range(1, k)]
    pts = list(itertools.product(axis, repeat=n))
    pts += list(itertools.product((Fraction(0), Fraction(1)), repeat=n))
    return pts


def boundary_grid(n: int, step: Fraction) -> List[Tuple[Fraction, ...]]:
    """Points of ``{0, step, ..., 1}^n`` with at least one coordinate in {0, 1}."""
    step = as_fraction(step)
    k = int(1 / step)
    axis = [step * m for m in range(0, k + 1)]
    return [pt for pt in itertools.product(axis, repeat=n) if any(x in (0, 1) for x in pt)]


def grid_sweep_no_une(
    g: GameStructure, u: Payoff, realization: str = MARKOV, step=Fraction(1, 10), points=None
) -> List[Tuple[Tuple[Fraction, ...], Optional[DeviationCertificate]]]:
    """For each grid point of a binary play-once game, a strict-improvement certificate or None.

    A None entry marks a candidate UNE (up to grid resolution).
    """
    n = len(play_once_arcs(g))
    pts = sweep_grid(n, step) if points is None else points
    limit = budget()
    if len(pts) > limit:
        raise BudgetExceeded(f"{len(pts)} grid points exceed budget {limit}")
    return [(pt, find_mixed_deviation(g, u, profile_from_point(g, pt), None, realization)) for pt in pts]


def check_lemma1_boundary(g: GameStructure, u: Payoff, realization: str = MARKOV, step=Fraction(1, 4)) -> bool:
    """True iff every profile with some coordinate in {0, 1} admits a strict improvement."""
    n = len(play_once_arcs(g))
    rows = grid_sweep_no_une(g, u, realization, points=boundary_grid(n, step))
    return all(cert is not None for _, cert in rows)


@dataclass(frozen=True)
class ExtensionCheck:
    profile: Mapping
    une: bool
    ne_extension: bool
    q0_positive: bool

    @property
    def ok(self) -> bool:
        if self.une and not self.ne_extension:
            return False
        if self.ne_extension and self.q0_positive and not self.une:
            return False
        return True


def check_prop2(
    g: GameStructure, u: Payoff, q0: Mapping, profiles: Iterable[Mapping], realization: str = MARKOV
) -> List[ExtensionCheck]:
    """Compare UNE in ``g`` with NE from the added start of its initializing extension.

    A UNE must be a NE of every extension, and a NE of an extension with strictly
    positive ``q0`` must be a UNE.  ``profiles`` may be pure (position -> target)
    or mixed (position -> distribution).
    """
    start = "v0"
    while start in g.kind:
        start += "'"
    ext = initializing_extension(g, q0, start)
    positive = all(ext.chance[start][v] > 0 for v in g.nonterminals)
    rows = []
    for s in profiles:
        y = s if all(isinstance(x, Mapping) for x in s.values()) else point_mass(g, s)
        une = find_mixed_deviation(g, u, y, None, realization) is None
        ne = find_mixed_deviation(ext, u, y, [start], realization) is None
        rows.append(ExtensionCheck(s, une, ne, positive))
    return rows
