import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from graphgames.core import CHANCE, CYCLE, PLAYER, TERMINAL, GameStructure, Payoff, Position, play_pure
from graphgames.families import build_g1, build_g2, build_g3, gn_payoff

# acceptance results, printed at the end of the session
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ok, line in ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {line}")


@pytest.fixture
def g1():
    return build_g1()


@pytest.fixture
def g2():
    return build_g2()


@pytest.fixture
def g3():
    return build_g3()


@pytest.fixture
def u2():
    # u1c > u11 > u12 and u21 > u22 > u2c
    return gn_payoff({1: [2, 1, 3], 2: [3, 2, 1]})


@pytest.fixture
def u3():
    return gn_payoff({1: [2, 3, 1, 0], 2: [1, 2, 3, 0], 3: [3, 1, 2, 0]})


@pytest.fixture
def u1():
    return Payoff.build({1: {"a1": 2, "a2": 4, "c": 1}})


F = Fraction
GRID = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]


# --------------------------------------------------------- random instances


def random_game(rng: random.Random, n_players=None, max_nonterminal=5, chance=True, play_once=False):
    """A small valid game structure with rational chance probabilities (zeros allowed)."""
    n_players = n_players or rng.randint(1, 3)
    if play_once:
        owners = list(range(1, n_players + 1))
    else:
        owners = [rng.randint(1, n_players) for _ in range(rng.randint(n_players, max_nonterminal))]
        owners[:n_players] = range(1, n_players + 1)
    positions = [Position(f"p{k}", PLAYER, i) for k, i in enumerate(owners)]
    n_chance = rng.randint(0, 2) if chance else 0
    positions += [Position(f"r{k}", CHANCE) for k in range(n_chance)]
    n_term = rng.randint(1, 3)
    positions += [Position(f"t{k}", TERMINAL) for k in range(n_term)]
    ids = [p.id for p in positions]
    moves, dist = [], {}
    for p in positions:
        if p.kind == TERMINAL:
            continue
        targets = rng.sample([x for x in ids if x != p.id] + [p.id], min(rng.randint(2, 3), len(ids)))
        moves += [(p.id, w) for w in targets]
        if p.kind == CHANCE:
            weights = [rng.randint(0, 3) for _ in targets]
            if sum(weights) == 0:
                weights[0] = 1
            dist[p.id] = {w: F(x, sum(weights)) for w, x in zip(targets, weights)}
    return GameStructure(tuple(positions), tuple(moves), dist, None, n_players)


def random_mixed(g, rng: random.Random, denom=4):
    y = {}
    for v in g.player_positions():
        weights = [rng.randint(0, denom) for _ in g.succ[v]]
        if sum(weights) == 0:
            weights[rng.randrange(len(weights))] = 1
        y[v] = {w: F(x, sum(weights)) for w, x in zip(g.succ[v], weights)}
    return y


def random_payoff(g, rng: random.Random):
    return Payoff.build({i: {a: rng.randint(-5, 5) for a in g.outcomes} for i in g.players})


# ------------------------------------------------------------ oracles


def markov_oracle(g, y, v0):
    """Float oracle: push the start distribution through P^(2^60) by repeated squaring."""
    ids = g.ids
    idx = {v: k for k, v in enumerate(ids)}
    P = np.zeros((len(ids), len(ids)))
    for v in ids:
        if g.kind[v] == TERMINAL:
            P[idx[v], idx[v]] = 1.0
            continue
        dist = g.chance[v] if g.kind[v] == CHANCE else y[v]
        for w, q in dist.items():
            P[idx[v], idx[w]] += float(q)
    for _ in range(60):
        P = P @ P
    row = P[idx[v0]]
    out = {a: row[idx[a]] for a in g.terminals}
    out[CYCLE] = 1.0 - sum(out.values())
    return out


def apriori_oracle(g, y, v0):
    """Brute force over every joint commitment of one move per non-terminal position."""
    nts = g.nonterminals
    probs = {a: F(0) for a in g.outcomes}
    for combo in itertools.product(*(g.succ[v] for v in nts)):
        weight = F(1)
        for v, w in zip(nts, combo):
            dist = g.chance[v] if g.kind[v] == CHANCE else y[v]
            weight *= dist.get(w, F(0))
        if weight == 0:
            continue
        choice = dict(zip(nts, combo))
        s = {v: choice[v] for v in g.player_positions()}
        ch = {v: choice[v] for v in g.chance_positions}
        probs[play_pure(g, s, v0, ch)] += weight
    return probs
