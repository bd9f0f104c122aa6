import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphgames.core import PLAYER, TERMINAL, GameError, GameStructure, initializing_extension, pure_profiles, play_pure
from graphgames.equilibria import (
    APRIORI,
    MARKOV,
    check_lemma1_boundary,
    check_prop2,
    interior_point,
    find_mixed_deviation,
    find_pure_deviation,
    g3_closed_form_ne,
    grid_sweep_no_une,
    improvement_cycles,
    improvement_graph,
    indifference_residuals,
    is_mixed_ne,
    is_mixed_une,
    is_pure_ne,
    is_pure_une,
    mixed_deviation_gain,
    play_once_arcs,
    profile_from_point,
    pure_equilibria,
    replay,
    stationarity_residuals,
    sweep_grid,
)
from graphgames.families import build_g3, gn_mixed, gn_payoff, gn_pure, gn_word, payoff_from_mu

from conftest import random_game, random_payoff


def test_g2_improvement_cycle(g2, u2):
    assert pure_equilibria(g2, u2) == []
    G = improvement_graph(g2, u2)
    cycles = improvement_cycles(G)
    assert [len(c) for c in cycles] == [4]
    words = {gn_word(dict(k)) for k in cycles[0]}
    assert words == {"tt", "tf", "ft", "ff"}
    for a, b in zip(cycles[0], cycles[0][1:] + cycles[0][:1]):
        cert = G.edges[a, b]["certificate"]
        assert cert.new > cert.old


def test_g3_improvement_cycle(g3, u3):
    assert pure_equilibria(g3, u3) == []
    cycles = improvement_cycles(improvement_graph(g3, u3))
    assert 6 in {len(c) for c in cycles}
    six = next(c for c in cycles if len(c) == 6)
    assert len({gn_word(dict(k)) for k in six}) == 6


def test_every_profile_has_out_edge(g3, u3):
    G = improvement_graph(g3, u3)
    assert G.number_of_nodes() == 8
    assert all(G.out_degree(n) > 0 for n in G.nodes)


def test_solvable_ordering_has_une(g3):
    u = gn_payoff({1: [3, 2, 1, 0], 2: [1, 3, 2, 0], 3: [2, 1, 3, 0]})
    assert [gn_word(s) for s in pure_equilibria(g3, u)] == ["ttt"]
    assert is_pure_une(g3, u, gn_pure("ttt"))


def test_pure_ne_from_single_start(g3, u3):
    s = gn_pure("tff")
    assert is_pure_ne(g3, u3, s, "v1")
    assert not is_pure_une(g3, u3, s)
    cert = find_pure_deviation(g3, u3, s)
    assert cert.new > cert.old


def _key(s):
    return tuple(sorted(s.items()))


def test_fixed_mode_graph(g3, u3):
    G = improvement_graph(g3, u3, mode="fixed", v0="v1")
    assert _key(gn_pure("tff")) in G
    assert G.out_degree(_key(gn_pure("tff"))) == 0
    assert G.out_degree(_key(gn_pure("fff"))) > 0


@pytest.mark.parametrize("seed", range(15))
def test_pure_une_matches_brute_force(seed):
    # whole-strategy deviations of each player, outcomes from play_pure only
    rng = random.Random(seed)
    g = random_game(rng, chance=False, max_nonterminal=4)
    u = random_payoff(g, rng)
    found = {_key(s) for s in pure_equilibria(g, u)}
    brute = set()
    for s in pure_profiles(g):
        stable = True
        for i in g.players:
            own = g.player_positions(i)
            for choice in itertools.product(*(g.succ[v] for v in own)):
                t = {**s, **dict(zip(own, choice))}
                if any(u(i, play_pure(g, t, v0)) > u(i, play_pure(g, s, v0)) for v0 in g.nonterminals):
                    stable = False
        if stable:
            brute.add(_key(s))
    assert found == brute


def test_interior_point_known():
    p = interior_point((1, 1, F(1, 2)))
    assert p == (F(3, 4), F(5, 6), F(4, 5))
    assert indifference_residuals((1, 1, F(1, 2)), p) == (0, 0, 0)


def test_closed_form_ne(g3):
    u = payoff_from_mu((1, 1, F(1, 2)))
    y = g3_closed_form_ne(u)
    assert y == gn_mixed([F(3, 4), F(5, 6), F(4, 5)])
    assert is_mixed_une(g3, u, y, MARKOV) is True
    assert np.all(stationarity_residuals(g3, u, y, MARKOV) == 0)
    assert g3_closed_form_ne(payoff_from_mu((1, 1, 1))) is None
    with pytest.raises(GameError):
        g3_closed_form_ne(gn_payoff({1: [3, 2, 1, 0], 2: [1, 3, 2, 0], 3: [2, 1, 3, 0]}))


def test_interior_point_fails_under_apriori(g3):
    u = payoff_from_mu((1, 1, F(1, 2)))
    cert = is_mixed_une(g3, u, g3_closed_form_ne(u), APRIORI)
    assert cert is not True
    assert replay(g3, u, g3_closed_form_ne(u), cert, APRIORI)


@settings(max_examples=30, deadline=None)
@given(st.fractions(F(1, 20), 20), st.fractions(F(1, 20), 20), st.fractions(F(1, 20), 20))
def test_interior_point_is_stationary(m1, m2, m3):
    mu = (m1, m2, m3)
    p = interior_point(mu)
    assert indifference_residuals(mu, p) == (0, 0, 0)
    if m1 * m2 * m3 < 1:
        assert all(0 < x < 1 for x in p)
        g = build_g3()
        res = stationarity_residuals(g, payoff_from_mu(mu), gn_mixed(p), MARKOV)
        assert np.max(np.abs(res)) < 1e-9


def test_markov_residual_signs_g2(g2, u2):
    # at p = (1/2, 1/2) own-variable derivatives are nonzero, so the point is not stationary
    res = stationarity_residuals(g2, u2, gn_mixed([F(1, 2), F(1, 2)]), MARKOV, normalize=False)
    assert res[0, 0] == pytest.approx(-8 / 9, abs=1e-9)
    assert res[1, 1] == pytest.approx(8 / 9, abs=1e-9)
    # on the whole interior grid: nonzero, with the sign of -(u11 - u12)
    for pt in itertools.product([F(k, 10) for k in range(1, 10)], repeat=2):
        r = stationarity_residuals(g2, u2, gn_mixed(pt), MARKOV, normalize=False)
        assert r[0, 0] < 0


def test_apriori_residuals_g2(g2, u2):
    p1, p2 = F(1, 3), F(3, 5)
    res = stationarity_residuals(g2, u2, gn_mixed([p1, p2]), APRIORI, normalize=False)
    # from v2 player 1's payoff moves by p2 (u1c - u11); from v1 player 2's by p1 (u2c - u22)
    assert res[1, 0] == pytest.approx(float(p2 * (3 - 2)), abs=1e-9)
    assert res[0, 1] == pytest.approx(float(p1 * (1 - 2)), abs=1e-9)


def test_residuals_reject_boundary(g2, u2):
    with pytest.raises(GameError):
        stationarity_residuals(g2, u2, gn_mixed([0, F(1, 2)]))


def test_sweep_grid_shape():
    pts = sweep_grid(2, F(1, 4))
    assert len(pts) == 9 + 4
    with pytest.raises(GameError):
        sweep_grid(2, F(2, 7))


def test_g2_sweep_certified(g2, u2):
    rows = grid_sweep_no_une(g2, u2, MARKOV, F(1, 10))
    assert rows and all(cert is not None for _, cert in rows)
    for pt, cert in rows[:10]:
        assert replay(g2, u2, gn_mixed(pt), cert, MARKOV)
    assert check_lemma1_boundary(g2, u2, MARKOV)


def test_g3_nomixed_sweep(g3):
    u = payoff_from_mu((1, 1, 1))
    rows = grid_sweep_no_une(g3, u, MARKOV, F(1, 4))
    assert all(c is not None for _, c in rows)


def test_mixed_ne_single_start(g2, u2):
    # both stop: stable from v1, but from v2 player 2 would rather pass on to a1
    y = gn_mixed([0, 0])
    assert is_mixed_ne(g2, u2, y, "v1") is True
    cert = is_mixed_une(g2, u2, y)
    assert cert is not True and cert.start == "v2" and cert.player == 2
    assert replay(g2, u2, y, cert)


def test_mixed_gain_matches_certificate(g2, u2):
    y = gn_mixed([F(1, 2), F(1, 2)])
    cert = find_mixed_deviation(g2, u2, y)
    z = {v: {w: F(int(w == t)) for w in g2.succ[v]} for v, t in cert.deviation.items()}
    assert mixed_deviation_gain(g2, u2, y, cert.player, z, cert.start) == cert.new - cert.old


@pytest.mark.parametrize("realization", [MARKOV, APRIORI])
def test_pure_deviation_sufficiency(g2, u2, realization):
    # no mixed own-strategy beats the best pure one from any start
    rng = random.Random(5)
    y = gn_mixed([F(1, 3), F(2, 5)])
    for _ in range(30):
        q = F(rng.randint(0, 12), 12)
        gain = max(mixed_deviation_gain(g2, u2, y, 1, {"v1": {"v2": q, "a1": 1 - q}}, v, realization) for v in ("v1", "v2"))
        cert = find_mixed_deviation(g2, u2, y, None, realization, players=[1])
        if gain > 0:
            assert cert is not None


def test_play_once_helpers(g2, g1):
    assert play_once_arcs(g2) == [("v1", "v2"), ("v2", "v1")]
    assert profile_from_point(g2, [F(1, 3), 1]) == gn_mixed([F(1, 3), 1])
    two = GameStructure.build(
        [("x", PLAYER, 1), ("y", PLAYER, 1), ("t", TERMINAL)], [("x", "y"), ("x", "t"), ("y", "x"), ("y", "t")]
    )
    with pytest.raises(GameError, match="play-once"):
        play_once_arcs(two)


def test_extension_with_sparse_start(g3, u3):
    s = gn_pure("tff")
    for q0 in ({"v1": 1}, {"v1": F(1, 2), "v3": F(1, 2)}):
        (row,) = check_prop2(g3, u3, q0, [s])
        assert row.une is False and row.ne_extension is True and not row.q0_positive
        assert row.ok


def test_extension_with_positive_start(g3, u3):
    rows = check_prop2(g3, u3, {"v1": F(1, 3), "v2": F(1, 3), "v3": F(1, 3)}, list(pure_profiles(g3)))
    assert all(r.ok for r in rows)
    assert not any(r.ne_extension for r in rows)


def test_extension_mixed_profile(g3):
    u = payoff_from_mu((1, 1, F(1, 2)))
    y = g3_closed_form_ne(u)
    (row,) = check_prop2(g3, u, {"v1": F(1, 2), "v2": F(1, 4), "v3": F(1, 4)}, [y])
    assert row.une and row.ne_extension and row.ok


def test_extension_ne_matches_direct(g3, u3):
    ext = initializing_extension(g3, {"v2": 1})
    for s in pure_profiles(g3):
        y = {v: {w: F(int(w == t)) for w in g3.succ[v]} for v, t in s.items()}
        direct = find_mixed_deviation(g3, u3, y, ["v2"]) is None
        assert direct == (find_mixed_deviation(ext, u3, y, ["v0"]) is None)
        assert direct == is_pure_ne(g3, u3, s, "v2")


def test_markov_partials_g3_factorization(g3, u3):
    # each player's own-variable derivative is one bracket times a start-dependent prefix
    p1, p2, p3 = F(1, 3), F(2, 5), F(3, 4)
    u = lambda i, j: u3(i, f"a{j}")  # noqa: E731
    d2 = (1 - p1 * p2 * p3) ** 2
    e1 = u(1, 1) - u(1, 2) + p2 * u(1, 2) - p2 * u(1, 3) - p2 * p3 * u(1, 1) + p2 * p3 * u(1, 3)
    e2 = u(2, 2) - u(2, 3) - p3 * u(2, 1) + p3 * u(2, 3) + p1 * p3 * u(2, 1) - p1 * p3 * u(2, 2)
    e3 = u(3, 3) - u(3, 1) + p1 * u(3, 1) - p1 * u(3, 2) - p1 * p2 * u(3, 3) + p1 * p2 * u(3, 2)
    # rows are starts v1, v2, v3; columns players 1, 2, 3
    expected = [
        [-e1, -p1 * e2, -p1 * p2 * e3],
        [-p2 * p3 * e1, -e2, -p2 * e3],
        [-p3 * e1, -p1 * p3 * e2, -e3],
    ]
    res = stationarity_residuals(g3, u3, gn_mixed([p1, p2, p3]), MARKOV, normalize=False)
    assert np.allclose(res, np.array([[float(x / d2) for x in row] for row in expected]), atol=1e-9)
