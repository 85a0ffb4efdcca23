import itertools
import random
from fractions import Fraction

import pytest

from nsgames import (Correlation, Game, ShapeError, classify, harder_than,
                     is_nonsignalling, is_perfect_strategy, support_zeros,
                     synchronicity_game)

from common import all_ones_game, chsh_game, pr_box, random_game


def test_game_invariants():
    with pytest.raises(ValueError):
        Game(0, 1, 1, 1, frozenset())
    with pytest.raises(ValueError):
        Game(2, 2, 2, 2, frozenset({(2, 0, 0, 0)}))
    g = Game(2, 2, 2, 2, frozenset({(0, 0, 0, 0)}))
    assert g.lam(0, 0, 0, 0) == 0 and g.lam(1, 1, 1, 1) == 1


def test_game_json_round_trip():
    g = chsh_game()
    assert Game.from_json(g.to_json()) == g
    g2 = Game.from_json_dict(g.to_json_dict())
    assert g2.name == "chsh"


def test_correlation_exact_json_round_trip_bit_exact():
    p = pr_box()
    q = Correlation.from_json(p.to_json())
    assert q.entries == p.entries and q.mode == "exact"
    third = Correlation.from_function(
        1, 1, 3, 1, lambda x, y, a, b: Fraction(1, 3))
    assert Correlation.from_json(third.to_json()).entries == third.entries


def test_correlation_rejects_bad_distributions():
    with pytest.raises(ValueError):
        Correlation.from_function(1, 1, 2, 1, lambda x, y, a, b: Fraction(1))
    with pytest.raises(ValueError):
        Correlation.from_function(1, 1, 2, 1,
                                  lambda x, y, a, b: Fraction(3, 2) - a * 2)


def test_pr_box_is_nonsignalling():
    # oracle: direct summation of all marginals over both question choices
    p = pr_box()
    for x in range(2):
        for a in range(2):
            sums = {sum(p.prob(x, y, a, b) for b in range(2)) for y in range(2)}
            assert sums == {Fraction(1, 2)}
    for y in range(2):
        for b in range(2):
            sums = {sum(p.prob(x, y, a, b) for a in range(2)) for x in range(2)}
            assert sums == {Fraction(1, 2)}
    assert is_nonsignalling(p, 0)


def test_product_point_mass_nonsignalling():
    p = Correlation.from_function(
        2, 2, 2, 2, lambda x, y, a, b: Fraction(int(a == x and b == 0)))
    assert is_nonsignalling(p, 0)


def test_signalling_correlation_detected():
    # Alice's marginal depends on Bob's question
    p = Correlation.from_function(
        2, 2, 2, 2, lambda x, y, a, b: Fraction(int(a == y and b == 0)))
    assert not is_nonsignalling(p, 0)


def test_exact_mode_requires_zero_tol():
    with pytest.raises(ValueError):
        is_nonsignalling(pr_box(), 1e-9)


def test_perfect_strategy_chsh_pr():
    assert is_perfect_strategy(chsh_game(), pr_box(), 0)


def test_uniform_not_perfect_for_any_game_with_zero():
    g = Game(2, 2, 2, 2, frozenset({(0, 0, 0, 0)}))
    assert not is_perfect_strategy(g, Correlation.uniform(2, 2, 2, 2), 0)


def test_perfect_strategy_shape_error():
    with pytest.raises(ShapeError):
        is_perfect_strategy(Game(3, 2, 2, 2, frozenset()), pr_box(), 0)


def test_p4k2_colouring_point_mass_perfect():
    from nsgames import complete_graph, homomorphism_game, path_graph
    from nsgames.strategies import DeterministicStrategy
    g = homomorphism_game(path_graph(4), complete_graph(2))
    colouring = (0, 1, 0, 1)
    p = DeterministicStrategy(colouring, colouring).correlation(2, 2)
    assert is_perfect_strategy(g, p, 0)


def test_support_zeros():
    assert len(support_zeros(pr_box(), 0)) == 8
    assert support_zeros(pr_box(), 0) == chsh_game().zeros
    assert support_zeros(Correlation.uniform(2, 2, 2, 2), 0) == frozenset()
    p = Correlation.from_function(
        2, 2, 2, 2, lambda x, y, a, b: Fraction(int(a == x and b == 1)))
    expected = frozenset(c for c in itertools.product(range(2), repeat=4)
                         if not (c[2] == c[0] and c[3] == 1))
    assert support_zeros(p, 0) == expected


def test_harder_than_basics():
    g = chsh_game()
    assert harder_than(g, g)
    assert harder_than(g, all_ones_game())
    assert not harder_than(all_ones_game(), g)
    with pytest.raises(ShapeError):
        harder_than(g, Game(2, 2, 2, 3, frozenset()))


def test_harder_than_partial_order_properties():
    rng = random.Random(3)
    games = [random_game(rng, max_alpha=2) for _ in range(60)]
    games = [g.with_zeros(g.zeros) for g in games]
    same = [(g, h, k) for g in games for h in games for k in games
            if g.same_alphabets(h) and g.same_alphabets(k)][:400]
    for g, h, k in same:
        if harder_than(g, h) and harder_than(h, g):
            assert g.zeros == h.zeros
        if harder_than(g, h) and harder_than(h, k):
            assert harder_than(g, k)


def test_perfect_strategy_monotone_under_harder():
    # a perfect strategy for a harder game wins the easier one
    rng = random.Random(5)
    for _ in range(40):
        g = random_game(rng, max_alpha=2)
        sub = frozenset(z for z in g.zeros if rng.random() < 0.5)
        easier = g.with_zeros(sub)
        p = Correlation.uniform(g.nx, g.ny, g.na, g.nb)
        if is_perfect_strategy(g, p, 0):
            assert is_perfect_strategy(easier, p, 0)


def test_classify_chsh():
    rep = classify(chsh_game())
    assert rep.unique and rep.mirror and rep.imitation
    assert not rep.synchronous
    phi = rep.unique_witness
    g = chsh_game()
    for x in range(2):
        for y in range(2):
            for a in range(2):
                assert g.lam(x, y, a, phi[x][y][a]) == 1


def test_classify_synchronicity_game():
    for n, m in [(1, 1), (2, 2), (3, 2), (2, 3)]:
        rep = classify(synchronicity_game(n, m))
        assert rep.synchronous and rep.imitation


def test_classify_all_ones_not_imitation():
    rep = classify(all_ones_game(2, 2, 2, 2))
    assert not rep.imitation
    assert not rep.mirror and not rep.unique


def test_classify_witnesses_satisfy_definitions():
    rng = random.Random(9)
    checked_mirror = 0
    for _ in range(300):
        g = random_game(rng, max_alpha=3)
        rep = classify(g)
        if rep.mirror:
            checked_mirror += 1
            xi, eta = rep.mirror_witness
            for x in range(g.nx):
                for a, a2 in itertools.combinations(range(g.na), 2):
                    for b in range(g.nb):
                        assert g.lam(x, xi[x], a, b) * g.lam(x, xi[x], a2, b) == 0
            for y in range(g.ny):
                for b, b2 in itertools.combinations(range(g.nb), 2):
                    for a in range(g.na):
                        assert g.lam(eta[y], y, a, b) * g.lam(eta[y], y, a, b2) == 0
    assert checked_mirror > 0


def test_classify_implication_chain():
    rng = random.Random(13)
    for _ in range(500):
        rep = classify(random_game(rng, max_alpha=3))
        if rep.unique:
            assert rep.mirror
        if rep.mirror:
            assert rep.imitation
