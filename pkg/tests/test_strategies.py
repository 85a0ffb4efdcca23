import random
from fractions import Fraction

import pytest

from nsgames import (CapacityError, Correlation, DeterministicStrategy, Game,
                     bcs_game, complete_graph, enumerate_deterministic_perfect,
                     has_deterministic_perfect, homomorphism_game, is_local,
                     is_perfect_strategy, local_decomposition, magic_square,
                     path_graph, reflexive_cover_det)
from nsgames.strategies import DEFAULT_VERTEX_CAP

from common import (all_ones_game, brute_force_det_cover_zeros,
                    brute_force_perfect_pairs, chsh_game, pr_box, random_game)


def test_p4k2_enumeration_matches_brute_force():
    g = homomorphism_game(path_graph(4), complete_graph(2))
    found = enumerate_deterministic_perfect(g)
    oracle = brute_force_perfect_pairs(g)
    assert [(s.f, s.g) for s in found] == sorted(oracle)
    assert len(found) == 2
    for s in found:
        assert s.f == s.g
        # proper 2-colouring of the path
        assert all(s.f[i] != s.f[i + 1] for i in range(3))


def test_magic_square_game_has_no_deterministic_strategy():
    system, _ = magic_square()
    from common import gf2_solve
    assert gf2_solve(system.n_vars,
                     [(sup, rho) for sup, rho in system.constraints]) is None
    assert not has_deterministic_perfect(bcs_game(system))


def test_all_ones_strategy_count():
    g = all_ones_game(2, 2, 2, 2)
    assert len(enumerate_deterministic_perfect(g)) == 2 ** 2 * 2 ** 2
    g = all_ones_game(2, 1, 3, 2)
    assert len(enumerate_deterministic_perfect(g)) == 3 ** 2 * 2


def test_enumeration_limit_and_order():
    g = all_ones_game(2, 2, 2, 2)
    first = enumerate_deterministic_perfect(g, limit=3)
    assert len(first) == 3
    full = enumerate_deterministic_perfect(g)
    assert full[:3] == first
    assert full == sorted(full, key=lambda s: (s.f, s.g))


def test_chsh_has_no_deterministic_perfect():
    g = chsh_game()
    assert brute_force_perfect_pairs(g) == []
    assert not has_deterministic_perfect(g)
    assert enumerate_deterministic_perfect(g) == []


def test_random_enumeration_against_brute_force():
    rng = random.Random(17)
    for _ in range(60):
        g = random_game(rng, max_alpha=2)
        found = [(s.f, s.g) for s in enumerate_deterministic_perfect(g)]
        assert found == sorted(brute_force_perfect_pairs(g))


def test_enumerated_strategies_are_perfect():
    rng = random.Random(19)
    for _ in range(30):
        g = random_game(rng, max_alpha=2)
        for s in enumerate_deterministic_perfect(g):
            assert is_perfect_strategy(g, s.correlation(g.na, g.nb), 0)


def test_strategy_json_round_trip():
    s = DeterministicStrategy((0, 1, 0), (1, 1))
    assert DeterministicStrategy.from_json_dict(s.to_json_dict()) == s


def test_point_mass_is_local():
    s = DeterministicStrategy((0, 1), (1, 0))
    assert is_local(s.correlation(2, 2))


def test_pr_box_not_local():
    assert not is_local(pr_box())


def test_uniform_is_local_with_exact_reconstruction():
    import itertools
    p = Correlation.uniform(2, 2, 2, 2)
    combo = local_decomposition(p)
    assert combo is not None
    assert sum(w for w, _ in combo) == 1
    for (x, y, a, b) in itertools.product(range(2), repeat=4):
        mass = sum(w for w, s in combo if s.f[x] == a and s.g[y] == b)
        assert mass == p.prob(x, y, a, b)


def test_is_local_capacity_cap():
    p = Correlation.uniform(2, 2, 2, 2)
    with pytest.raises(CapacityError):
        is_local(p, vertex_cap=3)
    assert DEFAULT_VERTEX_CAP == 100_000


def test_is_local_requires_exact_mode():
    p = Correlation.uniform(2, 2, 2, 2, mode="numeric")
    with pytest.raises(ValueError):
        is_local(p)


def test_det_cover_p4k2_matches_oracle():
    g = homomorphism_game(path_graph(4), complete_graph(2))
    cov = reflexive_cover_det(g)
    assert cov.zeros == brute_force_det_cover_zeros(g)
    # the endpoint pair is forced to distinct colours, both orderings
    for a in range(2):
        assert (0, 3, a, a) in cov.zeros and (3, 0, a, a) in cov.zeros
    assert g.zeros <= cov.zeros


def test_det_cover_all_ones_unchanged():
    g = all_ones_game(2, 2, 2, 2)
    assert reflexive_cover_det(g) == g


def test_det_cover_chsh_all_zeros():
    cov = reflexive_cover_det(chsh_game())
    assert cov.zeros == frozenset(chsh_game().cells())


def test_det_cover_idempotent_on_randoms():
    rng = random.Random(23)
    for _ in range(40):
        g = random_game(rng)
        cov = reflexive_cover_det(g)
        assert reflexive_cover_det(cov) == cov
        assert cov.zeros == brute_force_det_cover_zeros(g)
