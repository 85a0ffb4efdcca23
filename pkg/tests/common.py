"""Shared builders and brute-force oracles for the test suite."""

import itertools
import random
from fractions import Fraction

from nsgames import Correlation, Game


def chsh_game() -> Game:
    """Win iff a XOR b equals x AND y on binary alphabets."""
    zeros = frozenset((x, y, a, b)
                      for x, y, a, b in itertools.product(range(2), repeat=4)
                      if (a ^ b) != (x & y))
    return Game(2, 2, 2, 2, zeros, "chsh")


def pr_box() -> Correlation:
    half, zero = Fraction(1, 2), Fraction(0)
    return Correlation.from_function(
        2, 2, 2, 2,
        lambda x, y, a, b: half if (a ^ b) == (x & y) else zero)


def all_ones_game(nx=2, ny=2, na=2, nb=2) -> Game:
    return Game(nx, ny, na, nb, frozenset(), "all-ones")


def random_game(rng: random.Random, max_alpha=3, zero_prob=None) -> Game:
    nx, ny, na, nb = (rng.randint(1, max_alpha) for _ in range(4))
    p = zero_prob if zero_prob is not None else rng.uniform(0.1, 0.5)
    zeros = frozenset(c for c in itertools.product(
        range(nx), range(ny), range(na), range(nb)) if rng.random() < p)
    return Game(nx, ny, na, nb, zeros)


def random_graph(rng: random.Random, n: int, p: float = 0.5):
    from nsgames import Graph
    edges = frozenset((u, v) for u, v in itertools.combinations(range(n), 2)
                      if rng.random() < p)
    return Graph(n, edges)


def permuted_graph(rng: random.Random, g):
    from nsgames import Graph
    perm = list(range(g.n))
    rng.shuffle(perm)
    return Graph(g.n, frozenset((perm[u], perm[v]) for u, v in g.edges))


def brute_force_perfect_pairs(g: Game):
    """Oracle: every (f, g) pair whose point mass is perfect, by full scan."""
    out = []
    for f in itertools.product(range(g.na), repeat=g.nx):
        for gs in itertools.product(range(g.nb), repeat=g.ny):
            if all((x, y, f[x], gs[y]) not in g.zeros
                   for x in range(g.nx) for y in range(g.ny)):
                out.append((f, gs))
    return out


def brute_force_det_cover_zeros(g: Game):
    """Oracle for the det-cover zero set via the full strategy scan."""
    pairs = brute_force_perfect_pairs(g)
    if not pairs:
        return frozenset(g.cells())
    support = set()
    for f, gs in pairs:
        for x in range(g.nx):
            for y in range(g.ny):
                support.add((x, y, f[x], gs[y]))
    return frozenset(c for c in g.cells() if c not in support)


def gf2_solve(n_vars, equations):
    """Oracle: brute-force GF(2) satisfiability, n_vars <= ~14 only."""
    for bits in range(1 << n_vars):
        z = tuple((bits >> v) & 1 for v in range(n_vars))
        if all(sum(z[v] for v in sup) % 2 == rho for sup, rho in equations):
            return z
    return None
