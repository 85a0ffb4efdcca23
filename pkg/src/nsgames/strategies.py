"""Exact search over deterministic strategies and local-correlation tests.

Deterministic strategies are pairs of functions (f: X->A, g: Y->B); their
point-mass correlations are the vertices of the local polytope.  The
enumeration backtracks over f, propagating per-question constraints on g,
so it prunes long before the na^nx * nb^ny worst case.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from . import lp
from .errors import CapacityError, FormatError, ShapeError
from .game import Cell, Correlation, Game

DEFAULT_VERTEX_CAP = 100_000


@dataclass(frozen=True)
class DeterministicStrategy:
    """A pair of answer functions, stored as tuples indexed by question."""

    f: tuple[int, ...]
    g: tuple[int, ...]

    def correlation(self, na: int, nb: int) -> Correlation:
        """The product point mass p(a,b|x,y) = [a=f(x)][b=g(y)], exact mode."""
        if any(a >= na for a in self.f) or any(b >= nb for b in self.g):
            raise ShapeError("strategy answers exceed the alphabets")
        one, zero = Fraction(1), Fraction(0)
        return Correlation.from_function(
            len(self.f), len(self.g), na, nb,
            lambda x, y, a, b: one if (a == self.f[x] and b == self.g[y]) else zero)

    def to_json_dict(self) -> dict:
        return {"f": list(self.f), "g": list(self.g)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "DeterministicStrategy":
        try:
            return cls(tuple(int(v) for v in d["f"]),
                       tuple(int(v) for v in d["g"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"invalid strategy JSON: {exc}") from exc


def _perfect_pairs(g: Game, limit: Optional[int]) -> Iterator[DeterministicStrategy]:
    # zeros indexed by (x, a): the (y, b) pairs this question/answer forbids
    forbidden: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for (x, y, a, b) in g.zeros:
        forbidden.setdefault((x, a), []).append((y, b))

    full_b = frozenset(range(g.nb))
    count = 0

    def extend(x: int, f: list[int], allowed_b: list[frozenset[int]]):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if x == g.nx:
            pools = [sorted(s) for s in allowed_b]
            for gs in itertools.product(*pools):
                if limit is not None and count >= limit:
                    return
                count += 1
                yield DeterministicStrategy(tuple(f), tuple(gs))
            return
        for a in range(g.na):
            new_allowed = list(allowed_b)
            ok = True
            for (y, b) in forbidden.get((x, a), ()):
                s = new_allowed[y] - {b}
                new_allowed[y] = s
                if not s:
                    ok = False
                    break
            if ok:
                f.append(a)
                yield from extend(x + 1, f, new_allowed)
                f.pop()

    yield from extend(0, [], [full_b] * g.ny)


def enumerate_deterministic_perfect(g: Game,
                                    limit: Optional[int] = None
                                    ) -> list[DeterministicStrategy]:
    """All (f, g) whose point mass is a perfect strategy, lexicographic order."""
    return list(_perfect_pairs(g, limit))


def has_deterministic_perfect(g: Game) -> bool:
    """Early-exit wrapper around the enumeration."""
    return next(iter(_perfect_pairs(g, 1)), None) is not None


def _all_strategies(g: Game) -> Iterator[DeterministicStrategy]:
    for f in itertools.product(range(g.na), repeat=g.nx):
        for gs in itertools.product(range(g.nb), repeat=g.ny):
            yield DeterministicStrategy(f, gs)


def local_decomposition(p: Correlation,
                        vertex_cap: int = DEFAULT_VERTEX_CAP
                        ) -> Optional[list[tuple[Fraction, DeterministicStrategy]]]:
    """A convex combination of deterministic vertices equal to p, if one exists.

    Solved as an exact LP with one weight variable per deterministic
    strategy, so it is for desk-scale alphabets only.
    """
    if p.mode != "exact":
        raise ValueError("local membership is decided in exact mode only")
    n_vertices = (p.na ** p.nx) * (p.nb ** p.ny)
    if n_vertices > vertex_cap:
        raise CapacityError(
            f"{n_vertices} deterministic vertices exceed the cap {vertex_cap}")
    g_dims = Game(p.nx, p.ny, p.na, p.nb, frozenset())
    vertices = list(_all_strategies(g_dims))
    prog = lp.LinearProgram(n_vars=n_vertices, sense="feasibility")
    for (x, y, a, b) in g_dims.cells():
        coeffs = {j: 1 for j, v in enumerate(vertices)
                  if v.f[x] == a and v.g[y] == b}
        prog.add_row(coeffs, "=", p.entries[x][y][a][b])
    prog.add_row({j: 1 for j in range(n_vertices)}, "=", 1)
    out = lp.lp_solve(prog)
    if out.status != lp.OPTIMAL:
        return None
    return [(w, vertices[j]) for j, w in enumerate(out.solution) if w != 0]


def is_local(p: Correlation, vertex_cap: int = DEFAULT_VERTEX_CAP) -> bool:
    """True iff p lies in the convex hull of deterministic correlations."""
    return local_decomposition(p, vertex_cap) is not None


def reflexive_cover_det(g: Game) -> Game:
    """The hardest game won by every deterministic perfect strategy of g.

    Its zeros are the complement of the union of the strategies' supports;
    with no deterministic perfect strategy the intersection over the empty
    set makes every cell a zero.
    """
    strategies = enumerate_deterministic_perfect(g)
    if not strategies:
        return g.with_zeros(frozenset(g.cells()))
    support: set[Cell] = set()
    for s in strategies:
        for x in range(g.nx):
            for y in range(g.ny):
                support.add((x, y, s.f[x], s.g[y]))
    zeros = frozenset(c for c in g.cells() if c not in support)
    return g.with_zeros(zeros)
