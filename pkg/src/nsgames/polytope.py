"""Exact feasibility and optimization over the non-signalling polytope.

The base LP has one nonnegative variable per allowed cell p(a,b|x,y)
(zeros of the game are eliminated structurally), per-question-pair
normalization, and a spanning set of marginal equalities (each question
compared against question 0 of the other party).

Two solution paths, both exact:

* a direct dense simplex for desk-scale games, used for `max_entry` and
  the ns-reflexive cover;
* for larger games, feasibility only, a cut-generation scheme over the
  marginal variables: per question pair the existence of a conditional
  distribution with the prescribed marginals and allowed support is a
  transportation problem, whose Hall-type violated inequalities are
  separated exactly with a rational max-flow and added lazily.
"""

from __future__ import annotations

import os
from collections import deque
from fractions import Fraction
from typing import Optional

from . import lp
from .errors import CapacityError, NoPerfectStrategyError
from .game import Cell, Correlation, Game

DEFAULT_LP_CAP = 2000
_DIRECT_LP_THRESHOLD = 600


def lp_cap() -> int:
    """Variable cap for the direct dense simplex; NSGAMES_LP_CAP overrides."""
    v = os.environ.get("NSGAMES_LP_CAP")
    return int(v) if v else DEFAULT_LP_CAP


def build_perfect_ns_lp(g: Game) -> tuple[lp.LinearProgram, dict[Cell, int], list[Cell]]:
    """LP whose feasible points are the NS perfect strategies of g."""
    cells = [c for c in g.cells() if c not in g.zeros]
    var = {c: j for j, c in enumerate(cells)}
    prog = lp.LinearProgram(n_vars=len(cells), sense="feasibility")
    for x in range(g.nx):
        for y in range(g.ny):
            coeffs = {var[(x, y, a, b)]: 1
                      for a in range(g.na) for b in range(g.nb)
                      if (x, y, a, b) in var}
            prog.add_row(coeffs, "=", 1)
    for x in range(g.nx):
        for a in range(g.na):
            base = {var[(x, 0, a, b)]: 1 for b in range(g.nb)
                    if (x, 0, a, b) in var}
            for y in range(1, g.ny):
                coeffs = dict(base)
                for b in range(g.nb):
                    j = var.get((x, y, a, b))
                    if j is not None:
                        coeffs[j] = coeffs.get(j, 0) - 1
                if coeffs:
                    prog.add_row(coeffs, "=", 0)
    for y in range(g.ny):
        for b in range(g.nb):
            base = {var[(0, y, a, b)]: 1 for a in range(g.na)
                    if (0, y, a, b) in var}
            for x in range(1, g.nx):
                coeffs = dict(base)
                for a in range(g.na):
                    j = var.get((x, y, a, b))
                    if j is not None:
                        coeffs[j] = coeffs.get(j, 0) - 1
                if coeffs:
                    prog.add_row(coeffs, "=", 0)
    return prog, var, cells


def _correlation_from_solution(g: Game, var: dict[Cell, int],
                               sol: list[Fraction]) -> Correlation:
    zero = Fraction(0)
    return Correlation.from_function(
        g.nx, g.ny, g.na, g.nb,
        lambda x, y, a, b: sol[var[(x, y, a, b)]] if (x, y, a, b) in var else zero)


def ns_perfect_feasible(g: Game, cap: Optional[int] = None) -> Optional[Correlation]:
    """An exact NS perfect strategy for g, or None if there is none."""
    n_allowed = g.cell_count() - len(g.zeros)
    if n_allowed == 0:
        return None
    if n_allowed <= _DIRECT_LP_THRESHOLD:
        prog, var, _ = build_perfect_ns_lp(g)
        out = lp.lp_solve(prog)
        if out.status != lp.OPTIMAL:
            return None
        return _correlation_from_solution(g, var, out.solution)
    return _ns_feasible_cutting(g, cap)


def max_entry(g: Game, x: int, y: int, a: int, b: int,
              cap: Optional[int] = None) -> Fraction:
    """Exact maximum of p(a,b|x,y) over all NS perfect strategies of g."""
    if not (0 <= x < g.nx and 0 <= y < g.ny and 0 <= a < g.na and 0 <= b < g.nb):
        raise ValueError(f"cell {(x, y, a, b)} out of bounds")
    if (x, y, a, b) in g.zeros:
        if ns_perfect_feasible(g, cap) is None:
            raise NoPerfectStrategyError("game has no NS perfect strategy")
        return Fraction(0)
    prog, var, _ = build_perfect_ns_lp(g)
    limit = cap if cap is not None else lp_cap()
    if prog.n_vars > limit:
        raise CapacityError(f"{prog.n_vars} LP variables exceed the cap {limit}")
    prog.sense = "max"
    prog.set_objective({var[(x, y, a, b)]: 1})
    out = lp.lp_solve(prog)
    if out.status == lp.INFEASIBLE:
        raise NoPerfectStrategyError("game has no NS perfect strategy")
    assert out.status == lp.OPTIMAL  # objective bounded in [0, 1]
    return out.optimum


def reflexive_cover_ns(g: Game, cap: Optional[int] = None,
                       jobs: int = 1) -> Game:
    """The hardest game with the same NS perfect strategies as g.

    A cell stays allowed iff some NS perfect strategy gives it positive
    mass.  Instead of one LP per cell, undecided cells are settled in
    batches: maximizing their total mass either certifies all remaining
    ones as zeros (optimum 0) or exhibits new support cells.  `jobs > 1`
    switches to independent per-cell LPs in a process pool; both paths
    return the same game.
    """
    prog, var, cells = build_perfect_ns_lp(g)
    limit = cap if cap is not None else lp_cap()
    if prog.n_vars > limit:
        raise CapacityError(f"{prog.n_vars} LP variables exceed the cap {limit}")
    if jobs > 1 and cells:
        return _cover_ns_percell(g, cap, jobs)

    out = lp.lp_solve(prog)
    if out.status != lp.OPTIMAL:
        return g.with_zeros(frozenset(g.cells()))
    undecided = {c for c in cells if out.solution[var[c]] == 0}
    prog.sense = "max"
    while undecided:
        prog.set_objective({var[c]: 1 for c in undecided})
        out = lp.lp_solve(prog)
        assert out.status == lp.OPTIMAL
        if out.optimum == 0:
            break
        newly = {c for c in undecided if out.solution[var[c]] != 0}
        assert newly
        undecided -= newly
    zeros = set(g.zeros) | undecided
    return g.with_zeros(frozenset(zeros))


def _max_entry_worker(args):
    g_dict, cell, cap = args
    g = Game.from_json_dict(g_dict)
    return cell, max_entry(g, *cell, cap=cap)


def _cover_ns_percell(g: Game, cap: Optional[int], jobs: int) -> Game:
    from concurrent.futures import ProcessPoolExecutor

    if ns_perfect_feasible(g, cap) is None:
        return g.with_zeros(frozenset(g.cells()))
    cells = [c for c in g.cells() if c not in g.zeros]
    zeros = set(g.zeros)
    payload = [(g.to_json_dict(), c, cap) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for cell, value in pool.map(_max_entry_worker, payload, chunksize=4):
            if value == 0:
                zeros.add(cell)
    return g.with_zeros(frozenset(zeros))


# ---------------------------------------------------------------------------
# Cut-generation feasibility for large games.

def _max_flow(r: list[Fraction], s: list[Fraction],
              allowed: list[list[int]]):
    """Exact max flow from row supplies r to column demands s.

    allowed[a] lists the columns reachable from row a.  Returns
    (value, flow, reach_a) where flow[a][b] is the shipped mass and
    reach_a the rows on the source side of a min cut.
    """
    na, nb = len(r), len(s)
    # residual capacities: source->a, a->b (infinite), b->sink
    cap_src = list(r)
    cap_snk = list(s)
    flow = [dict() for _ in range(na)]
    total = Fraction(0)
    inf = sum(r) + 1
    while True:
        # BFS for an augmenting path in the residual network
        prev_a: list[Optional[tuple[str, int]]] = [None] * na
        prev_b: list[Optional[int]] = [None] * nb
        q = deque()
        for a in range(na):
            if cap_src[a] > 0:
                prev_a[a] = ("s", -1)
                q.append(("a", a))
        found = -1
        while q and found < 0:
            kind, i = q.popleft()
            if kind == "a":
                for b in allowed[i]:
                    if prev_b[b] is None:
                        prev_b[b] = i
                        if cap_snk[b] > 0:
                            found = b
                            break
                        q.append(("b", b))
            else:
                for a in range(na):
                    if prev_a[a] is None and flow[a].get(i, 0) > 0:
                        prev_a[a] = ("b", i)
                        q.append(("a", a))
        if found < 0:
            reach_a = frozenset(a for a in range(na) if prev_a[a] is not None)
            return total, flow, reach_a
        # bottleneck along the path ending at sink via column `found`
        path = []
        b = found
        bottleneck = cap_snk[b]
        while True:
            a = prev_b[b]
            path.append((a, b))
            kind, j = prev_a[a]
            if kind == "s":
                bottleneck = min(bottleneck, cap_src[a])
                break
            bottleneck = min(bottleneck, flow[a][j])
            b = j
        first_a = path[-1][0]
        cap_src[first_a] -= bottleneck
        cap_snk[found] -= bottleneck
        for i, (a, b) in enumerate(path):
            flow[a][b] = flow[a].get(b, 0) + bottleneck
            if i + 1 < len(path):
                _, j = prev_a[a]
                flow[a][j] -= bottleneck
        total += bottleneck


def _ns_feasible_cutting(g: Game, cap: Optional[int]) -> Optional[Correlation]:
    nxa = g.nx * g.na
    n_vars = nxa + g.ny * g.nb

    def va(x, a):
        return x * g.na + a

    def vb(y, b):
        return nxa + y * g.nb + b

    allowed_b = {}
    for x in range(g.nx):
        for y in range(g.ny):
            for a in range(g.na):
                allowed_b[(x, y, a)] = [b for b in range(g.nb)
                                        if (x, y, a, b) not in g.zeros]

    prog = lp.LinearProgram(n_vars=n_vars, sense="feasibility")
    for x in range(g.nx):
        prog.add_row({va(x, a): 1 for a in range(g.na)}, "=", 1)
    for y in range(g.ny):
        prog.add_row({vb(y, b): 1 for b in range(g.nb)}, "=", 1)
    # seed Hall cuts: taking all answers of one party bounds the mass the
    # other party may put outside the jointly reachable answers
    for x in range(g.nx):
        for y in range(g.ny):
            reachable = sorted({b for a in range(g.na)
                                for b in allowed_b[(x, y, a)]})
            if len(reachable) < g.nb:
                prog.add_row({vb(y, b): 1 for b in reachable}, ">=", 1)
            for a in range(g.na):
                if not allowed_b[(x, y, a)]:
                    prog.add_row({va(x, a): 1}, "<=", 0)

    max_rounds = 4 * g.nx * g.ny * (2 ** min(g.na, 16))
    for _ in range(max_rounds):
        out = lp.lp_solve(prog)
        if out.status != lp.OPTIMAL:
            return None
        m = out.solution
        plans = {}
        violated = False
        for x in range(g.nx):
            r = [m[va(x, a)] for a in range(g.na)]
            for y in range(g.ny):
                s = [m[vb(y, b)] for b in range(g.nb)]
                allow = [allowed_b[(x, y, a)] for a in range(g.na)]
                value, flow, reach_a = _max_flow(r, s, allow)
                if value == 1:
                    plans[(x, y)] = flow
                else:
                    neigh = sorted({b for a in reach_a for b in allow[a]})
                    coeffs = {va(x, a): 1 for a in reach_a}
                    for b in neigh:
                        coeffs[vb(y, b)] = coeffs.get(vb(y, b), 0) - 1
                    prog.add_row(coeffs, "<=", 0)
                    violated = True
        if not violated:
            zero = Fraction(0)
            return Correlation.from_function(
                g.nx, g.ny, g.na, g.nb,
                lambda x, y, a, b: plans[(x, y)][a].get(b, zero) or zero)
    raise CapacityError("cut generation failed to converge")  # pragma: no cover
