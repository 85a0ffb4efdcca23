"""Exact rational linear programming (dense two-phase simplex).

Variables are implicitly nonnegative; rows may be equalities or
inequalities with rational data.  The solver works on a dense tableau of
gmpy2 rationals and is exact end to end: a reported status is never
approximate, and returned solutions satisfy every constraint exactly.

Pivoting uses the largest-reduced-cost rule and falls back permanently to
Bland's rule after a run of degenerate pivots, which guarantees
termination without cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# consecutive degenerate pivots tolerated before switching to Bland's rule
_DEGENERATE_RUN = 40


@dataclass
class LinearProgram:
    """max c.x (or pure feasibility) over {x >= 0, rows hold}.

    rows: list of (coeffs, rel, rhs) with coeffs a sparse {var: value}
    map, rel one of '<=', '>=', '=' and rational rhs.
    """

    n_vars: int
    rows: list = field(default_factory=list)
    objective: dict = field(default_factory=dict)
    sense: str = "max"  # 'max' or 'feasibility'

    def add_row(self, coeffs: dict, rel: str, rhs) -> None:
        if rel not in ("<=", ">=", "="):
            raise ValueError(f"bad relation {rel!r}")
        for j in coeffs:
            if not (0 <= j < self.n_vars):
                raise ValueError(f"variable index {j} out of range")
        self.rows.append((dict(coeffs), rel, Fraction(rhs)))

    def set_objective(self, coeffs: dict) -> None:
        for j in coeffs:
            if not (0 <= j < self.n_vars):
                raise ValueError(f"variable index {j} out of range")
        self.objective = dict(coeffs)


@dataclass
class LpOutcome:
    status: str
    optimum: Optional[Fraction] = None
    solution: Optional[list] = None  # list[Fraction], length n_vars


def _pivot(tableau: list, basis: list, r: int, c: int) -> None:
    prow = tableau[r]
    piv = prow[c]
    if piv != 1:
        inv = 1 / piv
        prow = [v * inv for v in prow]
        tableau[r] = prow
    for i, row in enumerate(tableau):
        if i == r:
            continue
        f = row[c]
        if f:
            tableau[i] = [a - f * b for a, b in zip(row, prow)]
    basis[r] = c


def _run_simplex(tableau: list, basis: list, m: int, ncols: int,
                 allowed: Sequence[bool]) -> str:
    """Drive the objective row (index m) to optimality.

    Entering columns are restricted to `allowed`.  Returns OPTIMAL or
    UNBOUNDED.  The objective row holds reduced costs; a negative entry
    means the column improves the (maximization) objective.
    """
    obj = tableau[m]
    rhs = ncols - 1
    degenerate_run = 0
    bland = False
    while True:
        enter = -1
        if bland:
            for j in range(rhs):
                if allowed[j] and obj[j] < 0:
                    enter = j
                    break
        else:
            best = None
            for j in range(rhs):
                v = obj[j]
                if allowed[j] and v < 0 and (best is None or v < best):
                    best = v
                    enter = j
        if enter < 0:
            return OPTIMAL
        leave = -1
        best_ratio = None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][rhs] / coef
                if (best_ratio is None or ratio < best_ratio or
                        (ratio == best_ratio and basis[i] < basis[leave])):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        if best_ratio == 0:
            degenerate_run += 1
            if degenerate_run >= _DEGENERATE_RUN:
                bland = True
        else:
            degenerate_run = 0
        _pivot(tableau, basis, leave, enter)
        obj = tableau[m]


def lp_solve(lp: LinearProgram) -> LpOutcome:
    """Exact two-phase simplex over nonnegative variables."""
    n = lp.n_vars
    rows = []
    for coeffs, rel, rhs in lp.rows:
        coeffs = {j: mpq(v.numerator, v.denominator) if isinstance(v, Fraction)
                  else mpq(v) for j, v in coeffs.items()}
        rhs = mpq(rhs.numerator, rhs.denominator) if isinstance(rhs, Fraction) \
            else mpq(rhs)
        if rhs < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append((coeffs, rel, rhs))

    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel != "=")
    n_art = sum(1 for _, rel, _ in rows if rel != "<=")
    ncols = n + n_slack + n_art + 1
    zero = mpq(0)
    one = mpq(1)

    tableau = []
    basis = []
    art_cols = []
    slack_at = n
    art_at = n + n_slack
    for coeffs, rel, rhs in rows:
        row = [zero] * ncols
        for j, v in coeffs.items():
            row[j] = v
        row[-1] = rhs
        if rel == "<=":
            row[slack_at] = one
            basis.append(slack_at)
            slack_at += 1
        elif rel == ">=":
            row[slack_at] = -one
            slack_at += 1
            row[art_at] = one
            basis.append(art_at)
            art_cols.append(art_at)
            art_at += 1
        else:
            row[art_at] = one
            basis.append(art_at)
            art_cols.append(art_at)
            art_at += 1
        tableau.append(row)

    # Phase 1: maximize -(sum of artificials).
    if art_cols:
        obj = [zero] * ncols
        for c in art_cols:
            obj[c] = one
        tableau.append(obj)
        for i, b in enumerate(basis):
            if b in set(art_cols):
                tableau[m] = [a - t for a, t in zip(tableau[m], tableau[i])]
        allowed = [True] * (ncols - 1)
        status = _run_simplex(tableau, basis, m, ncols, allowed)
        assert status == OPTIMAL  # phase-1 objective is bounded above by 0
        if tableau[m][-1] != 0:
            return LpOutcome(status=INFEASIBLE)
        tableau.pop()
        # Drive leftover artificials out of the basis; rows that cannot
        # pivot are redundant equalities and may be skipped outright.
        art_set = set(art_cols)
        for i in range(m):
            if basis[i] in art_set:
                pivot_col = next((j for j in range(n + n_slack)
                                  if tableau[i][j] != 0), None)
                if pivot_col is not None:
                    _pivot(tableau, basis, i, pivot_col)
        for row in tableau:
            for c in art_cols:
                row[c] = zero

    allowed = [True] * (ncols - 1)
    for c in art_cols:
        allowed[c] = False

    if lp.sense == "feasibility" or not lp.objective:
        sol = [Fraction(0)] * n
        for i, b in enumerate(basis):
            if b < n:
                v = tableau[i][-1]
                sol[b] = Fraction(v.numerator, v.denominator)
        return LpOutcome(status=OPTIMAL, optimum=None, solution=sol)

    # Phase 2.
    obj = [zero] * ncols
    for j, v in lp.objective.items():
        obj[j] = -(mpq(v.numerator, v.denominator) if isinstance(v, Fraction)
                   else mpq(v))
    tableau.append(obj)
    for i, b in enumerate(basis):
        if tableau[m][b] != 0:
            f = tableau[m][b]
            tableau[m] = [a - f * t for a, t in zip(tableau[m], tableau[i])]
    status = _run_simplex(tableau, basis, m, ncols, allowed)
    if status == UNBOUNDED:
        return LpOutcome(status=UNBOUNDED)
    sol = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            v = tableau[i][-1]
            sol[b] = Fraction(v.numerator, v.denominator)
    opt = tableau[m][-1]
    return LpOutcome(status=OPTIMAL,
                     optimum=Fraction(opt.numerator, opt.denominator),
                     solution=sol)
