import itertools
import random
from fractions import Fraction

from nsgames import LinearProgram, lp_solve
from nsgames.lp import INFEASIBLE, OPTIMAL, UNBOUNDED


def test_bounded_single_variable():
    p = LinearProgram(n_vars=1, sense="max")
    p.add_row({0: 1}, "<=", 3)
    p.add_row({0: 1}, ">=", 0)
    p.set_objective({0: 1})
    out = lp_solve(p)
    assert out.status == OPTIMAL
    assert out.optimum == 3
    assert out.solution == [Fraction(3)]


def test_contradictory_bounds_infeasible():
    p = LinearProgram(n_vars=1, sense="max")
    p.add_row({0: 1}, ">=", 1)
    p.add_row({0: 1}, "<=", 0)
    out = lp_solve(p)
    assert out.status == INFEASIBLE


def test_unit_simplex_optimum():
    p = LinearProgram(n_vars=2, sense="max")
    p.add_row({0: 1, 1: 1}, "=", 1)
    p.set_objective({0: 1, 1: 1})
    out = lp_solve(p)
    assert out.status == OPTIMAL
    assert out.optimum == 1


def test_unbounded():
    p = LinearProgram(n_vars=2, sense="max")
    p.add_row({0: 1}, ">=", 1)
    p.set_objective({1: 1})
    assert lp_solve(p).status == UNBOUNDED


def test_rational_data_exact():
    p = LinearProgram(n_vars=2, sense="max")
    p.add_row({0: Fraction(1, 3), 1: Fraction(1, 7)}, "<=", Fraction(2, 5))
    p.set_objective({0: 1, 1: Fraction(1, 2)})
    out = lp_solve(p)
    assert out.status == OPTIMAL
    # maximum puts everything on the variable with best ratio: x1, 21/10... check exactly
    # obj coeff per unit of constraint: x0: 1/(1/3)=3, x1: (1/2)/(1/7)=7/2 -> x1 wins
    assert out.optimum == Fraction(7, 2) * Fraction(2, 5)
    assert out.solution[0] == 0


def _brute_force_max(p: LinearProgram):
    """Enumerate all basic solutions of the equality form; exact oracle."""
    # convert to equality form with slacks, as the simplex does
    rows = []
    n = p.n_vars
    slacks = 0
    for coeffs, rel, rhs in p.rows:
        if rel != "=":
            slacks += 1
    total = n + slacks
    si = n
    for coeffs, rel, rhs in p.rows:
        row = [Fraction(0)] * total + [Fraction(rhs)]
        for j, v in coeffs.items():
            row[j] = Fraction(v)
        if rel == "<=":
            row[si] = Fraction(1)
            si += 1
        elif rel == ">=":
            row[si] = Fraction(-1)
            si += 1
        rows.append(row)
    m = len(rows)
    best = None
    feasible = False
    for cols in itertools.combinations(range(total), m):
        # solve the square system on these columns by Gaussian elimination
        mat = [[rows[i][c] for c in cols] + [rows[i][-1]] for i in range(m)]
        sol = _solve_square(mat)
        if sol is None or any(v < 0 for v in sol):
            continue
        feasible = True
        x = [Fraction(0)] * total
        for c, v in zip(cols, sol):
            x[c] = v
        val = sum(Fraction(p.objective.get(j, 0)) * x[j] for j in range(n))
        if best is None or val > best:
            best = val
    return feasible, best


def _solve_square(mat):
    m = len(mat)
    mat = [row[:] for row in mat]
    for col in range(m):
        piv = next((r for r in range(col, m) if mat[r][col] != 0), None)
        if piv is None:
            return None
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for r in range(m):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return [mat[r][-1] for r in range(m)]


def test_random_lps_against_basis_enumeration():
    rng = random.Random(7)
    for trial in range(40):
        n = rng.randint(1, 4)
        m = rng.randint(1, 3)
        p = LinearProgram(n_vars=n, sense="max")
        for _ in range(m):
            coeffs = {j: Fraction(rng.randint(-3, 3)) for j in range(n)}
            rel = rng.choice(["<=", ">=", "="])
            p.add_row(coeffs, rel, Fraction(rng.randint(-2, 4)))
        # bound the box so the brute-force oracle always terminates
        for j in range(n):
            p.add_row({j: 1}, "<=", 5)
        p.set_objective({j: Fraction(rng.randint(-2, 3)) for j in range(n)})
        out = lp_solve(p)
        feasible, best = _brute_force_max(p)
        if not feasible:
            assert out.status == INFEASIBLE, f"trial {trial}"
        else:
            assert out.status == OPTIMAL, f"trial {trial}"
            assert out.optimum == best, f"trial {trial}"


def test_solution_satisfies_constraints_exactly():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(2, 5)
        p = LinearProgram(n_vars=n, sense="max")
        for _ in range(rng.randint(1, 4)):
            p.add_row({j: Fraction(rng.randint(0, 3)) for j in range(n)},
                      rng.choice(["<=", "="]), Fraction(rng.randint(0, 5)))
        for j in range(n):
            p.add_row({j: 1}, "<=", 3)
        p.set_objective({j: Fraction(rng.randint(0, 2)) for j in range(n)})
        out = lp_solve(p)
        if out.status != OPTIMAL:
            continue
        for coeffs, rel, rhs in p.rows:
            lhs = sum(Fraction(v) * out.solution[j] for j, v in coeffs.items())
            if rel == "<=":
                assert lhs <= rhs
            elif rel == ">=":
                assert lhs >= rhs
            else:
                assert lhs == rhs
        assert all(v >= 0 for v in out.solution)
