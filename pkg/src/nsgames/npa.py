"""Level-1 moment-matrix relaxation for perfect-strategy refutation.

The moment matrix is indexed by the words {1} u {e_xa} u {f_yb} and is
constrained by symmetry, the unit, projection diagonals, per-question
row sums against the unit row, same-question orthogonality, the game's
zero cells, and nonnegativity of the entries that are probabilities in
any commuting model.  Feasibility is probed with cyclic projections
between the PSD cone and the affine/orthant parts; this is a heuristic
refuter, not a certificate, and it says so in its statuses.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .game import Correlation, Game

FEASIBLE = "feasible"
INFEASIBLE_NUMERIC = "infeasible_numeric"
INCONCLUSIVE = "inconclusive"

DEFAULT_FEAS_TOL = 1e-7
DEFAULT_INFEAS_TOL = 1e-4
DEFAULT_MAX_ITERS = 200_000
PLATEAU_WINDOW = 500
PLATEAU_REL_DECREASE = 1e-10

_SQRT2 = math.sqrt(2.0)


def _svec_index(d: int):
    """Map (i <= j) entry pairs to coordinates of the scaled upper triangle."""
    idx = {}
    k = 0
    for i in range(d):
        for j in range(i, d):
            idx[(i, j)] = k
            k += 1
    return idx


def svec(m: np.ndarray) -> np.ndarray:
    d = m.shape[0]
    out = np.empty(d * (d + 1) // 2)
    k = 0
    for i in range(d):
        out[k] = m[i, i]
        run = d - i - 1
        if run:
            out[k + 1:k + 1 + run] = _SQRT2 * m[i, i + 1:]
        k += 1 + run
    return out


def smat(v: np.ndarray, d: int) -> np.ndarray:
    m = np.empty((d, d))
    k = 0
    for i in range(d):
        m[i, i] = v[k]
        run = d - i - 1
        if run:
            row = v[k + 1:k + 1 + run] / _SQRT2
            m[i, i + 1:] = row
            m[i + 1:, i] = row
        k += 1 + run
    return m


@dataclass
class MomentProblem:
    """Affine-plus-cone description of the level-1 moment matrix set."""

    d: int
    a_mat: np.ndarray          # rows x D, D = d(d+1)/2, svec coordinates
    b_vec: np.ndarray
    clamp_coords: np.ndarray   # svec coordinates constrained >= 0
    nx: int
    ny: int
    na: int
    nb: int
    level: int = 1

    def word_index(self, party: str, q: int, ans: int) -> int:
        if party == "a":
            return 1 + q * self.na + ans
        return 1 + self.nx * self.na + q * self.nb + ans


def build_moment_problem(g: Game) -> MomentProblem:
    d = 1 + g.nx * g.na + g.ny * g.nb
    sidx = _svec_index(d)

    def ia(x, a):
        return 1 + x * g.na + a

    def ib(y, b):
        return 1 + g.nx * g.na + y * g.nb + b

    rows: list[dict] = []
    rhs: list[float] = []
    seen = set()

    def add_row(entries: dict, value: float) -> None:
        # entries maps (i, j) with i <= j to the symmetric coefficient C_ij
        key = (tuple(sorted(entries.items())), value)
        if key in seen or not entries:
            return
        seen.add(key)
        rows.append(entries)
        rhs.append(value)

    def entry(entries: dict, u: int, v: int, w: float) -> None:
        # weight w on the matrix entry M[u, v]; off-diagonal symmetric
        # coefficients count twice in <C, M>, hence the halving
        p = (u, v) if u <= v else (v, u)
        entries[p] = entries.get(p, 0.0) + (w if u == v else w / 2.0)

    def sum_row(generators: list[int], v: int) -> dict:
        entries: dict = {}
        for u in generators:
            entry(entries, u, v, 1.0)
        entry(entries, 0, v, -1.0)
        return {p: c for p, c in entries.items() if c != 0.0}

    add_row({(0, 0): 1.0}, 1.0)
    for x in range(g.nx):
        gens = [ia(x, a) for a in range(g.na)]
        for v in range(d):
            add_row(sum_row(gens, v), 0.0)
    for y in range(g.ny):
        gens = [ib(y, b) for b in range(g.nb)]
        for v in range(d):
            add_row(sum_row(gens, v), 0.0)
    for w in range(1, d):
        row: dict = {}
        entry(row, w, w, 1.0)
        entry(row, 0, w, -1.0)
        add_row(row, 0.0)
    for x in range(g.nx):
        for a in range(g.na):
            for a2 in range(a + 1, g.na):
                row = {}
                entry(row, ia(x, a), ia(x, a2), 1.0)
                add_row(row, 0.0)
    for y in range(g.ny):
        for b in range(g.nb):
            for b2 in range(b + 1, g.nb):
                row = {}
                entry(row, ib(y, b), ib(y, b2), 1.0)
                add_row(row, 0.0)
    for (x, y, a, b) in sorted(g.zeros):
        row = {}
        entry(row, ia(x, a), ib(y, b), 1.0)
        add_row(row, 0.0)

    a_mat = np.zeros((len(rows), d * (d + 1) // 2))
    for r, entries in enumerate(rows):
        for (i, j), c in entries.items():
            a_mat[r, sidx[(i, j)]] = c if i == j else _SQRT2 * c
    b_vec = np.array(rhs)

    clamp = [sidx[(0, w)] for w in range(1, d)]
    for x in range(g.nx):
        for a in range(g.na):
            for y in range(g.ny):
                for b in range(g.nb):
                    clamp.append(sidx[(ia(x, a), ib(y, b))])
    return MomentProblem(d=d, a_mat=a_mat, b_vec=b_vec,
                         clamp_coords=np.array(sorted(set(clamp)), dtype=int),
                         nx=g.nx, ny=g.ny, na=g.na, nb=g.nb)


@dataclass
class RelaxationOutcome:
    status: str
    residual: float
    iterations: int
    correlation: Optional[Correlation] = None

    def to_json_dict(self) -> dict:
        return {"status": self.status, "residual": self.residual,
                "iterations": self.iterations}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _psd_project(v: np.ndarray, d: int) -> np.ndarray:
    w, q = np.linalg.eigh(smat(v, d))
    w = np.maximum(w, 0.0)
    return svec((q * w) @ q.T)


def _recover_correlation(mp: MomentProblem, v: np.ndarray,
                         tol: float) -> Correlation:
    m = smat(v, mp.d)
    ent = tuple(tuple(tuple(tuple(
        float(m[mp.word_index("a", x, a), mp.word_index("b", y, b)])
        for b in range(mp.nb)) for a in range(mp.na))
        for y in range(mp.ny)) for x in range(mp.nx))
    return Correlation(mp.nx, mp.ny, mp.na, mp.nb, ent, mode="numeric",
                       tol=tol)


def npa_feasible(mp: MomentProblem,
                 feas_tol: float = DEFAULT_FEAS_TOL,
                 infeas_tol: float = DEFAULT_INFEAS_TOL,
                 max_iters: int = DEFAULT_MAX_ITERS) -> RelaxationOutcome:
    """Cyclic projections between the affine part, the PSD cone, and the
    entry orthant.

    feasible: the affine-exact iterate is within feas_tol of the cones.
    infeasible_numeric: the gap plateaued above infeas_tol (a numeric
    refutation, not a proof).  Everything else is inconclusive.
    """
    if not 0 < feas_tol < infeas_tol:
        raise ValueError("need 0 < feas_tol < infeas_tol")
    d = mp.d
    a = mp.a_mat
    b = mp.b_vec
    pinv = np.linalg.pinv(a, rcond=1e-12)
    clamp = mp.clamp_coords

    def p_aff(v):
        return v - pinv @ (a @ v - b)

    x = np.zeros(d * (d + 1) // 2)
    x[0] = 1.0
    x = p_aff(x)
    cons_violation = float(np.linalg.norm(a @ x - b))

    history: list[float] = []
    residual = math.inf
    for it in range(1, max_iters + 1):
        y = _psd_project(x, d)
        d_psd = float(np.linalg.norm(x - y))
        d_clamp = float(np.linalg.norm(np.minimum(x[clamp], 0.0)))
        residual = max(d_psd, d_clamp, cons_violation)
        if residual < feas_tol:
            corr = _recover_correlation(mp, x, tol=max(1e-6, 10 * feas_tol))
            return RelaxationOutcome(FEASIBLE, residual, it, corr)
        history.append(residual)
        if len(history) > PLATEAU_WINDOW:
            history.pop(0)
            drop = history[0] - history[-1]
            if drop < PLATEAU_REL_DECREASE * max(history[0], 1e-300):
                if residual > infeas_tol:
                    return RelaxationOutcome(INFEASIBLE_NUMERIC, residual, it)
                return RelaxationOutcome(INCONCLUSIVE, residual, it)
        z = y.copy()
        z[clamp] = np.maximum(z[clamp], 0.0)
        x = p_aff(z)
    return RelaxationOutcome(INCONCLUSIVE, residual, max_iters)


@dataclass
class DualCertificate:
    """Outcome of the subgradient search for an infeasibility witness.

    A witness y has b.y = 1 while A*(y) is negative definite; any PSD
    moment matrix would give the contradictory 0 < 1 = b.y = <A*(y), M>
    <= 0, so found=True refutes feasibility up to floating error.
    """

    found: bool
    max_eigenvalue: float
    b_dot_y: float
    y: np.ndarray


def dual_infeasibility_certificate(mp: MomentProblem,
                                   iters: int = 4000,
                                   margin: float = 1e-6) -> DualCertificate:
    """Projected subgradient descent of lambda_max(A*(y)) on {b.y = 1}."""
    a = mp.a_mat
    b = mp.b_vec
    d = mp.d
    bb = float(b @ b)
    y = b / bb
    best = math.inf
    best_y = y.copy()
    for t in range(1, iters + 1):
        c = smat(a.T @ y, d)
        w, q = np.linalg.eigh(c)
        lam = float(w[-1])
        if lam < best:
            best = lam
            best_y = y.copy()
        u = q[:, -1]
        g = a @ svec(np.outer(u, u))
        g -= (float(b @ g) / bb) * b
        norm = float(np.linalg.norm(g))
        if norm < 1e-15:
            break
        y = y - (1.0 / math.sqrt(t)) * g / norm
        y += ((1.0 - float(b @ y)) / bb) * b
    c = smat(a.T @ best_y, d)
    lam = float(np.linalg.eigvalsh(c)[-1])
    return DualCertificate(found=lam < -margin, max_eigenvalue=lam,
                           b_dot_y=float(b @ best_y), y=best_y)
