"""Binary linear constraint system games and their operator solutions.

A linear BCS is a list of parity constraints (-1)^rho * prod_{i in V} l_i
= 1 over +-1 variables.  The associated game asks Alice for a satisfying
assignment of one constraint and Bob for the value of one variable; when
Bob's variable occurs in Alice's constraint the answers must agree.

Alice's answers are flattened to sign tuples over the largest support:
bit j of the answer assigns the j-th smallest variable of the
constraint's support (bit 1 means -1), bits beyond the support must be 0,
and non-satisfying or ill-padded tuples are forbidden by the rule
function.  Bob's alphabet is {0, 1} with b encoding (-1)^b.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (CapacityError, FormatError, InvalidSolutionError,
                     ShapeError)
from .game import Cell, Correlation, Game

DEFAULT_SUPPORT_CAP = 6


@dataclass(frozen=True)
class LinearBCS:
    """Parity constraints over variables 0..n_vars-1.

    Each constraint is (support, rho) with a nonempty, sorted,
    duplicate-free support; every variable must appear in at least one
    constraint.
    """

    n_vars: int
    constraints: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("need at least one variable")
        if not self.constraints:
            raise ValueError("need at least one constraint")
        norm = []
        covered: set[int] = set()
        for support, rho in self.constraints:
            sup = tuple(sorted(support))
            if not sup:
                raise ValueError("constraint supports must be nonempty")
            if len(set(sup)) != len(sup):
                raise ValueError(f"duplicate variables in support {support}")
            if any(not (0 <= v < self.n_vars) for v in sup):
                raise ValueError(f"support {support} out of range")
            if rho not in (0, 1):
                raise ValueError(f"rho must be 0 or 1, got {rho}")
            covered.update(sup)
            norm.append((sup, rho))
        if covered != set(range(self.n_vars)):
            missing = sorted(set(range(self.n_vars)) - covered)
            raise ValueError(f"variables {missing} appear in no constraint")
        object.__setattr__(self, "constraints", tuple(norm))

    def max_support(self) -> int:
        return max(len(sup) for sup, _ in self.constraints)

    def to_text(self) -> str:
        """Text format: 'vars n', then one 'rho i1 ... ik' line per
        constraint with 1-based variable indices."""
        lines = [f"vars {self.n_vars}"]
        for sup, rho in self.constraints:
            lines.append(" ".join([str(rho)] + [str(v + 1) for v in sup]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearBCS":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("vars"):
            raise FormatError("BCS text must start with 'vars n'")
        try:
            n = int(lines[0].split()[1])
            constraints = []
            for ln in lines[1:]:
                toks = [int(t) for t in ln.split()]
                constraints.append((tuple(v - 1 for v in toks[1:]), toks[0]))
            return cls(n, tuple(constraints))
        except (IndexError, ValueError) as exc:
            raise FormatError(f"invalid BCS text: {exc}") from exc


def classical_satisfiable(s: LinearBCS) -> Optional[tuple[int, ...]]:
    """A GF(2) witness (z_i bits, 1 meaning -1) or None.

    Each constraint reads sum_{i in V} z_i = rho mod 2; plain Gaussian
    elimination decides the system.
    """
    m = [[0] * s.n_vars + [rho] for (sup, rho) in s.constraints]
    for row, (sup, _) in zip(m, s.constraints):
        for v in sup:
            row[v] = 1
    rank = 0
    pivots = []
    for col in range(s.n_vars):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                m[r] = [(a ^ b) for a, b in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(m)):
        if m[r][-1]:
            return None
    z = [0] * s.n_vars
    for r, col in enumerate(pivots):
        z[col] = m[r][-1]
    return tuple(z)


def answer_is_valid(s: LinearBCS, x: int, a: int) -> bool:
    """True iff answer a encodes a satisfying assignment of constraint x."""
    sup, rho = s.constraints[x]
    k = len(sup)
    if a >= (1 << k):
        return False
    return (bin(a).count("1") & 1) == rho


def answer_bit(s: LinearBCS, x: int, a: int, var: int) -> int:
    """The bit answer a assigns to variable var (which must be in the support)."""
    sup, _ = s.constraints[x]
    return (a >> sup.index(var)) & 1


def bcs_game(s: LinearBCS, support_cap: int = DEFAULT_SUPPORT_CAP,
             name: Optional[str] = None) -> Game:
    """The canonical game of the system: X = constraints, Y = variables.

    Questions with a variable outside Alice's constraint accept any b, the
    only constraint on the pair being that Alice's answer satisfies her
    constraint (see the module docstring for the flattening).
    """
    smax = s.max_support()
    if smax > support_cap:
        raise CapacityError(
            f"support size {smax} exceeds the cap {support_cap}")
    nx = len(s.constraints)
    ny = s.n_vars
    na = 1 << smax
    zeros: set[Cell] = set()
    for x in range(nx):
        sup, _ = s.constraints[x]
        for a in range(na):
            if not answer_is_valid(s, x, a):
                for y in range(ny):
                    zeros.update(((x, y, a, 0), (x, y, a, 1)))
                continue
            for y in sup:
                zeros.add((x, y, a, 1 - answer_bit(s, x, a, y)))
    return Game(nx, ny, na, 2, frozenset(zeros), name or f"bcs({ny}v,{nx}c)")


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names and relator words.

    Relators are tuples of generator names; all generators here are
    involutions, so inverses never need a separate symbol.
    """

    generators: tuple[str, ...]
    relators: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        gens = set(self.generators)
        for w in self.relators:
            if not w or any(sym not in gens for sym in w):
                raise ValueError(f"invalid relator word {w}")

    def word_strings(self) -> list[str]:
        return ["*".join(w) for w in self.relators]


def solution_group_presentation(s: LinearBCS) -> Presentation:
    """Generators u_1..u_n and a central involution J; relators make each
    generator an involution, J central, co-occurring generators commute,
    and J^rho times the ascending support product trivial."""
    gen = [f"u{i + 1}" for i in range(s.n_vars)]
    gens = ("J", *gen)
    relators: list[tuple[str, ...]] = []
    for i in range(s.n_vars):
        relators.append((gen[i], gen[i]))
    relators.append(("J", "J"))
    for i in range(s.n_vars):
        relators.append(("J", gen[i], "J", gen[i]))
    pairs = sorted({(i, j) for sup, _ in s.constraints
                    for i, j in itertools.combinations(sorted(sup), 2)})
    for i, j in pairs:
        relators.append((gen[i], gen[j], gen[i], gen[j]))
    for sup, rho in s.constraints:
        word = ("J",) * rho + tuple(gen[v] for v in sup)
        relators.append(word)
    return Presentation(gens, tuple(relators))


@dataclass(frozen=True)
class OperatorSolution:
    """Matrices U_1..U_n claimed to satisfy the solution-group relations
    with J represented as -I."""

    dim: int
    matrices: tuple

    SCALAR_J = -1

    def __post_init__(self):
        mats = []
        for u in self.matrices:
            arr = np.asarray(u, dtype=complex)
            if arr.shape != (self.dim, self.dim):
                raise ShapeError(
                    f"matrix of shape {arr.shape} in a dim-{self.dim} solution")
            arr.setflags(write=False)
            mats.append(arr)
        object.__setattr__(self, "matrices", tuple(mats))

    def to_json_dict(self) -> dict:
        return {"dim": self.dim,
                "matrices": [[[[float(v.real), float(v.imag)] for v in row]
                              for row in u] for u in self.matrices]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "OperatorSolution":
        try:
            mats = [np.array([[complex(c[0], c[1]) for c in row]
                              for row in u]) for u in d["matrices"]]
            return cls(int(d["dim"]), tuple(mats))
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise FormatError(f"invalid operator-solution JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "OperatorSolution":
        try:
            return cls.from_json_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid operator-solution JSON: {exc}") from exc


def _opnorm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def operator_solution_residual(s: LinearBCS, sol: OperatorSolution) -> float:
    """Largest operator-norm deviation over self-adjointness and all
    relator words, the words evaluated literally with J = -I."""
    if len(sol.matrices) != s.n_vars:
        raise ShapeError(f"expected {s.n_vars} matrices, got {len(sol.matrices)}")
    d = sol.dim
    eye = np.eye(d)
    table = {"J": -eye}
    for i, u in enumerate(sol.matrices):
        table[f"u{i + 1}"] = u
    worst = max(_opnorm(u - u.conj().T) for u in sol.matrices)
    pres = solution_group_presentation(s)
    for word in pres.relators:
        prod = eye
        for sym in word:
            prod = prod @ table[sym]
        worst = max(worst, _opnorm(prod - eye))
    return worst


def verify_operator_solution(s: LinearBCS, sol: OperatorSolution,
                             tol: float = 1e-9) -> bool:
    return operator_solution_residual(s, sol) <= tol


def _joint_projections(s: LinearBCS, sol: OperatorSolution, x: int,
                       na: int) -> list[np.ndarray]:
    """PVM over flattened answers for constraint x: joint eigenprojections
    of the commuting involutions on the support (zero for invalid answers)."""
    sup, _ = s.constraints[x]
    d = sol.dim
    eye = np.eye(d)
    out = []
    for a in range(na):
        if a >= (1 << len(sup)):
            out.append(np.zeros((d, d)))
            continue
        proj = eye
        for j, v in enumerate(sup):
            sign = -1.0 if (a >> j) & 1 else 1.0
            proj = proj @ (eye + sign * sol.matrices[v]) / 2.0
        out.append(proj)
    return out


def strategy_from_operator_solution(s: LinearBCS,
                                    sol: OperatorSolution) -> Correlation:
    """The maximally entangled strategy of a verified operator solution.

    p(a,b|x,y) = Tr(P_xa Q_yb)/d, the trace evaluation of the joint
    eigenprojections against the spectral projections of the variables
    (on the maximally entangled state Bob measures the entrywise
    conjugates, which is what folds the transpose into a plain product
    trace).
    """
    if not verify_operator_solution(s, sol):
        raise InvalidSolutionError("operator solution fails verification")
    g = bcs_game(s)
    d = sol.dim
    eye = np.eye(d)
    p = [_joint_projections(s, sol, x, g.na) for x in range(g.nx)]
    q = [[(eye + (1.0 if b == 0 else -1.0) * sol.matrices[y]) / 2.0
          for b in range(2)] for y in range(g.ny)]
    ent = tuple(tuple(tuple(tuple(
        float(np.trace(p[x][a] @ q[y][b]).real) / d
        for b in range(2)) for a in range(g.na))
        for y in range(g.ny)) for x in range(g.nx))
    return Correlation(g.nx, g.ny, g.na, g.nb, ent, mode="numeric")


def _as_pvm_table(mats: Sequence[Sequence[object]]) -> list[list[np.ndarray]]:
    return [[np.asarray(m, dtype=complex) for m in row] for row in mats]


def verify_representation(g: Game, p_mats, q_mats, tol: float = 1e-9) -> bool:
    """True iff the matrices are PVMs per question and kill every zero of
    the game, i.e. define a finite-dimensional representation of the game
    algebra (which certifies a perfect quantum strategy)."""
    p = _as_pvm_table(p_mats)
    q = _as_pvm_table(q_mats)
    if len(p) != g.nx or any(len(row) != g.na for row in p):
        raise ShapeError("P table does not match the game's (nx, na)")
    if len(q) != g.ny or any(len(row) != g.nb for row in q):
        raise ShapeError("Q table does not match the game's (ny, nb)")
    dims = {m.shape for row in p for m in row} | \
           {m.shape for row in q for m in row}
    if len(dims) != 1:
        raise ShapeError(f"mixed matrix shapes {dims}")
    (d, d2), = dims
    if d != d2:
        raise ShapeError("matrices must be square")
    eye = np.eye(d)
    for row in (*p, *q):
        for m in row:
            if _opnorm(m - m.conj().T) > tol or _opnorm(m @ m - m) > tol:
                return False
        if _opnorm(sum(row) - eye) > tol:
            return False
    return all(_opnorm(p[x][a] @ q[y][b]) <= tol
               for (x, y, a, b) in g.zeros)


def correlation_from_rep(p_mats, q_mats,
                         trace_weights: Optional[Sequence[tuple[int, float]]] = None
                         ) -> Correlation:
    """p(a,b|x,y) = tau(P_xa Q_yb) with tau the normalized trace, or a
    block-weighted trace given as (block_size, weight) pairs."""
    p = _as_pvm_table(p_mats)
    q = _as_pvm_table(q_mats)
    d = p[0][0].shape[0]
    if trace_weights is None:
        blocks = [(0, d, 1.0)]
    else:
        blocks = []
        at = 0.0
        offset = 0
        for size, w in trace_weights:
            if size < 1 or w < 0:
                raise ValueError("block sizes must be >= 1 and weights >= 0")
            blocks.append((offset, offset + size, float(w)))
            offset += size
            at += w
        if offset != d or abs(at - 1.0) > 1e-12:
            raise ValueError("weights must cover the diagonal and sum to 1")

    def tau(m: np.ndarray) -> float:
        return sum(w * float(np.trace(m[lo:hi, lo:hi]).real) / (hi - lo)
                   for lo, hi, w in blocks)

    nx, na = len(p), len(p[0])
    ny, nb = len(q), len(q[0])
    ent = tuple(tuple(tuple(tuple(
        tau(p[x][a] @ q[y][b]) for b in range(nb)) for a in range(na))
        for y in range(ny)) for x in range(nx))
    return Correlation(nx, ny, na, nb, ent, mode="numeric")


def rep_to_json_dict(p_mats, q_mats) -> dict:
    p = _as_pvm_table(p_mats)
    q = _as_pvm_table(q_mats)

    def ser(mats):
        return [[[[[float(v.real), float(v.imag)] for v in row]
                  for row in m] for m in per_q] for per_q in mats]

    return {"dim": p[0][0].shape[0], "p_matrices": ser(p), "q_matrices": ser(q)}


def rep_from_json_dict(d: dict):
    try:
        def de(tables):
            return [[np.array([[complex(c[0], c[1]) for c in row]
                               for row in m]) for m in per_q] for per_q in tables]

        return de(d["p_matrices"]), de(d["q_matrices"])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise FormatError(f"invalid representation JSON: {exc}") from exc


def magic_square() -> tuple[LinearBCS, OperatorSolution]:
    """The Mermin-Peres magic square: 9 variables on a 3x3 grid, row
    products +1, column products +1 except the last column -1, together
    with the standard two-qubit observable table."""
    rows = [((0, 1, 2), 0), ((3, 4, 5), 0), ((6, 7, 8), 0)]
    cols = [((0, 3, 6), 0), ((1, 4, 7), 0), ((2, 5, 8), 1)]
    system = LinearBCS(9, tuple(rows + cols))

    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    yy = np.kron(1j * x @ z, 1j * x @ z)  # Y (x) Y, real entries
    table = (
        np.kron(x, eye), np.kron(eye, x), np.kron(x, x),
        np.kron(eye, z), np.kron(z, eye), np.kron(z, z),
        np.kron(x, z), np.kron(z, x), yy,
    )
    return system, OperatorSolution(dim=4, matrices=table)
