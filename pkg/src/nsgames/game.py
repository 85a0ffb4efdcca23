"""Games, correlations, and the basic taxonomy checks.

A game is a finite rule function ``lam : X x Y x A x B -> {0,1}`` stored
sparsely through its zero set (the forbidden cells).  A correlation is a
family of conditional distributions ``p(a,b|x,y)``, kept either as exact
rationals or as floats.  Everything here is immutable and pure.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from .errors import FormatError, ShapeError

Cell = tuple[int, int, int, int]

EXACT = "exact"
NUMERIC = "numeric"

DEFAULT_TOL = 1e-9


def _check_alphabets(nx: int, ny: int, na: int, nb: int) -> None:
    for label, n in (("nx", nx), ("ny", ny), ("na", na), ("nb", nb)):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"{label} must be a positive integer, got {n!r}")


@dataclass(frozen=True)
class Game:
    """A two-player one-round game with 0/1 rule function.

    ``zeros`` holds the forbidden cells (x, y, a, b); every other cell is
    allowed.  Alphabets are the integer ranges [0, nx) etc.
    """

    nx: int
    ny: int
    na: int
    nb: int
    zeros: frozenset[Cell]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        _check_alphabets(self.nx, self.ny, self.na, self.nb)
        object.__setattr__(self, "zeros", frozenset(tuple(z) for z in self.zeros))
        for (x, y, a, b) in self.zeros:
            if not (0 <= x < self.nx and 0 <= y < self.ny
                    and 0 <= a < self.na and 0 <= b < self.nb):
                raise ValueError(f"zero cell {(x, y, a, b)} out of bounds")

    def lam(self, x: int, y: int, a: int, b: int) -> int:
        return 0 if (x, y, a, b) in self.zeros else 1

    def cells(self) -> Iterator[Cell]:
        """All cells of the rule tensor, in lexicographic order."""
        return itertools.product(range(self.nx), range(self.ny),
                                 range(self.na), range(self.nb))

    def allowed_cells(self) -> Iterator[Cell]:
        return (c for c in self.cells() if c not in self.zeros)

    def cell_count(self) -> int:
        return self.nx * self.ny * self.na * self.nb

    def same_alphabets(self, other: "Game") -> bool:
        return (self.nx, self.ny, self.na, self.nb) == \
               (other.nx, other.ny, other.na, other.nb)

    def with_zeros(self, zeros: Iterable[Cell], name: Optional[str] = None) -> "Game":
        return Game(self.nx, self.ny, self.na, self.nb, frozenset(zeros),
                    name if name is not None else self.name)

    def to_json_dict(self) -> dict:
        d = {"nx": self.nx, "ny": self.ny, "na": self.na, "nb": self.nb,
             "zeros": sorted(list(z) for z in self.zeros)}
        if self.name is not None:
            d["name"] = self.name
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "Game":
        try:
            zeros = frozenset(tuple(int(v) for v in z) for z in d["zeros"])
            return cls(int(d["nx"]), int(d["ny"]), int(d["na"]), int(d["nb"]),
                       zeros, d.get("name"))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"invalid game JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Game":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid game JSON: {exc}") from exc
        return cls.from_json_dict(d)


def _fraction_from_json(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    raise FormatError(f"exact entries must be strings or ints, got {v!r}")


@dataclass(frozen=True)
class Correlation:
    """Conditional distributions p(a,b|x,y), exact-rational or float.

    ``entries[x][y][a][b]`` holds p(a,b|x,y).  Construction checks that
    every slice p(.,.|x,y) is a probability distribution (exactly in exact
    mode, within the validation tolerance ``tol`` in numeric mode).
    """

    nx: int
    ny: int
    na: int
    nb: int
    entries: tuple
    mode: str = EXACT
    tol: float = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        _check_alphabets(self.nx, self.ny, self.na, self.nb)
        if self.mode not in (EXACT, NUMERIC):
            raise ValueError(f"mode must be 'exact' or 'numeric', got {self.mode!r}")
        ent = self.entries
        if len(ent) != self.nx:
            raise ShapeError("entries do not match nx")
        frozen = []
        for x in range(self.nx):
            if len(ent[x]) != self.ny:
                raise ShapeError("entries do not match ny")
            row = []
            for y in range(self.ny):
                block = ent[x][y]
                if len(block) != self.na or any(len(r) != self.nb for r in block):
                    raise ShapeError("entries do not match (na, nb)")
                if self.mode == EXACT:
                    block = tuple(tuple(Fraction(v) for v in r) for r in block)
                else:
                    block = tuple(tuple(float(v) for v in r) for r in block)
                row.append(block)
            frozen.append(tuple(row))
        object.__setattr__(self, "entries", tuple(frozen))
        tol = Fraction(0) if self.mode == EXACT else self.tol
        for x in range(self.nx):
            for y in range(self.ny):
                s = sum(self.entries[x][y][a][b]
                        for a in range(self.na) for b in range(self.nb))
                if abs(s - 1) > tol:
                    raise ValueError(f"slice (x={x}, y={y}) sums to {s}, not 1")
                for a in range(self.na):
                    for b in range(self.nb):
                        if self.entries[x][y][a][b] < -tol:
                            raise ValueError(
                                f"negative entry p({a},{b}|{x},{y}) = "
                                f"{self.entries[x][y][a][b]}")

    def prob(self, x: int, y: int, a: int, b: int):
        return self.entries[x][y][a][b]

    def marginal_a(self, x: int, a: int, y: int = 0):
        """p(a|x) computed through questions (x, y); y-independent iff non-signalling."""
        return sum(self.entries[x][y][a][b] for b in range(self.nb))

    def marginal_b(self, y: int, b: int, x: int = 0):
        return sum(self.entries[x][y][a][b] for a in range(self.na))

    def same_alphabets(self, g: Game) -> bool:
        return (self.nx, self.ny, self.na, self.nb) == (g.nx, g.ny, g.na, g.nb)

    @classmethod
    def from_function(cls, nx: int, ny: int, na: int, nb: int,
                      fn: Callable[[int, int, int, int], object],
                      mode: str = EXACT) -> "Correlation":
        ent = tuple(tuple(tuple(tuple(fn(x, y, a, b) for b in range(nb))
                                for a in range(na))
                          for y in range(ny))
                    for x in range(nx))
        return cls(nx, ny, na, nb, ent, mode)

    @classmethod
    def uniform(cls, nx: int, ny: int, na: int, nb: int,
                mode: str = EXACT) -> "Correlation":
        w = Fraction(1, na * nb) if mode == EXACT else 1.0 / (na * nb)
        return cls.from_function(nx, ny, na, nb, lambda *_: w, mode)

    def to_json_dict(self) -> dict:
        if self.mode == EXACT:
            ser = [[[[str(v) for v in r] for r in blk] for blk in row]
                   for row in self.entries]
        else:
            ser = [[[[float(v) for v in r] for r in blk] for blk in row]
                   for row in self.entries]
        return {"nx": self.nx, "ny": self.ny, "na": self.na, "nb": self.nb,
                "entries": ser, "mode": self.mode}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "Correlation":
        try:
            mode = d["mode"]
            raw = d["entries"]
            if mode == EXACT:
                ent = tuple(tuple(tuple(tuple(_fraction_from_json(v) for v in r)
                                        for r in blk) for blk in row) for row in raw)
            else:
                ent = tuple(tuple(tuple(tuple(float(v) for v in r)
                                        for r in blk) for blk in row) for row in raw)
            return cls(int(d["nx"]), int(d["ny"]), int(d["na"]), int(d["nb"]),
                       ent, mode)
        except (KeyError, TypeError, IndexError) as exc:
            raise FormatError(f"invalid correlation JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Correlation":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid correlation JSON: {exc}") from exc
        return cls.from_json_dict(d)


@dataclass(frozen=True)
class ClassificationReport:
    """Taxonomy flags for a game, with witnesses where the flag holds.

    ``mirror_witness`` is a pair of maps (xi: X->Y, eta: Y->X); the
    ``unique_witness`` gives, per question pair, the bijection phi[x][y]
    with phi[x][y][a] = the unique winning b.
    """

    synchronous: bool
    imitation: bool
    mirror: bool
    unique: bool
    mirror_witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    unique_witness: Optional[tuple[tuple[tuple[int, ...], ...], ...]] = None

    def to_json_dict(self) -> dict:
        d = {"synchronous": self.synchronous, "imitation": self.imitation,
             "mirror": self.mirror, "unique": self.unique}
        if self.mirror_witness is not None:
            d["mirror_witness"] = {"xi": list(self.mirror_witness[0]),
                                   "eta": list(self.mirror_witness[1])}
        if self.unique_witness is not None:
            d["unique_witness"] = [[list(row) for row in per_x]
                                   for per_x in self.unique_witness]
        return d


def _tol_for(p: Correlation, tol) -> object:
    if p.mode == EXACT:
        if tol != 0:
            raise ValueError("tol must be 0 for exact-mode correlations")
        return Fraction(0)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return tol


def is_nonsignalling(p: Correlation, tol=0) -> bool:
    """True iff both marginal families are independent of the far input.

    Also re-checks that every slice is a probability distribution within
    ``tol`` (this is already enforced at construction with the default
    tolerance, but the caller's tolerance may be stricter).
    """
    t = _tol_for(p, tol)
    for x in range(p.nx):
        for y in range(p.ny):
            s = sum(p.entries[x][y][a][b]
                    for a in range(p.na) for b in range(p.nb))
            if abs(s - 1) > t:
                return False
            if any(p.entries[x][y][a][b] < -t
                   for a in range(p.na) for b in range(p.nb)):
                return False
    for x in range(p.nx):
        for a in range(p.na):
            base = p.marginal_a(x, a, 0)
            for y in range(1, p.ny):
                if abs(p.marginal_a(x, a, y) - base) > t:
                    return False
    for y in range(p.ny):
        for b in range(p.nb):
            base = p.marginal_b(y, b, 0)
            for x in range(1, p.nx):
                if abs(p.marginal_b(y, b, x) - base) > t:
                    return False
    return True


def is_perfect_strategy(g: Game, p: Correlation, tol=0) -> bool:
    """True iff p is non-signalling and puts (at most tol) mass on every zero of g."""
    if not p.same_alphabets(g):
        raise ShapeError("correlation alphabets do not match the game")
    t = _tol_for(p, tol)
    if not is_nonsignalling(p, tol):
        return False
    return all(p.entries[x][y][a][b] <= t for (x, y, a, b) in g.zeros)


def support_zeros(p: Correlation, tol=0) -> frozenset[Cell]:
    """N(p): the cells where p is (at most tol above) zero."""
    t = _tol_for(p, tol)
    return frozenset((x, y, a, b)
                     for x in range(p.nx) for y in range(p.ny)
                     for a in range(p.na) for b in range(p.nb)
                     if p.entries[x][y][a][b] <= t)


def harder_than(g1: Game, g2: Game) -> bool:
    """True iff g1 is harder than g2, i.e. lam1 <= lam2 pointwise."""
    if not g1.same_alphabets(g2):
        raise ShapeError("games have different alphabets")
    return g2.zeros <= g1.zeros


def classify(g: Game) -> ClassificationReport:
    """Synchronous / imitation / mirror / unique flags, with witnesses.

    The mirror search is pointwise per question (a single y must separate
    all answer pairs for that x), so it runs in polynomial time.
    """
    synchronous = (g.nx == g.ny and g.na == g.nb and
                   all((x, x, a, b) in g.zeros
                       for x in range(g.nx)
                       for a in range(g.na) for b in range(g.nb) if a != b))

    def a_pair_separated(x: int, y: int, a: int, a2: int) -> bool:
        return all(g.lam(x, y, a, b) * g.lam(x, y, a2, b) == 0
                   for b in range(g.nb))

    def b_pair_separated(x: int, y: int, b: int, b2: int) -> bool:
        return all(g.lam(x, y, a, b) * g.lam(x, y, a, b2) == 0
                   for a in range(g.na))

    imitation = all(
        any(a_pair_separated(x, y, a, a2) for y in range(g.ny))
        for x in range(g.nx)
        for a, a2 in itertools.combinations(range(g.na), 2)
    ) and all(
        any(b_pair_separated(x, y, b, b2) for x in range(g.nx))
        for y in range(g.ny)
        for b, b2 in itertools.combinations(range(g.nb), 2)
    )

    xi: list[int] = []
    for x in range(g.nx):
        y_ok = next((y for y in range(g.ny)
                     if all(a_pair_separated(x, y, a, a2)
                            for a, a2 in itertools.combinations(range(g.na), 2))),
                    None)
        if y_ok is None:
            xi = []
            break
        xi.append(y_ok)
    eta: list[int] = []
    if xi or g.nx == 0:
        for y in range(g.ny):
            x_ok = next((x for x in range(g.nx)
                         if all(b_pair_separated(x, y, b, b2)
                                for b, b2 in itertools.combinations(range(g.nb), 2))),
                        None)
            if x_ok is None:
                eta = []
                break
            eta.append(x_ok)
    mirror = len(xi) == g.nx and len(eta) == g.ny
    mirror_witness = (tuple(xi), tuple(eta)) if mirror else None

    unique = g.na == g.nb
    phi: list[list[tuple[int, ...]]] = []
    if unique:
        for x in range(g.nx):
            per_y = []
            for y in range(g.ny):
                row = []
                seen_b = set()
                for a in range(g.na):
                    bs = [b for b in range(g.nb) if g.lam(x, y, a, b) == 1]
                    if len(bs) != 1 or bs[0] in seen_b:
                        unique = False
                        break
                    seen_b.add(bs[0])
                    row.append(bs[0])
                if not unique:
                    break
                per_y.append(tuple(row))
            if not unique:
                break
            phi.append(per_y)
    unique_witness = tuple(tuple(per_x) for per_x in phi) if unique else None

    return ClassificationReport(synchronous=synchronous, imitation=imitation,
                                mirror=mirror, unique=unique,
                                mirror_witness=mirror_witness,
                                unique_witness=unique_witness)
