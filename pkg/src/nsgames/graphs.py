"""Graph-derived games, colour refinement, and chromatic covers.

Graphs are simple and undirected; vertices are 0..n-1 and edges are
stored canonically as (min, max) pairs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CapacityError, FormatError
from .game import Cell, Game

DEFAULT_COLORING_CAP = 10 ** 6


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        canon = set()
        for (u, v) in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u} not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canon))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, u: int) -> list[int]:
        return [v for v in range(self.n) if self.adjacent(u, v)]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in itertools.combinations(range(self.n), 2)
                if (u, v) not in self.edges]

    def adjacency_sets(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for (u, v) in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": sorted(list(e) for e in self.edges)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "Graph":
        try:
            return cls(int(d["n"]),
                       frozenset(tuple(int(v) for v in e) for e in d["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"invalid graph JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            return cls.from_json_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid graph JSON: {exc}") from exc

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        """Line format: first line n, then one 'u v' edge per line."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise FormatError("empty graph text")
        try:
            n = int(lines[0])
            edges = set()
            for ln in lines[1:]:
                u, v = ln.split()
                edges.add((int(u), int(v)))
            return cls(n, frozenset(edges))
        except (ValueError, TypeError) as exc:
            raise FormatError(f"invalid graph text: {exc}") from exc

    def to_text(self) -> str:
        out = [str(self.n)]
        out.extend(f"{u} {v}" for u, v in sorted(self.edges))
        return "\n".join(out) + "\n"


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u, v in
                              itertools.combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = {(u + g.n, v + g.n) for (u, v) in h.edges}
    return Graph(g.n + h.n, g.edges | frozenset(shifted))


@dataclass(frozen=True)
class EquitablePartition:
    """Vertex partition with constant neighbour counts c[i][j]."""

    parts: tuple[frozenset[int], ...]
    counts: tuple[tuple[int, ...], ...]

    def verify(self, g: Graph) -> bool:
        """Recount neighbours part by part; True iff the counts are right."""
        seen: set[int] = set()
        for p in self.parts:
            if p & seen:
                return False
            seen |= p
        if seen != set(range(g.n)):
            return False
        adj = g.adjacency_sets()
        for i, p in enumerate(self.parts):
            for v in p:
                for j, q in enumerate(self.parts):
                    if len(adj[v] & q) != self.counts[i][j]:
                        return False
        return True

    def to_json_dict(self) -> dict:
        return {"parts": [sorted(p) for p in self.parts],
                "counts": [list(row) for row in self.counts]}


def coarsest_equitable_partition(g: Graph) -> EquitablePartition:
    """Colour refinement from the single-part partition to its fixpoint."""
    if g.n == 0:
        return EquitablePartition(parts=(), counts=())
    adj = g.adjacency_sets()
    color = [0] * g.n
    n_colors = 1
    while True:
        sig = [(color[v], tuple(sorted(color[u] for u in adj[v])))
               for v in range(g.n)]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[sig[v]] for v in range(g.n)]
        if len(order) == n_colors:
            break
        color, n_colors = new, len(order)
    groups: dict[int, set[int]] = {}
    for v, c in enumerate(color):
        groups.setdefault(c, set()).add(v)
    parts = tuple(frozenset(groups[c])
                  for c in sorted(groups, key=lambda c: min(groups[c])))
    counts = []
    for p in parts:
        v = min(p)
        counts.append(tuple(len(adj[v] & q) for q in parts))
    return EquitablePartition(parts=parts, counts=tuple(counts))


def common_cep(g: Graph, h: Graph) -> bool:
    """True iff the coarsest equitable partitions match up to permutation.

    Matches part sizes and all partition numbers by backtracking over
    signature-compatible candidates.
    """
    pg = coarsest_equitable_partition(g)
    ph = coarsest_equitable_partition(h)
    k = len(pg.parts)
    if k != len(ph.parts):
        return False

    def signature(sizes, counts, i):
        rows = sorted(zip((sizes[j] for j in range(k)), counts[i],
                          (counts[j][i] for j in range(k))))
        return (sizes[i], tuple(rows))

    sizes_g = [len(p) for p in pg.parts]
    sizes_h = [len(p) for p in ph.parts]
    sig_g = [signature(sizes_g, pg.counts, i) for i in range(k)]
    sig_h = [signature(sizes_h, ph.counts, i) for i in range(k)]
    if sorted(sig_g) != sorted(sig_h):
        return False

    candidates = [[j for j in range(k) if sig_h[j] == sig_g[i]]
                  for i in range(k)]
    perm: list[int] = []
    used = [False] * k

    def extend(i: int) -> bool:
        if i == k:
            return True
        for j in candidates[i]:
            if used[j]:
                continue
            if any(pg.counts[i][i2] != ph.counts[j][perm[i2]] or
                   pg.counts[i2][i] != ph.counts[perm[i2]][j]
                   for i2 in range(i)):
                continue
            if pg.counts[i][i] != ph.counts[j][j]:
                continue
            used[j] = True
            perm.append(j)
            if extend(i + 1):
                return True
            perm.pop()
            used[j] = False
        return False

    return extend(0)


def homomorphism_game(g: Graph, h: Graph, name: Optional[str] = None) -> Game:
    """Players answer H-vertices to G-vertex questions; equal questions need
    equal answers, adjacent questions need adjacent answers."""
    zeros: set[Cell] = set()
    for x in range(g.n):
        for y in range(g.n):
            for a in range(h.n):
                for b in range(h.n):
                    if (x == y and a != b) or \
                       (g.adjacent(x, y) and not h.adjacent(a, b)):
                        zeros.add((x, y, a, b))
    return Game(g.n, g.n, h.n, h.n, frozenset(zeros),
                name or f"hom({g.n}v->{h.n}v)")


def coloring_game(g: Graph, c: int, name: Optional[str] = None) -> Game:
    if c < 1:
        raise ValueError("need at least one colour")
    return homomorphism_game(g, complete_graph(c), name or f"col({g.n}v,{c})")


def _rel(graph: Graph, u: int, v: int) -> int:
    if u == v:
        return 0
    return 1 if graph.adjacent(u, v) else 2


def isomorphism_game(g: Graph, h: Graph, name: Optional[str] = None) -> Game:
    """Questions and answers range over V(G) disjoint-union V(H); answers must
    come from the opposite graph and the two G-vertices must relate exactly
    as the two H-vertices do (equal / adjacent / distinct non-adjacent)."""
    n = g.n + h.n

    def side(v: int) -> int:
        return 0 if v < g.n else 1

    zeros: set[Cell] = set()
    for u, w in itertools.product(range(n), repeat=2):
        if side(u) == side(w):
            for v1, v2 in itertools.product(range(n), repeat=2):
                zeros.add((u, v1, w, v2))  # Alice answers her own graph
                zeros.add((v1, u, v2, w))  # Bob answers his own graph
    for x, a in itertools.product(range(n), repeat=2):
        if side(x) == side(a):
            continue
        ga, ha = (x, a - g.n) if side(x) == 0 else (a, x - g.n)
        for y, b in itertools.product(range(n), repeat=2):
            if side(y) == side(b):
                continue
            gb, hb = (y, b - g.n) if side(y) == 0 else (b, y - g.n)
            if _rel(g, ga, gb) != _rel(h, ha, hb):
                zeros.add((x, y, a, b))
    return Game(n, n, n, n, frozenset(zeros), name or f"iso({g.n}v,{h.n}v)")


def synchronicity_game(n_inputs: int, n_outputs: int,
                       name: Optional[str] = None) -> Game:
    zeros = frozenset((x, x, a, b)
                      for x in range(n_inputs)
                      for a in range(n_outputs) for b in range(n_outputs)
                      if a != b)
    return Game(n_inputs, n_inputs, n_outputs, n_outputs, zeros,
                name or f"sync({n_inputs},{n_outputs})")


def _greedy_coloring(g: Graph) -> int:
    adj = g.adjacency_sets()
    order = sorted(range(g.n), key=lambda v: -len(adj[v]))
    color: dict[int, int] = {}
    for v in order:
        taken = {color[u] for u in adj[v] if u in color}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return 1 + max(color.values(), default=-1) if g.n else 0


def _colorable(g: Graph, k: int) -> bool:
    return next(_proper_colorings(g, k, first_only=True), None) is not None


def _proper_colorings(g: Graph, k: int, cap: Optional[int] = None,
                      first_only: bool = False):
    """Backtracking enumeration of proper k-colourings (as tuples)."""
    adj = g.adjacency_sets()
    order = sorted(range(g.n), key=lambda v: -len(adj[v]))
    pos = {v: i for i, v in enumerate(order)}
    color = [-1] * g.n
    produced = 0

    def assign(i: int):
        nonlocal produced
        if i == g.n:
            produced += 1
            if cap is not None and produced > cap:
                raise CapacityError(f"more than {cap} proper colourings")
            yield tuple(color)
            return
        v = order[i]
        taken = {color[u] for u in adj[v] if pos[u] < i}
        # existence checks may break colour-renaming symmetry; enumeration
        # must not, since covers need every proper colouring
        limit = min(k, i + 1) if first_only else k
        for c in range(limit):
            if c not in taken:
                color[v] = c
                yield from assign(i + 1)
        color[v] = -1

    yield from assign(0)


def chromatic_number(g: Graph) -> int:
    """Least k admitting a proper k-colouring (greedy bound, then descend)."""
    if g.n == 0:
        return 0
    k = _greedy_coloring(g)
    while k > 1 and _colorable(g, k - 1):
        k -= 1
    return k


def chromatic_cover(g: Graph, cap: int = DEFAULT_COLORING_CAP) -> Graph:
    """G plus every non-edge forced to distinct colours by all proper
    chi(G)-colourings."""
    if g.n == 0:
        return g
    chi = chromatic_number(g)
    spared: set[tuple[int, int]] = set()
    non_edges = set(g.non_edges())
    for coloring in _proper_colorings(g, chi, cap=cap):
        for (u, v) in non_edges - spared:
            if coloring[u] == coloring[v]:
                spared.add((u, v))
        if spared == non_edges:
            break
    forced = non_edges - spared
    return Graph(g.n, g.edges | frozenset(forced))


def _walk_matrices(g: Graph, l_max: int) -> list[list[list[bool]]]:
    """walks[l][u][v] for 1 <= l <= l_max (index 0 unused)."""
    adj = [[g.adjacent(u, v) for v in range(g.n)] for u in range(g.n)]
    walks = [None, adj]
    cur = adj
    for _ in range(2, l_max + 1):
        nxt = [[any(cur[u][w] and adj[w][v] for w in range(g.n))
                for v in range(g.n)] for u in range(g.n)]
        walks.append(nxt)
        cur = nxt
    return walks


def walk_implied_zeros(g: Graph, h: Graph,
                       l_max: Optional[int] = None) -> frozenset[Cell]:
    """Cells of the homomorphism game killed by walk counting.

    For each length l: question pairs joined by an l-walk in G cannot be
    answered by H-pairs with no l-walk, and a question on a closed l-walk
    cannot be answered by a vertex on no closed l-walk (a single-party
    zero).  Sound for quantum perfect strategies; walk-length sets are
    eventually periodic, so n(G)*n(H) lengths suffice at desk scale.
    """
    if l_max is None:
        l_max = max(1, g.n * h.n)
    if g.n == 0 or h.n == 0:
        return frozenset()
    wg = _walk_matrices(g, l_max)
    wh = _walk_matrices(h, l_max)
    zeros: set[Cell] = set()
    for l in range(1, l_max + 1):
        for x in range(g.n):
            for y in range(g.n):
                if not wg[l][x][y]:
                    continue
                for a in range(h.n):
                    for b in range(h.n):
                        if not wh[l][a][b]:
                            zeros.add((x, y, a, b))
        for x in range(g.n):
            if not wg[l][x][x]:
                continue
            for a in range(h.n):
                if not wh[l][a][a]:
                    for y in range(g.n):
                        for b in range(h.n):
                            zeros.add((x, y, a, b))
    return frozenset(zeros)
