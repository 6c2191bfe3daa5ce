"""Bipartite graphs and the binary systematic codes ``[I | B]`` they induce.

Left vertices (points) are ``1..k`` and index the systematic columns;
right vertices (blocks) ``B_1..B_b`` index the parity columns ``k+1..k+b``.
The edge ``{i, B_j}`` stands for the simple recovery set
``R(i, B_j) = {k+j} ∪ Γ(B_j) ∖ {i}`` for request ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Iterable, Optional

import networkx as nx

from .gf import GFMatrix, is_prime
from .strong import Service
from .verdict import Verdict

Edge = tuple[int, int]


@dataclass(frozen=True)
class BipartiteGraph:
    k: int
    b: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.k < 1 or self.b < 0:
            raise ValueError("need k >= 1 left and b >= 0 right vertices")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges (multigraphs are not supported)")
        for i, j in self.edges:
            if not (1 <= i <= self.k and 1 <= j <= self.b):
                raise ValueError(f"edge ({i}, {j}) outside [{self.k}] x [{self.b}]")

    @classmethod
    def of(cls, k: int, b: int, edges: Iterable[Edge]) -> "BipartiteGraph":
        return cls(k, b, tuple(sorted(set((int(i), int(j)) for i, j in edges))))

    @cached_property
    def point_nbrs(self) -> dict[int, frozenset]:
        out = {i: set() for i in range(1, self.k + 1)}
        for i, j in self.edges:
            out[i].add(j)
        return {i: frozenset(s) for i, s in out.items()}

    @cached_property
    def block_nbrs(self) -> dict[int, frozenset]:
        out = {j: set() for j in range(1, self.b + 1)}
        for i, j in self.edges:
            out[j].add(i)
        return {j: frozenset(s) for j, s in out.items()}

    def degree_point(self, i: int) -> int:
        return len(self.point_nbrs[i])

    def degree_block(self, j: int) -> int:
        return len(self.block_nbrs[j])

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.point_nbrs.get(i, ())

    def biadjacency(self) -> list[list[int]]:
        return [[int(self.has_edge(i, j)) for j in range(1, self.b + 1)] for i in range(1, self.k + 1)]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("P", i) for i in range(1, self.k + 1))
        g.add_nodes_from(("B", j) for j in range(1, self.b + 1))
        g.add_edges_from((("P", i), ("B", j)) for i, j in self.edges)
        return g

    def degenerate_blocks(self) -> list[int]:
        """Blocks of degree 1, whose recovery set is the lone parity column."""
        return [j for j in range(1, self.b + 1) if self.degree_block(j) == 1]


def _require_edge(g: BipartiteGraph, e: Edge) -> None:
    if not g.has_edge(*e):
        raise ValueError(f"({e[0]}, B{e[1]}) is not an edge")


def edge_recovery_set(g: BipartiteGraph, e: Edge) -> tuple[int, ...]:
    """Columns of ``R(i, B)``: the parity column of ``B`` and ``Γ(B) ∖ {i}``."""
    _require_edge(g, e)
    i, j = e
    return tuple(sorted({g.k + j} | (g.block_nbrs[j] - {i})))


def edge_service(g: BipartiteGraph, e: Edge) -> Service:
    return Service.of(e[0], edge_recovery_set(g, e))


def edge_services(g: BipartiteGraph) -> list[Service]:
    return [edge_service(g, e) for e in g.edges]


def edges_intersect(g: BipartiteGraph, e1: Edge, e2: Edge) -> bool:
    """Whether the recovery sets of two edges meet, decided on the graph alone."""
    _require_edge(g, e1)
    _require_edge(g, e2)
    (i, B), (i2, B2) = e1, e2
    if B == B2:
        return True
    # i'' in Γ(B) ∩ Γ(B') other than the two requests; for i = i' this closes a 4-cycle
    return bool((g.block_nbrs[B] & g.block_nbrs[B2]) - {i, i2})


def count_4cycles_through_edge(g: BipartiteGraph, e: Edge) -> int:
    """Distinct 4-cycles ``i - B - i'' - B' - i`` through the edge ``{i, B}``."""
    _require_edge(g, e)
    i, B = e
    return sum(
        len(g.point_nbrs[i] & g.point_nbrs[i2] - {B})
        for i2 in g.block_nbrs[B] - {i}
    )


def count_3paths_avoiding(g: BipartiteGraph, B: int, i2: int, i: int) -> int:
    """Distinct paths ``B - i'' - B' - i2`` with ``i''`` not in ``{i, i2}``."""
    if not g.has_edge(i, B):
        raise ValueError(f"({i}, B{B}) is not an edge")
    if i2 == i or g.has_edge(i2, B):
        raise ValueError(f"point {i2} must differ from {i} and lie off B{B}")
    return sum(
        len(g.point_nbrs[p] & g.point_nbrs[i2] - {B})
        for p in g.block_nbrs[B] - {i, i2}
    )


def check_graph_conditions(g: BipartiteGraph, m: int, L: int) -> Verdict:
    """Degree, 4-cycle and 3-path conditions for (m, L)-strong edge services."""
    params = {"m": m, "L": L}
    flags = {"degree1_blocks": g.degenerate_blocks()}
    for i in range(1, g.k + 1):
        if g.degree_point(i) < m:
            return Verdict("graph-conditions", False, params,
                           counterexample=("degree", i, g.degree_point(i)),
                           detail=f"point {i} has degree {g.degree_point(i)} < {m}")
    for e in g.edges:
        c = count_4cycles_through_edge(g, e)
        if c > L - 1:
            return Verdict("graph-conditions", False, params, counterexample=("4-cycles", e, c),
                           detail=f"edge {e} lies on {c} 4-cycles > {L - 1}")
    for (i, B) in g.edges:
        for i2 in range(1, g.k + 1):
            if g.has_edge(i2, B):
                continue
            c = count_3paths_avoiding(g, B, i2, i)
            if c > L:
                return Verdict("graph-conditions", False, params,
                               counterexample=("3-paths", (i, B), i2, c),
                               detail=f"{c} > {L} 3-paths from B{B} to {i2} avoiding {i}")
    return Verdict("graph-conditions", True, params, witness=flags)


def has_c4(g: BipartiteGraph) -> bool:
    return any(len(g.point_nbrs[a] & g.point_nbrs[c]) >= 2 for a, c in combinations(range(1, g.k + 1), 2))


def theta3_width(g: BipartiteGraph, B: int, i2: int, avoid: int) -> int:
    """Most internally disjoint 3-paths from ``B`` to ``i2`` missing ``avoid``.

    Each path ``B - p - B' - i2`` uses one middle point and one middle
    block; a set of internally disjoint paths is a matching between them.
    The width is the largest ``s`` with a theta graph θ(3, s) on B and i2.
    """
    h = nx.Graph()
    left = [("p", p) for p in g.block_nbrs[B] - {avoid, i2}]
    h.add_nodes_from(left)
    for p in g.block_nbrs[B] - {avoid, i2}:
        for B2 in g.point_nbrs[p] & g.point_nbrs[i2] - {B}:
            h.add_edge(("p", p), ("B", B2))
    match = nx.bipartite.hopcroft_karp_matching(h, top_nodes=left)
    return len(match) // 2


def check_c4free_conditions(g: BipartiteGraph, m: int, L: int) -> Verdict:
    """The C4-free form: degree >= m and no θ(3, L+1) through B avoiding the point."""
    if has_c4(g):
        raise ValueError("graph contains a 4-cycle")
    params = {"m": m, "L": L}
    for i in range(1, g.k + 1):
        if g.degree_point(i) < m:
            return Verdict("c4free-conditions", False, params,
                           counterexample=("degree", i, g.degree_point(i)),
                           detail=f"point {i} has degree {g.degree_point(i)} < {m}")
    for (i, B) in g.edges:
        for i2 in range(1, g.k + 1):
            if i2 == i or g.has_edge(i2, B):
                continue
            w = theta3_width(g, B, i2, i)
            if w >= L + 1:
                return Verdict("c4free-conditions", False, params,
                               counterexample=("theta", (i, B), i2, w),
                               detail=f"theta(3,{w}) between B{B} and {i2} avoiding {i}")
    return Verdict("c4free-conditions", True, params)


def girth(g: BipartiteGraph) -> float:
    """Shortest cycle length, ``inf`` for forests."""
    return nx.girth(g.to_networkx())


def generate_pg_incidence(q: int) -> BipartiteGraph:
    """Point-line incidence graph of PG(2, q): q^2+q+1 points and lines.

    Points and lines are the normalised nonzero vectors of GF(q)^3 (first
    nonzero entry 1) in lexicographic order; incidence is a zero dot product.
    """
    if not is_prime(q) or q > 7:
        raise ValueError(f"q must be a prime <= 7, got {q}")
    vs = [v for v in product(range(q), repeat=3) if any(v) and next(x for x in v if x) == 1]
    edges = [
        (a + 1, c + 1)
        for a, p in enumerate(vs)
        for c, l in enumerate(vs)
        if sum(x * y for x, y in zip(p, l)) % q == 0
    ]
    return BipartiteGraph.of(len(vs), len(vs), edges)


def generate_gq22_incidence() -> BipartiteGraph:
    """Incidence graph of GQ(2,2) (the Tutte–Coxeter graph).

    Points are the 15 duads of {1..6}; lines are the 15 synthemes (three
    disjoint duads covering {1..6}); a duad lies on the synthemes containing it.
    """
    duads = list(combinations(range(1, 7), 2))
    synthemes = sorted(
        tuple(sorted(s))
        for s in combinations(duads, 3)
        if len(set().union(*s)) == 6
    )
    edges = [
        (a + 1, c + 1) for a, d in enumerate(duads) for c, s in enumerate(synthemes) if d in s
    ]
    return BipartiteGraph.of(len(duads), len(synthemes), edges)


@dataclass
class GraphCodePair:
    graph: BipartiteGraph
    code: GFMatrix
    services: list[Service] = field(default_factory=list)


def build_graph_code(g: BipartiteGraph) -> GraphCodePair:
    code = GFMatrix.systematic(g.biadjacency(), 2)
    return GraphCodePair(g, code, sorted(edge_services(g)))


def canonical_form(g: BipartiteGraph) -> tuple:
    """Isomorphism-invariant key (sides fixed) by brute force over permutations.

    Only meant for the tiny graphs of exhaustive sweeps.
    """
    best = None
    rows = g.biadjacency()
    for pp in permutations(range(g.k)):
        permuted = [rows[a] for a in pp]
        cols = sorted(tuple(r[c] for r in permuted) for c in range(g.b))
        key = tuple(cols)
        if best is None or key < best:
            best = key
    return (g.k, g.b, best)


def all_bipartite_graphs(k: int, b: int) -> Iterable[BipartiteGraph]:
    """Every graph on fixed sides ``[k]`` and ``[b]``, up to isomorphism."""
    slots = list(product(range(1, k + 1), range(1, b + 1)))
    seen = set()
    for bits in range(1 << len(slots)):
        g = BipartiteGraph.of(k, b, [slots[s] for s in range(len(slots)) if bits >> s & 1])
        key = canonical_form(g)
        if key not in seen:
            seen.add(key)
            yield g


__all__ = [
    "BipartiteGraph",
    "GraphCodePair",
    "edge_recovery_set",
    "edge_service",
    "edge_services",
    "edges_intersect",
    "count_4cycles_through_edge",
    "count_3paths_avoiding",
    "check_graph_conditions",
    "check_c4free_conditions",
    "theta3_width",
    "has_c4",
    "girth",
    "generate_pg_incidence",
    "generate_gq22_incidence",
    "build_graph_code",
    "canonical_form",
    "all_bipartite_graphs",
]
