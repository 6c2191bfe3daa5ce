"""L-AAD and L-AAD* subspace families and their coset batch codes.

Vectors of ``V = GF(q)^n`` are tuples; ``V`` is always listed in
lexicographic order, which also fixes the row order of the coset code.
Cosets are identified by their lexicographically smallest element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Optional, Sequence

from .gf import GFMatrix, check_modulus, rank_of_rows
from .strong import Service
from .verdict import Verdict

Vector = tuple[int, ...]

VERIFY_LIMIT = 256
BUILD_LIMIT = 64


@dataclass(frozen=True)
class Subspace:
    q: int
    n: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        check_modulus(self.q)
        if not self.basis:
            raise ValueError("subspace needs dimension >= 1")
        for v in self.basis:
            if len(v) != self.n or any(not 0 <= x < self.q for x in v):
                raise ValueError(f"basis vector {v} not in GF({self.q})^{self.n}")
        if rank_of_rows(self.basis, self.q) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @classmethod
    def span(cls, q: int, *basis: Sequence[int]) -> "Subspace":
        return cls(q, len(basis[0]), tuple(tuple(x % q for x in v) for v in basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def elements(self) -> frozenset:
        out = set()
        for coeffs in product(range(self.q), repeat=self.dim):
            v = [0] * self.n
            for c, b in zip(coeffs, self.basis):
                for r in range(self.n):
                    v[r] = (v[r] + c * b[r]) % self.q
            out.add(tuple(v))
        return frozenset(out)

    def coset(self, v: Vector) -> frozenset:
        return frozenset(tuple((a + b) % self.q for a, b in zip(v, u)) for u in self.elements)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.elements


@dataclass(frozen=True)
class SubspaceFamily:
    members: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("family must be nonempty")
        q, n = self.members[0].q, self.members[0].n
        if any(U.q != q or U.n != n for U in self.members):
            raise ValueError("members must share the ambient space")

    @property
    def q(self) -> int:
        return self.members[0].q

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def m(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def vectors(self) -> list[Vector]:
        return list(product(range(self.q), repeat=self.n))

    def cosets(self, j: int) -> list[frozenset]:
        """Distinct cosets of member ``j`` (0-based), ordered by representative."""
        U = self.members[j]
        seen = {}
        for v in self.vectors():
            C = U.coset(v)
            seen.setdefault(min(C), C)
        return [seen[r] for r in sorted(seen)]


def lines_family(q: int, n: int) -> SubspaceFamily:
    """All one-dimensional subspaces of GF(q)^n (first nonzero entry 1)."""
    vs = [v for v in product(range(q), repeat=n) if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    return SubspaceFamily(tuple(Subspace(q, n, (v,)) for v in vs))


def _guard(family: SubspaceFamily, limit: int) -> None:
    if family.q ** family.n > limit:
        raise ValueError(f"|V| = {family.q ** family.n} exceeds the limit {limit}")


def check_pairwise_skew(family: SubspaceFamily) -> bool:
    """All pairwise intersections trivial, via rank of concatenated bases."""
    U = family.members
    for a in range(len(U)):
        for b in range(a + 1, len(U)):
            if rank_of_rows(U[a].basis + U[b].basis, family.q) != U[a].dim + U[b].dim:
                return False
    return True


def _coset_hits(family: SubspaceFamily, L: int) -> Optional[tuple]:
    """First (member, coset rep, hit count) whose coset meets more than L members."""
    for j, U in enumerate(family.members):
        for C in family.cosets(j):
            if U.elements == C:
                continue  # the subspace itself, v in U_j
            hits = sum(1 for W in family.members if C & W.elements)
            if hits > L:
                return (j + 1, min(C), hits)
    return None


def check_aad(family: SubspaceFamily, L: int) -> Verdict:
    """L-AAD: equal dimension k, n >= 2k+1, pairwise skew, cosets meet <= L members."""
    _guard(family, VERIFY_LIMIT)
    dims = {U.dim for U in family.members}
    if len(dims) != 1:
        raise ValueError(f"L-AAD needs members of equal dimension, got {sorted(dims)}")
    k = dims.pop()
    params = {"L": L, "m": family.m}
    if family.n < 2 * k + 1:
        return Verdict("L-AAD", False, params, counterexample=("n < 2k+1", family.n, k))
    if not check_pairwise_skew(family):
        return Verdict("L-AAD", False, params, counterexample=("not pairwise skew",))
    bad = _coset_hits(family, L)
    if bad:
        return Verdict("L-AAD", False, params, counterexample=("coset meets too many", *bad),
                       detail=f"coset {bad[1]} + U_{bad[0]} meets {bad[2]} members")
    return Verdict("L-AAD", True, params)


def _overlaps(family: SubspaceFamily) -> list[int]:
    """For each member, how many *other* members it meets nontrivially."""
    zero = (0,) * family.n
    U = family.members
    return [
        sum(1 for b in range(len(U)) if b != a and (U[a].elements & U[b].elements) - {zero})
        for a in range(len(U))
    ]


def check_aad_star(family: SubspaceFamily, L: int) -> Verdict:
    """L-AAD*: each member meets <= L-1 others; each nontrivial coset meets <= L."""
    _guard(family, VERIFY_LIMIT)
    params = {"L": L, "m": family.m}
    over = _overlaps(family)
    for a, c in enumerate(over):
        if c > L - 1:
            return Verdict("L-AAD*", False, params, counterexample=("member meets too many", a + 1, c),
                           detail=f"U_{a + 1} meets {c} other members")
    bad = _coset_hits(family, L)
    if bad:
        return Verdict("L-AAD*", False, params, counterexample=("coset meets too many", *bad),
                       detail=f"coset {bad[1]} + U_{bad[0]} meets {bad[2]} members")
    return Verdict("L-AAD*", True, params)


def min_L_star(family: SubspaceFamily) -> int:
    """Smallest L >= 1 for which the family is L-AAD* (L = m always works)."""
    for L in range(1, family.m + 1):
        if check_aad_star(family, L):
            return L
    raise AssertionError("unreachable: every family is m-AAD*")


@dataclass
class CosetCode:
    """Binary systematic code ``[I | M]`` whose parity columns are coset indicators."""

    family: SubspaceFamily
    L: int
    matrix: GFMatrix
    vectors: list[Vector]
    cosets: list[tuple[int, Vector, frozenset]]  # (member 1-based, representative, elements)
    services: list[Service]

    @property
    def k(self) -> int:
        return len(self.vectors)

    @property
    def N(self) -> int:
        return len(self.cosets)

    @property
    def n_total(self) -> int:
        return self.k + self.N

    @property
    def t(self) -> int:
        return -(-self.family.m // self.L)


def build_coset_code(family: SubspaceFamily) -> CosetCode:
    _guard(family, BUILD_LIMIT)
    L = min_L_star(family)
    vectors = family.vectors()
    row = {v: r for r, v in enumerate(vectors)}
    cosets = []
    for j in range(family.m):
        for C in family.cosets(j):
            cosets.append((j + 1, min(C), C))
    k = len(vectors)
    parity = [[0] * len(cosets) for _ in range(k)]
    for c, (_, _, C) in enumerate(cosets):
        for v in C:
            parity[row[v]][c] = 1
    G = GFMatrix.systematic(parity, 2)
    services = []
    for c, (_, _, C) in enumerate(cosets):
        for v in C:
            cols = {k + c + 1} | {row[w] + 1 for w in C if w != v}
            services.append(Service.of(row[v] + 1, cols))
    return CosetCode(family, L, G, vectors, cosets, sorted(services))
