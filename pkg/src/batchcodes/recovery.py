"""Recovery sets of a generator matrix.

A set ``R`` of columns is a recovery set for position ``i`` when ``e_i`` lies in
the span of the columns in ``R``; it is minimal when no proper subset is.  A
set is a minimal recovery set exactly when its columns are linearly
independent and the (then unique) representation of ``e_i`` uses every column
with a nonzero coefficient.  :class:`RecoveryIndex` uses that characterisation
to enumerate minimal sets level by level (by size), so callers that only need
small sets never pay for the large levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .gf import (
    GFMatrix,
    columns_of,
    gf2_independent,
    gf2_insert,
    mask_of,
    rank,
    rank_of_rows,
    solve_in_span,
    span_contains,
    unit_vector,
)


@dataclass(frozen=True)
class RecoverySet:
    """A recovery set for ``request`` with its combining coefficients.

    ``columns`` is a sorted tuple of distinct 1-based column indices;
    ``coefficients[r]`` is the multiplier of column ``columns[r]``.
    """

    request: int
    columns: tuple[int, ...]
    coefficients: tuple[int, ...] = field(default=(), compare=False)

    @property
    def mask(self) -> int:
        return mask_of(self.columns)

    @property
    def key(self) -> tuple:
        return (self.request, self.columns)

    def __len__(self) -> int:
        return len(self.columns)

    def __str__(self) -> str:
        return f"{self.request}: " + ",".join(map(str, self.columns))


def set_order(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key for column masks: by size, then lexicographically."""
    cols = columns_of(mask)
    return (len(cols), cols)


def _check_position(G: GFMatrix, i: int) -> None:
    if not 1 <= i <= G.k:
        raise IndexError(f"request {i} outside [1, {G.k}]")


def _check_columns(G: GFMatrix, R: Iterable[int]) -> tuple[int, ...]:
    cols = tuple(sorted(set(R)))
    for j in cols:
        if not 1 <= j <= G.n:
            raise IndexError(f"column {j} outside [1, {G.n}]")
    return cols


def is_recovery_set(G: GFMatrix, i: int, R: Iterable[int]) -> bool:
    """True iff ``e_i`` is in the span of the columns ``R``."""
    _check_position(G, i)
    cols = _check_columns(G, R)
    return span_contains([G.column(j) for j in cols], unit_vector(i, G.k), G.q)


def is_minimal(G: GFMatrix, i: int, R: Iterable[int]) -> bool:
    """True iff no proper subset of the recovery set ``R`` recovers ``i``.

    Raises ``ValueError`` when ``R`` is not a recovery set.  Recovery is
    monotone under taking supersets, so only the maximal proper subsets
    need checking.
    """
    cols = _check_columns(G, R)
    if not is_recovery_set(G, i, cols):
        raise ValueError(f"{set(cols)} is not a recovery set for {i}")
    return not any(
        is_recovery_set(G, i, cols[:r] + cols[r + 1:]) for r in range(len(cols))
    )


def recovery_coefficients(G: GFMatrix, i: int, R: Iterable[int]) -> Optional[tuple[int, ...]]:
    cols = _check_columns(G, R)
    lam = solve_in_span([G.column(j) for j in cols], unit_vector(i, G.k), G.q)
    return None if lam is None else tuple(lam)


class RecoveryIndex:
    """Cache of the minimal recovery sets of one matrix, computed by size.

    ``level(s)`` holds, for each request, the minimal recovery sets with
    exactly ``s`` columns, as bitmasks in lexicographic order.  Minimal sets
    are independent, so sizes never exceed ``rank(G)``.
    """

    def __init__(self, G: GFMatrix):
        self.G = G
        self.k, self.n = G.shape
        self.rank = rank(G)
        self._cols = G.columns()
        self._bits = G.column_bits() if G.q == 2 else None
        self._levels: dict[int, list[list[int]]] = {}
        self._sets: dict[tuple[int, int], frozenset] = {}
        self._reach: dict[int, int] = {}

    def _compute_level(self, s: int) -> list[list[int]]:
        found: list[list[int]] = [[] for _ in range(self.k)]
        nonzero = [j for j, c in enumerate(self._cols) if any(c)]
        if self._bits is not None:
            bits = self._bits
            for combo in combinations(nonzero, s):
                x = 0
                for j in combo:
                    x ^= bits[j]
                # a unit vector sum plus independence is exactly minimality over GF(2)
                if x and x & (x - 1) == 0 and gf2_independent(bits[j] for j in combo):
                    found[x.bit_length() - 1].append(sum(1 << j for j in combo))
        else:
            q = self.G.q
            for combo in combinations(nonzero, s):
                vecs = [self._cols[j] for j in combo]
                if rank_of_rows(vecs, q) < s:
                    continue
                for i in range(self.k):
                    lam = solve_in_span(vecs, unit_vector(i + 1, self.k), q)
                    if lam is not None and all(lam):
                        found[i].append(sum(1 << j for j in combo))
        return found

    def level(self, s: int) -> list[list[int]]:
        if s not in self._levels:
            self._levels[s] = self._compute_level(s) if 1 <= s <= self.rank else [
                [] for _ in range(self.k)
            ]
        return self._levels[s]

    def minimal_masks(self, i: int, max_size: Optional[int] = None) -> list[int]:
        """All minimal recovery sets for ``i`` (1-based), smallest first."""
        _check_position(self.G, i)
        top = self.rank if max_size is None else min(max_size, self.rank)
        return [m for s in range(1, top + 1) for m in self.level(s)[i - 1]]

    def all_masks(self) -> list[int]:
        """Every column set that is minimal for at least one request."""
        seen = set()
        for i in range(1, self.k + 1):
            seen.update(self.minimal_masks(i))
        return sorted(seen, key=set_order)

    def reachable(self, used: int) -> int:
        """Bitset of requests (bit ``i-1``) whose unit vector the free columns span."""
        hit = self._reach.get(used)
        if hit is None:
            free = [j for j in range(self.n) if not used >> j & 1]
            hit = 0
            if self._bits is not None:
                basis: dict[int, int] = {}
                for j in free:
                    gf2_insert(basis, self._bits[j])
                for r in range(self.k):
                    if not gf2_insert(dict(basis), 1 << r):
                        hit |= 1 << r
            else:
                cols = [self._cols[j] for j in free]
                for r in range(self.k):
                    if span_contains(cols, unit_vector(r + 1, self.k), self.G.q):
                        hit |= 1 << r
            self._reach[used] = hit
        return hit

    def recoverable(self, i: int, used: int) -> bool:
        return bool(self.reachable(used) >> (i - 1) & 1)

    def available(self, i: int, used: int) -> Iterator[int]:
        """Minimal recovery sets for ``i`` disjoint from ``used``, smallest first."""
        if not self.recoverable(i, used):
            return
        free = self.n - bin(used).count("1")
        for s in range(1, min(self.rank, free) + 1):
            for m in self.level(s)[i - 1]:
                if not m & used:
                    yield m

    def serves(self, mask: int, i: int) -> bool:
        """True iff ``mask`` is a minimal recovery set for ``i``."""
        s = bin(mask).count("1")
        if not 1 <= s <= self.rank or mask >> self.n:
            return False
        if s in self._levels:
            return mask in self._level_set(s, i)
        # direct test, so membership never forces a large level to be enumerated
        idx = [j for j in range(self.n) if mask >> j & 1]
        if self._bits is not None:
            x = 0
            for j in idx:
                x ^= self._bits[j]
            return x == 1 << (i - 1) and gf2_independent(self._bits[j] for j in idx)
        vecs = [self._cols[j] for j in idx]
        if rank_of_rows(vecs, self.G.q) < s:
            return False
        lam = solve_in_span(vecs, unit_vector(i, self.k), self.G.q)
        return lam is not None and all(lam)

    def _level_set(self, s: int, i: int) -> frozenset:
        if (s, i) not in self._sets:
            self._sets[s, i] = frozenset(self.level(s)[i - 1])
        return self._sets[s, i]

    def requests_served(self, mask: int) -> list[int]:
        return [i for i in range(1, self.k + 1) if self.serves(mask, i)]

    def recovery_set(self, i: int, mask: int) -> RecoverySet:
        cols = columns_of(mask)
        lam = recovery_coefficients(self.G, i, cols)
        if lam is None:
            raise ValueError(f"{set(cols)} is not a recovery set for {i}")
        return RecoverySet(i, cols, lam)


def enumerate_minimal(G: GFMatrix, i: int, index: Optional[RecoveryIndex] = None) -> list[RecoverySet]:
    """Complete, duplicate-free list of minimal recovery sets for ``i``."""
    index = index or RecoveryIndex(G)
    return [index.recovery_set(i, m) for m in index.minimal_masks(i)]


def is_simple(G: GFMatrix, rs: RecoverySet | Iterable[int]) -> bool:
    """True iff the set holds exactly one parity column of ``G = [I | M]``."""
    if not G.is_systematic():
        raise ValueError("simple recovery sets are defined for systematic matrices")
    cols = rs.columns if isinstance(rs, RecoverySet) else tuple(rs)
    return sum(1 for j in cols if j > G.k) == 1


def format_recovery_sets(sets: Iterable[RecoverySet]) -> str:
    return "".join(f"{rs}\n" for rs in sets)
