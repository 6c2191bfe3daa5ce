"""Linear algebra over small prime fields GF(q).

Field elements are plain ints in ``range(q)``.  Matrices are immutable
:class:`GFMatrix` values.  Column and row indices in the public helpers are
1-based, as in ``[n] = {1, ..., n}``; the internal bitmask helpers for GF(2)
use bit ``j - 1`` for column ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def check_modulus(q: int) -> int:
    if not isinstance(q, int) or not is_prime(q):
        raise ValueError(f"modulus must be a prime, got {q!r}")
    return q


def inv(a: int, q: int) -> int:
    a %= q
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(a, q - 2, q)


@dataclass(frozen=True)
class GFMatrix:
    """A k x n matrix over GF(q), stored row-major."""

    q: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        check_modulus(self.q)
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(self.rows[0])
        for row in self.rows:
            if len(row) != width:
                raise ValueError("ragged matrix rows")
            for x in row:
                if not 0 <= x < self.q:
                    raise ValueError(f"entry {x} out of range for GF({self.q})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], q: int = 2) -> "GFMatrix":
        check_modulus(q)
        return cls(q, tuple(tuple(int(x) % q for x in row) for row in rows))

    @classmethod
    def from_strings(cls, rows: Iterable[str], q: int = 2) -> "GFMatrix":
        """Build from digit strings such as ``"1010101"`` (q <= 10)."""
        return cls.from_rows(([int(c) for c in r if not c.isspace()] for r in rows), q)

    @classmethod
    def identity(cls, k: int, q: int = 2) -> "GFMatrix":
        return cls.from_rows(([int(r == c) for c in range(k)] for r in range(k)), q)

    @classmethod
    def systematic(cls, parity: Sequence[Sequence[int]], q: int = 2) -> "GFMatrix":
        """The matrix ``[I | M]`` for the k x (n-k) parity block ``M``."""
        k = len(parity)
        return cls.from_rows(
            [[int(r == c) for c in range(k)] + list(parity[r]) for r in range(k)], q
        )

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.k, self.n

    def column(self, j: int) -> tuple[int, ...]:
        """Column ``j`` (1-based)."""
        if not 1 <= j <= self.n:
            raise IndexError(f"column {j} outside [1, {self.n}]")
        return tuple(row[j - 1] for row in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(col) for col in zip(*self.rows)]

    def column_bits(self) -> list[int]:
        """GF(2) columns as ints, bit ``r`` set when row ``r + 1`` is 1."""
        if self.q != 2:
            raise ValueError("column_bits is only defined over GF(2)")
        return [sum(1 << r for r, x in enumerate(col) if x) for col in self.columns()]

    def is_systematic(self) -> bool:
        k = self.k
        if self.n < k:
            return False
        return all(self.rows[r][c] == int(r == c) for r in range(k) for c in range(k))

    def parity_block(self) -> tuple[tuple[int, ...], ...]:
        return tuple(row[self.k:] for row in self.rows)


def unit_vector(i: int, k: int) -> tuple[int, ...]:
    """e_i in GF(q)^k, 1-based."""
    if not 1 <= i <= k:
        raise IndexError(f"position {i} outside [1, {k}]")
    return tuple(int(r == i - 1) for r in range(k))


def _reduce_rows(rows: list[list[int]], q: int, ncols: int) -> list[int]:
    """In-place reduced row echelon form; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] % q), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        s = inv(rows[r][c], q)
        rows[r] = [(x * s) % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank_of_rows(rows: Sequence[Sequence[int]], q: int) -> int:
    if not rows:
        return 0
    work = [[x % q for x in row] for row in rows]
    return len(_reduce_rows(work, q, len(work[0])))


def rank(M: GFMatrix) -> int:
    """Rank of ``M`` over GF(q) by Gauss-Jordan elimination."""
    return rank_of_rows(M.rows, M.q)


def _check_vectors(columns: Sequence[Sequence[int]], target: Sequence[int]) -> int:
    length = len(target)
    for col in columns:
        if len(col) != length:
            raise ValueError(
                f"dimension mismatch: column of length {len(col)} vs target {length}"
            )
    return length


def solve_in_span(
    columns: Sequence[Sequence[int]], target: Sequence[int], q: int = 2
) -> Optional[tuple[int, ...]]:
    """Coefficients ``lam`` with ``sum(lam[r] * columns[r]) == target``.

    Returns ``None`` when the target lies outside the span.  Free variables
    are set to zero, so the returned solution is the one supported on the
    pivot columns.
    """
    check_modulus(q)
    length = _check_vectors(columns, target)
    s = len(columns)
    if s == 0:
        return () if all(x % q == 0 for x in target) else None
    # augmented system A lam = target, A has the columns as its columns
    aug = [[columns[c][r] % q for c in range(s)] + [target[r] % q] for r in range(length)]
    pivots = _reduce_rows(aug, q, s + 1)
    if s in pivots:
        return None
    lam = [0] * s
    for row, c in enumerate(pivots):
        lam[c] = aug[row][s]
    return tuple(lam)


def span_contains(
    columns: Sequence[Sequence[int]], target: Sequence[int], q: int = 2
) -> bool:
    return solve_in_span(columns, target, q) is not None


def combine(columns: Sequence[Sequence[int]], coeffs: Sequence[int], q: int) -> tuple[int, ...]:
    """``sum(coeffs[r] * columns[r])`` mod q."""
    if not columns:
        raise ValueError("need at least one column")
    out = [0] * len(columns[0])
    for col, lam in zip(columns, coeffs):
        for r, x in enumerate(col):
            out[r] = (out[r] + lam * x) % q
    return tuple(out)


# GF(2) bitmask helpers -------------------------------------------------------


def gf2_insert(basis: dict[int, int], v: int) -> bool:
    """Insert ``v`` into an xor basis keyed by leading bit; False if dependent."""
    while v:
        top = v.bit_length() - 1
        b = basis.get(top)
        if b is None:
            basis[top] = v
            return True
        v ^= b
    return False


def gf2_independent(vectors: Iterable[int]) -> bool:
    basis: dict[int, int] = {}
    return all(gf2_insert(basis, v) for v in vectors)


def gf2_rank(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    return sum(gf2_insert(basis, v) for v in vectors)


def mask_of(columns: Iterable[int]) -> int:
    """Bitmask for a set of 1-based column indices."""
    m = 0
    for j in columns:
        if j < 1:
            raise IndexError(f"column index {j} must be >= 1")
        m |= 1 << (j - 1)
    return m


def columns_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based column indices of a bitmask."""
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)
