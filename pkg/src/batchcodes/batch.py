"""Exact t-batch verification.

A batch is a multiset of positions.  :func:`serve_batch` finds pairwise
disjoint minimal recovery sets for the items of one batch by backtracking;
:func:`check_batch` runs it over every multiset of size exactly ``t``.  Every
smaller batch can be padded with repeats up to size ``t``, so a code that
serves all size-``t`` batches serves all smaller ones too.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Optional, Sequence

from .gf import GFMatrix
from .recovery import RecoveryIndex, RecoverySet, is_recovery_set, set_order
from .verdict import Verdict


@dataclass(frozen=True)
class Assignment:
    """One recovery set per batch item, in the order the batch was given."""

    pairs: tuple[tuple[int, RecoverySet], ...]

    def sets(self) -> list[tuple[int, ...]]:
        return [rs.columns for _, rs in self.pairs]

    def is_valid(self, G: GFMatrix) -> bool:
        """Independent re-check: disjointness plus per-item recovery."""
        used: set[int] = set()
        for pos, rs in self.pairs:
            if rs.request != pos or used & set(rs.columns):
                return False
            if not is_recovery_set(G, pos, rs.columns):
                return False
            used |= set(rs.columns)
        return True


def _item_order(index: RecoveryIndex, counts: Counter) -> list[int]:
    # most constrained first: fewest small recovery sets, then highest demand
    def key(i: int):
        return (len(index.minimal_masks(i, max_size=2)), -counts[i], i)

    return sorted(counts, key=key)


def _serve_masks(index: RecoveryIndex, batch: Sequence[int]) -> Optional[dict[int, list[int]]]:
    counts = Counter(batch)
    order = [i for i in _item_order(index, counts) for _ in range(counts[i])]
    # rest[p]: distinct requests still to serve from position p on
    rest = [frozenset(order[p:]) for p in range(len(order) + 1)]
    chosen: list[int] = []

    def rec(pos: int, used: int, floor: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        same = pos > 0 and order[pos - 1] == i
        # copies of one request take sets in enumeration order (size, then columns)
        low = set_order(floor) if same else None
        for m in index.available(i, used):
            if same and set_order(m) <= low:
                continue
            reach = index.reachable(used | m)
            if any(not reach >> (j - 1) & 1 for j in rest[pos + 1]):
                continue
            chosen.append(m)
            if rec(pos + 1, used | m, m):
                return True
            chosen.pop()
        return False

    if not rec(0, 0, 0):
        return None
    by_request: dict[int, list[int]] = {}
    for i, m in zip(order, chosen):
        by_request.setdefault(i, []).append(m)
    return by_request


def serve_batch(
    G: GFMatrix, batch: Iterable[int], index: Optional[RecoveryIndex] = None
) -> Optional[Assignment]:
    """Pairwise disjoint recovery sets for ``batch``, or ``None`` if impossible."""
    batch = list(batch)
    if not batch:
        raise ValueError("batch must be nonempty")
    for i in batch:
        if not 1 <= i <= G.k:
            raise IndexError(f"request {i} outside [1, {G.k}]")
    index = index or RecoveryIndex(G)
    found = _serve_masks(index, batch)
    if found is None:
        return None
    pending = {i: iter(ms) for i, ms in found.items()}
    return Assignment(tuple((i, index.recovery_set(i, next(pending[i]))) for i in batch))


def batches(k: int, t: int) -> Iterable[tuple[int, ...]]:
    """All multisets of size ``t`` over ``[k]`` as non-decreasing tuples."""
    return combinations_with_replacement(range(1, k + 1), t)


def _first_failure(G: GFMatrix, chunk: list[tuple[int, ...]]) -> Optional[tuple[int, ...]]:
    index = RecoveryIndex(G)
    for b in chunk:
        if _serve_masks(index, b) is None:
            return b
    return None


def default_jobs() -> int:
    return max(1, int(os.environ.get("BATCHCODES_JOBS", "1")))


def check_batch(
    G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None, jobs: Optional[int] = None
) -> Verdict:
    """Decide whether ``G`` serves every batch of size ``t``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    params = {"t": t}
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1:
        index = index or RecoveryIndex(G)
        checked = 0
        for b in batches(G.k, t):
            checked += 1
            if _serve_masks(index, b) is None:
                return Verdict("batch", False, params, counterexample=b,
                               detail=f"batch {b} cannot be served")
        return Verdict("batch", True, params, witness={"batches_checked": checked})

    todo = list(batches(G.k, t))
    size = max(1, len(todo) // (4 * jobs))
    chunks = [todo[s:s + size] for s in range(0, len(todo), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_first_failure, [G] * len(chunks), chunks))
    failures = [b for b in results if b is not None]
    if failures:
        b = min(failures)
        return Verdict("batch", False, params, counterexample=b,
                       detail=f"batch {b} cannot be served")
    return Verdict("batch", True, params, witness={"batches_checked": len(todo)})


def max_batch_t(G: GFMatrix, limit: Optional[int] = None, index: Optional[RecoveryIndex] = None) -> int:
    """Largest ``t`` for which ``G`` is a t-batch code (0 if not even 1-batch).

    Batch-serving is monotone in ``t``, so the first failure ends the scan.
    ``t`` can never exceed ``n`` since recovery sets are nonempty and disjoint.
    """
    index = index or RecoveryIndex(G)
    limit = G.n if limit is None else min(limit, G.n)
    best = 0
    for t in range(1, limit + 1):
        if not check_batch(G, t, index, jobs=1):
            break
        best = t
    return best


def describe_assignment(a: Assignment) -> str:
    return ", ".join("{" + ",".join(map(str, rs.columns)) + "}" for _, rs in a.pairs)

