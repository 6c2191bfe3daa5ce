"""Where a small code sits in the batch / online / asynchronous / strong hierarchy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .batch import max_batch_t
from .gf import GFMatrix
from .histories import MAX_HORIZON, max_async_t, max_online_t
from .recovery import RecoveryIndex
from .strong import max_strong_t, search_best_mL

SCAN_MAX_K = 4
SCAN_MAX_N = 10

ROWS = ("batch", "online", "asynchronous", "strong", "mL-strong")


@dataclass
class HierarchyScan:
    values: dict[str, int]
    mL: tuple[int, int]
    limit: int

    def rows(self) -> list[tuple[str, int]]:
        return [(name, self.values[name]) for name in ROWS]

    def is_monotone(self) -> bool:
        vals = [v for _, v in self.rows()]
        return all(a >= b for a, b in zip(vals, vals[1:]))


def hierarchy_scan(G: GFMatrix, index: Optional[RecoveryIndex] = None) -> HierarchyScan:
    """Largest t for each property (best ceil(m/L) for the last row).

    Every row below ``batch`` is searched one step past the batch value, so
    a violation of the hierarchy would show up rather than be capped away.
    """
    if G.k > SCAN_MAX_K or G.n > SCAN_MAX_N:
        raise ValueError(f"hierarchy scan limited to k <= {SCAN_MAX_K}, n <= {SCAN_MAX_N}; got {G.shape}")
    index = index or RecoveryIndex(G)
    b = max_batch_t(G, None, index)
    limit = b + 1
    search = search_best_mL(G, index, SCAN_MAX_K, SCAN_MAX_N)
    values = {
        "batch": b,
        "online": max_online_t(G, limit, index),
        "asynchronous": max_async_t(G, min(limit, MAX_HORIZON), index),
        "strong": max_strong_t(G, limit, index)[0],
        "mL-strong": search.t,
    }
    return HierarchyScan(values, (search.m, search.L), limit)
