"""Strongly asynchronous collections and (m, L)-strong service collections.

A collection ``R`` of recovery sets is strongly t-asynchronous when any
fewer than ``t`` pairwise disjoint members of ``R`` leave, for every request,
some member of ``R`` that recovers it and avoids them all.  A service is a
pair ``(request, recovery set)``; one service excludes another when their
sets meet.  A service collection is (m, L)-strong when every request has at
least ``m`` services and every service excludes at most ``L`` services of any
single request, itself included.  Such a collection is strongly
ceil(m/L)-asynchronous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .gf import GFMatrix, columns_of, mask_of
from .recovery import RecoveryIndex, set_order
from .verdict import Verdict


@dataclass(frozen=True, order=True)
class Service:
    request: int
    columns: tuple[int, ...]

    @classmethod
    def of(cls, request: int, columns: Iterable[int]) -> "Service":
        return cls(request, tuple(sorted(set(columns))))

    @property
    def mask(self) -> int:
        return mask_of(self.columns)

    def excludes(self, other: "Service") -> bool:
        return bool(self.mask & other.mask)

    def __str__(self) -> str:
        return f"{self.request}: " + ",".join(map(str, self.columns))


def derive_t(m: int, L: int) -> int:
    """ceil(m / L)."""
    if m < 1 or L < 1:
        raise ValueError("m and L must be positive")
    return -(-m // L)


def _masks_of(R: Iterable) -> list[int]:
    out = set()
    for r in R:
        if isinstance(r, Service):
            out.add(r.mask)
        elif isinstance(r, int):
            out.add(r)
        else:
            out.add(mask_of(r))
    return sorted(out, key=set_order)


def check_strongly_async(
    G: GFMatrix, R: Iterable, t: int, index: Optional[RecoveryIndex] = None
) -> Verdict:
    """Decide whether ``(G, R)`` is strongly t-asynchronous.

    ``R`` may hold services, column sets or masks.  A member serves every
    request for which it is a minimal recovery set.  Families are scanned by
    size, so the reported counterexample is a smallest blocking family.
    """
    index = index or RecoveryIndex(G)
    masks = _masks_of(R)
    for m in masks:
        if not index.requests_served(m):
            raise ValueError(f"{columns_of(m)} is not a minimal recovery set")
    cand = {i: [m for m in masks if index.serves(m, i)] for i in range(1, G.k + 1)}
    params = {"t": t, "size": len(masks)}
    seen: set[int] = set()

    def blocked(union: int) -> Optional[int]:
        for i in range(1, G.k + 1):
            if not any(not m & union for m in cand[i]):
                return i
        return None

    def families(size: int, start: int, used: int, acc: list):
        if len(acc) == size:
            yield acc, used
            return
        for p in range(start, len(masks)):
            if not masks[p] & used:
                acc.append(masks[p])
                yield from families(size, p + 1, used | masks[p], acc)
                acc.pop()

    for size in range(t):
        for fam, union in families(size, 0, 0, []):
            if union in seen:
                continue
            seen.add(union)
            i = blocked(union)
            if i is not None:
                fam_cols = [columns_of(m) for m in fam]
                return Verdict("strongly-asynchronous", False, params,
                               counterexample=(fam_cols, i),
                               detail=f"sets {fam_cols} leave request {i} unservable")
    return Verdict("strongly-asynchronous", True, params, witness=[columns_of(m) for m in masks])


def strong_histories(masks: Sequence[int], t: int, ordered: bool) -> set:
    """All sequences (or sets) of at most ``t`` pairwise disjoint members."""
    out: set = set()

    def rec(acc: list, used: int) -> None:
        out.add(tuple(acc) if ordered else frozenset(acc))
        if len(acc) == t:
            return
        for m in masks:
            if not m & used and (ordered or not acc or m > acc[-1]):
                acc.append(m)
                rec(acc, used | m)
                acc.pop()

    rec([], 0)
    return out


def strong_equivalence_selftest(
    G: GFMatrix, R: Iterable, t: int, index: Optional[RecoveryIndex] = None
) -> bool:
    """Extension of the sequence collection H(R) agrees with the set collection."""
    from .histories import SEQUENCE, SET, HistoryCollection, has_extension_property

    index = index or RecoveryIndex(G)
    masks = sorted(_masks_of(R))
    seqs = HistoryCollection(SEQUENCE, t, frozenset(strong_histories(masks, t, True)))
    sets = HistoryCollection(SET, t, frozenset(strong_histories(masks, t, False)))
    return bool(has_extension_property(seqs, G, index)) == bool(has_extension_property(sets, G, index))


# (m, L)-strong --------------------------------------------------------------------


def exclusion_count(S: Iterable[Service], service: Service, j: int) -> int:
    """Number of services for ``j`` in ``S`` whose sets meet ``service``'s set."""
    S = set(S)
    if service not in S:
        raise ValueError(f"service {service} is not in the collection")
    return sum(1 for s in S if s.request == j and s.mask & service.mask)


def mL_parameters(S: Iterable[Service], k: int) -> tuple[int, int]:
    """Best ``(m, L)`` a collection achieves: fewest services, most exclusions."""
    S = sorted(set(S))
    m = min(sum(1 for s in S if s.request == i) for i in range(1, k + 1))
    L = max((exclusion_count(S, s, j) for s in S for j in range(1, k + 1)), default=0)
    return m, L


def _validate_services(G: GFMatrix, S: Iterable[Service], index: RecoveryIndex) -> list[Service]:
    S = sorted(set(S))
    for s in S:
        if not 1 <= s.request <= G.k:
            raise ValueError(f"service {s}: request outside [1, {G.k}]")
        if not index.serves(s.mask, s.request):
            raise ValueError(f"service {s}: not a minimal recovery set for its request")
    return S


def check_mL_strong(
    G: GFMatrix, S: Iterable[Service], m: int, L: int, index: Optional[RecoveryIndex] = None
) -> Verdict:
    """Decide whether the service collection ``S`` is (m, L)-strong for ``G``."""
    if m < 1 or L < 1:
        raise ValueError("m and L must be positive")
    index = index or RecoveryIndex(G)
    S = _validate_services(G, S, index)
    params = {"m": m, "L": L}
    for i in range(1, G.k + 1):
        count = sum(1 for s in S if s.request == i)
        if count < m:
            return Verdict("mL-strong", False, params, counterexample=("too few services", i, count),
                           detail=f"request {i} has only {count} services")
    for s in S:
        for j in range(1, G.k + 1):
            c = exclusion_count(S, s, j)
            if c > L:
                return Verdict("mL-strong", False, params,
                               counterexample=("excludes too many", str(s), j, c),
                               detail=f"service {s} excludes {c} services for {j}")
    return Verdict("mL-strong", True, params, witness={"m,L": mL_parameters(S, G.k), "t": derive_t(m, L)})


class _ServicePool:
    """All services of a code with their intersection relation as bitsets."""

    def __init__(self, G: GFMatrix, index: RecoveryIndex):
        self.k = G.k
        self.services = [
            Service(i, columns_of(mask)) for i in range(1, G.k + 1) for mask in index.minimal_masks(i)
        ]
        masks = [s.mask for s in self.services]
        self.req = [s.request for s in self.services]
        self.inter = [
            sum(1 << b for b, mb in enumerate(masks) if ma & mb) for ma in masks
        ]
        self.of_request = {
            i: [a for a, r in enumerate(self.req) if r == i] for i in range(1, G.k + 1)
        }
        self.req_bits = {i: sum(1 << a for a in ids) for i, ids in self.of_request.items()}

    def min_count(self) -> int:
        return min(len(v) for v in self.of_request.values())

    def addable(self, chosen: int, x: int, L: int) -> bool:
        new = chosen | (1 << x)
        i = self.req[x]
        rb = self.req_bits[i]
        # every chosen service meeting x now excludes one more service for x's request
        hit = self.inter[x] & new
        while hit:
            low = hit & -hit
            a = low.bit_length() - 1
            if bin(self.inter[a] & new & rb).count("1") > L:
                return False
            hit ^= low
        for j, bits in self.req_bits.items():
            if bin(self.inter[x] & new & bits).count("1") > L:
                return False
        return True

    def feasible(self, m: int, L: int) -> Optional[list[Service]]:
        """Exactly ``m`` services per request with every exclusion count <= L.

        Dropping services never raises an exclusion count, so a collection
        with at least ``m`` per request exists iff one with exactly ``m`` does.
        """
        order = list(range(1, self.k + 1))

        def rec(r: int, start: int, need: int, chosen: int) -> Optional[int]:
            if need == 0:
                if r + 1 == len(order):
                    return chosen
                return rec(r + 1, 0, m, chosen)
            ids = self.of_request[order[r]]
            for p in range(start, len(ids)):
                if len(ids) - p < need:
                    return None
                x = ids[p]
                if not self.addable(chosen, x, L):
                    continue
                nxt = chosen | (1 << x)
                if not self._lookahead(nxt, order[r + 1:], m, L):
                    continue
                got = rec(r, p + 1, need - 1, nxt)
                if got is not None:
                    return got
            return None

        bits = rec(0, 0, m, 0)
        if bits is None:
            return None
        return [s for a, s in enumerate(self.services) if bits >> a & 1]

    def _lookahead(self, chosen: int, later: Sequence[int], m: int, L: int) -> bool:
        for j in later:
            if sum(1 for x in self.of_request[j] if self.addable(chosen, x, L)) < m:
                return False
        return True


@dataclass
class MLSearch:
    """Result of :func:`search_best_mL`: the best witness and the trail of queries."""

    services: list[Service]
    m: int
    L: int
    trail: list[tuple[int, int, bool]] = field(default_factory=list)

    @property
    def t(self) -> int:
        return derive_t(self.m, self.L)

    def admits_m_above(self, c: int) -> bool:
        """Whether some collection has m >= c*L + 1, i.e. ceil(m/L) > c."""
        return self.t > c


def search_best_mL(
    G: GFMatrix, index: Optional[RecoveryIndex] = None, max_k: int = 4, max_n: int = 10
) -> MLSearch:
    """Exhaustive search for the service collection maximising ceil(m/L).

    For each ``L`` the search asks whether ``m = best*L + 1`` is achievable,
    raising ``best`` until it is not; ``m`` can never exceed the smallest
    number of minimal recovery sets of a request, which bounds ``L``.
    """
    if G.k > max_k or G.n > max_n:
        raise ValueError(f"search limited to k <= {max_k}, n <= {max_n}; got {G.shape}")
    index = index or RecoveryIndex(G)
    pool = _ServicePool(G, index)
    cap = pool.min_count()
    if cap == 0:
        raise ValueError("some request has no recovery set (matrix not full rank)")
    best = 0
    witness: list[Service] = []
    trail = []
    L = 1
    while best * L + 1 <= cap:
        target = best * L + 1
        found = pool.feasible(target, L)
        trail.append((target, L, found is not None))
        if found is not None:
            witness = found
            best = derive_t(*mL_parameters(found, G.k))
        else:
            L += 1
    m, L = mL_parameters(witness, G.k)
    return MLSearch(witness, m, L, trail)


def mL_feasible(G: GFMatrix, m: int, L: int, index: Optional[RecoveryIndex] = None) -> Optional[list[Service]]:
    """A service collection that is (m, L)-strong for ``G``, if one exists."""
    index = index or RecoveryIndex(G)
    return _ServicePool(G, index).feasible(m, L)


# strong collection search ---------------------------------------------------------


def search_strong(G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None) -> Optional[list[tuple[int, ...]]]:
    """A collection ``R`` making ``G`` strongly t-asynchronous, or ``None``.

    Branches include/exclude over all minimal recovery sets.  A disjoint
    family of fewer than ``t`` included sets that blocks some request even
    against every still-undecided set can never be repaired, which prunes.
    """
    index = index or RecoveryIndex(G)
    masks = index.all_masks()
    serves = [set(index.requests_served(m)) for m in masks]
    k = G.k

    def ok(included: list[int], pool: list[int]) -> bool:
        cand = {i: [m for p, m in enumerate(masks) if p in pool and i in serves[p]] for i in range(1, k + 1)}
        inc = [masks[p] for p in included]
        seen = set()

        def rec(start: int, used: int, size: int) -> bool:
            if used not in seen:
                seen.add(used)
                for i in range(1, k + 1):
                    if all(m & used for m in cand[i]):
                        return False
            if size == t - 1:
                return True
            for p in range(start, len(inc)):
                if not inc[p] & used and not rec(p + 1, used | inc[p], size + 1):
                    return False
            return True

        return rec(0, 0, 0)

    def dfs(pos: int, included: list[int]) -> Optional[list[int]]:
        pool = set(included) | set(range(pos, len(masks)))
        if not ok(included, pool):
            return None
        if pos == len(masks):
            return included
        for take in (True, False):
            got = dfs(pos + 1, included + [pos] if take else included)
            if got is not None:
                return got
        return None

    found = dfs(0, [])
    return None if found is None else [columns_of(masks[p]) for p in found]


def max_strong_t(G: GFMatrix, limit: int, index: Optional[RecoveryIndex] = None) -> tuple[int, Optional[list]]:
    """Largest ``t <= limit`` admitting a strongly t-asynchronous collection."""
    index = index or RecoveryIndex(G)
    best, witness = 0, None
    for t in range(1, limit + 1):
        found = search_strong(G, t, index)
        if found is None:
            break
        best, witness = t, found
    return best, witness


__all__ = [
    "Service",
    "derive_t",
    "check_strongly_async",
    "strong_equivalence_selftest",
    "exclusion_count",
    "mL_parameters",
    "check_mL_strong",
    "search_best_mL",
    "mL_feasible",
    "MLSearch",
    "search_strong",
    "max_strong_t",
]
