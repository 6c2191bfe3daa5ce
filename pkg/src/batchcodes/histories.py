"""Recovery histories and the online / asynchronous decision procedures.

A history sequence is an ordered tuple of pairwise disjoint column masks; a
history is the unordered version (a frozenset of masks).  Collections of
either kind live in :class:`HistoryCollection`, which carries the horizon
``t`` so that "complete" (size ``t``) and "incomplete" members can be told
apart.

Two decision procedures answer "does *some* suitable collection exist":

* :func:`check_online` plays the serving game.  What can still be served
  depends on earlier choices only through the union of the columns they
  use, so the game state is ``(used columns, requests still to come)``.
* :func:`check_asynchronous` computes the largest subset-closed,
  t-extendable collection as a greatest fixed point: start from every
  history and delete members that cannot be extended or that lost a
  subset, until nothing changes.  The union of two such collections is
  again one, so the survivors contain every valid collection, and the code
  is t-asynchronous iff the empty history survives.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Optional

from .gf import GFMatrix, columns_of, mask_of
from .recovery import RecoveryIndex
from .verdict import Verdict

SEQUENCE = "sequence"
SET = "set"
MAX_HORIZON = 8


def _union(member) -> int:
    u = 0
    for m in member:
        u |= m
    return u


def _disjoint(masks) -> bool:
    u = 0
    for m in masks:
        if not m or u & m:
            return False
        u |= m
    return True


@dataclass(frozen=True)
class HistoryCollection:
    """A finite collection of history sequences or histories with horizon ``t``."""

    mode: str
    t: int
    members: frozenset

    def __post_init__(self):
        if self.mode not in (SEQUENCE, SET):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.t < 0:
            raise ValueError("horizon must be >= 0")
        want = tuple if self.mode == SEQUENCE else frozenset
        for h in self.members:
            if not isinstance(h, want):
                raise TypeError(f"{self.mode} members must be {want.__name__}s")
            if len(h) > self.t:
                raise ValueError(f"member of size {len(h)} exceeds horizon {self.t}")
            if not _disjoint(h):
                raise ValueError("member sets must be nonempty and pairwise disjoint")

    @classmethod
    def of(cls, mode: str, t: int, members: Iterable[Iterable[Iterable[int]]]) -> "HistoryCollection":
        """Build from members given as lists of 1-based column sets."""
        wrap = tuple if mode == SEQUENCE else frozenset
        return cls(mode, t, frozenset(wrap(mask_of(R) for R in h) for h in members))

    def __contains__(self, member) -> bool:
        return member in self.members

    def __len__(self) -> int:
        return len(self.members)

    def complete(self) -> "HistoryCollection":
        return HistoryCollection(self.mode, self.t, frozenset(h for h in self.members if len(h) == self.t))

    def sorted_members(self) -> list:
        def key(h):
            seq = h if self.mode == SEQUENCE else sorted(h, key=lambda m: (bin(m).count("1"), columns_of(m)))
            return (len(h), [columns_of(m) for m in seq])

        return sorted(self.members, key=key)

    def as_column_sets(self, member) -> list[tuple[int, ...]]:
        seq = member if self.mode == SEQUENCE else sorted(member, key=columns_of)
        return [columns_of(m) for m in seq]


def _require(H: HistoryCollection, mode: str) -> None:
    if H.mode != mode:
        raise ValueError(f"expected a {mode} collection, got {H.mode}")


def is_prefix_closed(H: HistoryCollection) -> bool:
    _require(H, SEQUENCE)
    return all(h[:j] in H.members for h in H.members for j in range(len(h)))


def is_subset_closed(H: HistoryCollection) -> bool:
    """Checking the maximal proper subsets of each member is enough."""
    _require(H, SET)
    return all(h - {m} in H.members for h in H.members for m in h)


def closure(H: HistoryCollection) -> HistoryCollection:
    """Prefix-closure (sequences) or subset-closure (sets)."""
    out = set()
    if H.mode == SEQUENCE:
        for h in H.members:
            out.update(h[:j] for j in range(len(h) + 1))
    else:
        for h in H.members:
            items = sorted(h)
            for r in range(len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, r))
    return HistoryCollection(H.mode, H.t, frozenset(out))


def has_extension_property(
    H: HistoryCollection, G: GFMatrix, index: Optional[RecoveryIndex] = None
) -> Verdict:
    """Every incomplete member extends, for every request, to another member."""
    index = index or RecoveryIndex(G)
    children: dict = defaultdict(list)
    for h in H.members:
        if not h:
            continue
        if H.mode == SEQUENCE:
            children[h[:-1]].append(h[-1])
        else:
            for m in h:
                children[h - {m}].append(m)
    for h in H.sorted_members():
        if len(h) >= H.t:
            continue
        for i in range(1, G.k + 1):
            if not any(index.serves(m, i) for m in children.get(h, ())):
                return Verdict("extension", False, {"t": H.t, "mode": H.mode},
                               counterexample=(H.as_column_sets(h), i),
                               detail=f"member {H.as_column_sets(h)} cannot serve request {i}")
    return Verdict("extension", True, {"t": H.t, "mode": H.mode})


def has_exchange_property(
    H: HistoryCollection, G: GFMatrix, index: Optional[RecoveryIndex] = None
) -> Verdict:
    """Every slot of every complete member can be swapped to serve any request."""
    if any(len(h) != H.t for h in H.members):
        raise ValueError("exchange property is defined on complete members only")
    index = index or RecoveryIndex(G)
    holes: dict = defaultdict(list)
    for h in H.members:
        if H.mode == SEQUENCE:
            for j in range(len(h)):
                holes[(h[:j], h[j + 1:])].append(h[j])
        else:
            for m in h:
                holes[h - {m}].append(m)
    for h in H.sorted_members():
        slots = range(len(h)) if H.mode == SEQUENCE else sorted(h, key=columns_of)
        for j in slots:
            key = (h[:j], h[j + 1:]) if H.mode == SEQUENCE else h - {j}
            for i in range(1, G.k + 1):
                if not any(index.serves(m, i) for m in holes[key]):
                    slot = j + 1 if H.mode == SEQUENCE else columns_of(j)
                    return Verdict("exchange", False, {"t": H.t, "mode": H.mode},
                                   counterexample=(H.as_column_sets(h), slot, i),
                                   detail=f"slot {slot} of {H.as_column_sets(h)} has no replacement for {i}")
    return Verdict("exchange", True, {"t": H.t, "mode": H.mode})


def check_exchange_extension_equivalence(
    Hstar: HistoryCollection, G: GFMatrix, index: Optional[RecoveryIndex] = None
) -> bool:
    """Self-test: exchange on ``Hstar`` agrees with extension on its closure."""
    _require(Hstar, SET)
    index = index or RecoveryIndex(G)
    return bool(has_exchange_property(Hstar, G, index)) == bool(
        has_extension_property(closure(Hstar), G, index)
    )


# online ----------------------------------------------------------------------


class OnlineGame:
    """The serving game: the algorithm answers each request with a disjoint set.

    ``wins(used, r)`` is True when the algorithm can serve any ``r`` further
    requests starting from the column set ``used``.
    """

    def __init__(self, G: GFMatrix, index: Optional[RecoveryIndex] = None):
        self.G = G
        self.index = index or RecoveryIndex(G)
        self._memo: dict[tuple[int, int], bool] = {}

    def wins(self, used: int, remaining: int) -> bool:
        if remaining <= 0:
            return True
        key = (used, remaining)
        hit = self._memo.get(key)
        if hit is None:
            hit = all(
                any(self.wins(used | m, remaining - 1) for m in self.index.available(i, used))
                for i in range(1, self.G.k + 1)
            )
            self._memo[key] = hit
        return hit

    def horizon(self, used: int, cap: int) -> int:
        """Largest ``r <= cap`` with ``wins(used, r)``; wins is monotone in r."""
        r = 0
        while r < cap and self.wins(used, r + 1):
            r += 1
        return r

    def best_reply(self, used: int, i: int, cap: int) -> Optional[int]:
        """The available set for ``i`` that keeps the longest guaranteed horizon."""
        best, best_h = None, -1
        for m in self.index.available(i, used):
            h = self.horizon(used | m, cap)
            if h > best_h:
                best, best_h = m, h
        return best

    def adversary_request(self, used: int, remaining: int) -> Optional[int]:
        """A request that no reply survives, preferring the quickest kill."""
        best, best_h = None, None
        for i in range(1, self.G.k + 1):
            replies = list(self.index.available(i, used))
            worst = max((self.horizon(used | m, remaining - 1) for m in replies), default=-1)
            if worst < remaining - 1 and (best_h is None or worst < best_h):
                best, best_h = i, worst
        return best

    def strategy_tree(self, used: int, remaining: int, depth_cap: int = 8) -> Optional[dict]:
        """Adversary strategy from a losing state, as a nested dict."""
        if self.wins(used, remaining) or depth_cap <= 0:
            return None
        i = self.adversary_request(used, remaining)
        replies = {}
        for m in self.index.available(i, used):
            sub = self.strategy_tree(used | m, remaining - 1, depth_cap - 1)
            replies[columns_of(m)] = sub
        return {"request": i, "replies": replies}

    def prefix_is_losing(self, prefix: tuple[int, ...], t: int) -> bool:
        """True iff every way of serving ``prefix`` leaves a losing state."""
        rest = t - len(prefix)

        def rec(pos: int, used: int) -> bool:
            if pos == len(prefix):
                return not self.wins(used, rest)
            return all(rec(pos + 1, used | m) for m in self.index.available(prefix[pos], used))

        return rec(0, 0)


def losing_prefixes(G: GFMatrix, t: int, length: int, game: Optional[OnlineGame] = None) -> list[tuple[int, ...]]:
    """All request sequences of ``length`` after which the algorithm is lost.

    A prefix qualifies when, however its requests are served, some
    continuation of ``t - length`` requests cannot be served.
    """
    game = game or OnlineGame(G)
    return [p for p in product(range(1, G.k + 1), repeat=length) if game.prefix_is_losing(p, t)]


def check_online(G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None) -> Verdict:
    """Decide whether ``G`` is t-online."""
    if t < 1:
        raise ValueError("t must be >= 1")
    game = OnlineGame(G, index)
    if game.wins(0, t):
        return Verdict("online", True, {"t": t})
    prefix: tuple[int, ...] = ()
    for length in range(t - 1, 0, -1):
        found = losing_prefixes(G, t, length, game)
        if found:
            prefix = found[0]
            break
    return Verdict(
        "online", False, {"t": t},
        counterexample={"losing_prefix": prefix, "strategy": game.strategy_tree(0, t)},
        detail=f"adversary wins; requests {prefix} lose regardless of how they are served",
    )


def max_online_t(G: GFMatrix, limit: int, index: Optional[RecoveryIndex] = None) -> int:
    return OnlineGame(G, index).horizon(0, limit)


# asynchronous -------------------------------------------------------------------


def all_histories(G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None, cap: int = 2_000_000) -> list[frozenset]:
    """Every history of at most ``t`` pairwise disjoint minimal recovery sets."""
    index = index or RecoveryIndex(G)
    masks = index.all_masks()
    out: list[frozenset] = []

    def rec(start: int, used: int, acc: list[int]) -> None:
        out.append(frozenset(acc))
        if len(out) > cap:
            raise ValueError(f"more than {cap} histories; instance too large")
        if len(acc) == t:
            return
        for p in range(start, len(masks)):
            m = masks[p]
            if not m & used:
                acc.append(m)
                rec(p + 1, used | m, acc)
                acc.pop()

    rec(0, 0, [])
    return out


@dataclass
class AsyncResult:
    survivors: HistoryCollection
    pruned: list  # (history, reason) in deletion order


def async_fixed_point(G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None) -> AsyncResult:
    """Largest subset-closed t-extendable collection of histories (maybe empty)."""
    if t > MAX_HORIZON:
        raise ValueError(f"horizon {t} exceeds the supported bound {MAX_HORIZON}")
    index = index or RecoveryIndex(G)
    universe = all_histories(G, t, index)
    serves = {m: set(index.requests_served(m)) for m in index.all_masks()}
    children: dict[frozenset, list] = defaultdict(list)
    parents: dict[frozenset, list] = defaultdict(list)
    for h in universe:
        for m in h:
            p = h - {m}
            children[p].append((m, h))
            parents[h].append(p)

    alive = set(universe)

    def failure(h):
        for p in parents[h]:
            if p not in alive:
                return ("lost subset", sorted(columns_of(x) for x in p))
        if len(h) < t:
            for i in range(1, G.k + 1):
                if not any(c in alive and i in serves[m] for m, c in children[h]):
                    return ("cannot serve", i)
        return None

    pruned = []
    work = deque(sorted(universe, key=len))
    while work:
        h = work.popleft()
        if h not in alive:
            continue
        why = failure(h)
        if why is None:
            continue
        alive.discard(h)
        pruned.append((h, why))
        work.extend(parents[h])
        work.extend(c for _, c in children[h])
    return AsyncResult(HistoryCollection(SET, t, frozenset(alive)), pruned)


def check_asynchronous(G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None) -> Verdict:
    """Decide whether ``G`` is t-asynchronous."""
    if t < 1:
        raise ValueError("t must be >= 1")
    res = async_fixed_point(G, t, index)
    if frozenset() in res.survivors.members:
        return Verdict("asynchronous", True, {"t": t}, witness=res.survivors)
    first, why = res.pruned[0]
    empty_why = next(w for h, w in res.pruned if not h)
    return Verdict(
        "asynchronous", False, {"t": t},
        counterexample={
            "first_pruned": (sorted(columns_of(m) for m in first), why),
            "empty_history": empty_why,
        },
        detail=f"first pruned history {sorted(columns_of(m) for m in first)}: {why[0]} {why[1]}",
    )


def max_async_t(G: GFMatrix, limit: int, index: Optional[RecoveryIndex] = None) -> int:
    index = index or RecoveryIndex(G)
    best = 0
    for t in range(1, min(limit, MAX_HORIZON) + 1):
        if not check_asynchronous(G, t, index):
            break
        best = t
    return best
