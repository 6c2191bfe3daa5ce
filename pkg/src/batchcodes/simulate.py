"""Event-driven simulation of online and asynchronous serving.

A policy sees only the columns currently in use and the new request, and
answers with a minimal recovery set disjoint from them (or ``None``).
Requests arriving while ``t`` processes are active are rejected and
flagged rather than queued.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from .gf import GFMatrix, columns_of, mask_of
from .histories import OnlineGame
from .recovery import RecoveryIndex

Choice = Callable[[int, int], Optional[int]]


@dataclass(frozen=True)
class Policy:
    name: str
    choose: Choice

    def __call__(self, used: int, request: int) -> Optional[int]:
        return self.choose(used, request)


def singleton_first(index: RecoveryIndex) -> Policy:
    """Smallest available set: a singleton when possible, then by size and columns."""
    return Policy("singleton-first", lambda used, i: next(index.available(i, used), None))


def lexicographic_smallest(index: RecoveryIndex) -> Policy:
    """Available set whose sorted column tuple is lexicographically least."""

    def choose(used: int, i: int) -> Optional[int]:
        return min(index.available(i, used), key=columns_of, default=None)

    return Policy("lexicographic-smallest", choose)


def largest_remaining_options(index: RecoveryIndex, k: int) -> Policy:
    """Greedy: keep the most recovery sets available across all requests."""

    def options(used: int) -> int:
        return sum(1 for j in range(1, k + 1) for _ in index.available(j, used))

    def choose(used: int, i: int) -> Optional[int]:
        best, score = None, -1
        for m in index.available(i, used):
            s = options(used | m)
            if s > score:
                best, score = m, s
        return best

    return Policy("largest-remaining-options", choose)


def winning_policy(game: OnlineGame, t: int) -> Policy:
    """Reply that keeps the longest guaranteed horizon, from the serving game."""
    return Policy(f"game-optimal(t={t})", lambda used, i: game.best_reply(used, i, t))


def restricted_policy(index: RecoveryIndex, R: Iterable[Iterable[int]]) -> Policy:
    """First available member of a fixed collection ``R``."""
    allowed = {mask_of(r) for r in R}

    def choose(used: int, i: int) -> Optional[int]:
        return next((m for m in index.available(i, used) if m in allowed), None)

    return Policy("collection-restricted", choose)


def builtin_policies(G: GFMatrix, t: int, index: Optional[RecoveryIndex] = None) -> list[Policy]:
    index = index or RecoveryIndex(G)
    return [
        singleton_first(index),
        lexicographic_smallest(index),
        largest_remaining_options(index, G.k),
        winning_policy(OnlineGame(G, index), t),
    ]


# online ---------------------------------------------------------------------------


@dataclass
class OnlineTrace:
    requests: tuple[int, ...]
    served: list[tuple[int, tuple[int, ...]]]
    failed_at: Optional[int] = None  # 0-based position of the first unserved request

    @property
    def ok(self) -> bool:
        return self.failed_at is None


def simulate_online(G: GFMatrix, policy: Policy, requests: Sequence[int], t: int) -> OnlineTrace:
    requests = tuple(requests)
    if len(requests) > t:
        raise ValueError(f"{len(requests)} requests exceed t = {t}")
    used = 0
    served = []
    for pos, i in enumerate(requests):
        m = policy(used, i)
        if m is None or m & used:
            return OnlineTrace(requests, served, pos)
        used |= m
        served.append((i, columns_of(m)))
    return OnlineTrace(requests, served)


def adversarial_search(G: GFMatrix, policy: Policy, t: int) -> Optional[tuple[int, ...]]:
    """Shortest, then lexicographically first, request sequence the policy fails on."""
    frontier = [((), 0)]
    for _ in range(t):
        nxt = []
        for seq, used in frontier:
            for i in range(1, G.k + 1):
                m = policy(used, i)
                if m is None or m & used:
                    return seq + (i,)
                nxt.append((seq + (i,), used | m))
        frontier = nxt
    return None


# asynchronous ---------------------------------------------------------------------


@dataclass(frozen=True)
class Event:
    kind: str  # "arrive" or "complete"
    request: int
    columns: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.kind == "arrive":
            return f"arrive {self.request}"
        return f"complete {self.request}:" + ",".join(map(str, self.columns))


@dataclass
class AsyncTrace:
    lines: list[str] = field(default_factory=list)
    rejected: list[int] = field(default_factory=list)  # event positions refused at capacity
    deadlock: Optional[dict] = None
    max_active: int = 0
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.deadlock is None


class _AsyncState:
    def __init__(self, G: GFMatrix, policy: Policy, t: int):
        self.G, self.policy, self.t = G, policy, t
        self.active: list[tuple[int, int]] = []
        self.trace = AsyncTrace()

    @property
    def used(self) -> int:
        u = 0
        for _, m in self.active:
            u |= m
        return u

    def arrive(self, pos: int, i: int) -> Optional[int]:
        if not 1 <= i <= self.G.k:
            raise ValueError(f"event {pos + 1}: request {i} outside [1, {self.G.k}]")
        if len(self.active) >= self.t:
            self.trace.rejected.append(pos)
            self.trace.lines.append(f"arrive {i}  # rejected: {self.t} active")
            return None
        used = self.used
        m = self.policy(used, i)
        if m is None or m & used:
            self.trace.deadlock = {
                "event": pos,
                "request": i,
                "active": [(r, columns_of(x)) for r, x in self.active],
            }
            self.trace.lines.append(f"arrive {i}  # DEADLOCK")
            return None
        self.active.append((i, m))
        self.trace.max_active = max(self.trace.max_active, len(self.active))
        self.trace.lines.append(f"arrive {i}  # served by " + ",".join(map(str, columns_of(m))))
        return m

    def complete(self, pos: int, i: int, m: int) -> None:
        if (i, m) not in self.active:
            raise ValueError(f"event {pos + 1}: no active process {i}:{columns_of(m)}")
        self.active.remove((i, m))
        self.trace.lines.append(f"complete {i}:" + ",".join(map(str, columns_of(m))))


def simulate_async(G: GFMatrix, policy: Policy, events: Iterable[Event], t: int) -> AsyncTrace:
    """Replay an event stream; stop at the first arrival the policy cannot serve."""
    state = _AsyncState(G, policy, t)
    for pos, ev in enumerate(events):
        if ev.kind == "arrive":
            state.arrive(pos, ev.request)
            if state.trace.deadlock:
                break
        elif ev.kind == "complete":
            state.complete(pos, ev.request, mask_of(ev.columns))
        else:
            raise ValueError(f"event {pos + 1}: unknown kind {ev.kind!r}")
    return state.trace


def random_async_run(
    G: GFMatrix, policy: Policy, t: int, steps: int, seed: int, p_arrive: float = 0.6
) -> AsyncTrace:
    """Random arrivals and completions, at most ``t`` active; reproducible by seed.

    Completions are drawn from the active processes, so the stream is
    well-formed by construction.
    """
    rng = random.Random(seed)
    state = _AsyncState(G, policy, t)
    state.trace.seed = seed
    for pos in range(steps):
        if state.active and (len(state.active) >= t or rng.random() > p_arrive):
            i, m = state.active[rng.randrange(len(state.active))]
            state.complete(pos, i, m)
        else:
            state.arrive(pos, rng.randint(1, G.k))
            if state.trace.deadlock:
                break
    return state.trace


def all_short_streams(k: int, t: int) -> Iterable[tuple[int, ...]]:
    """Every request sequence of length ``t`` over ``[k]``."""
    return product(range(1, k + 1), repeat=t)
