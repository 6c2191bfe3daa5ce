"""Command-line interface.

Exit codes: 0 the property holds (or a construction succeeded), 1 it fails,
2 bad input.  Every report ends with a ``key: value`` block between
``--- report`` and ``--- end`` for harnesses.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path
from typing import Any, Optional

from . import aad, graphs
from .batch import check_batch, default_jobs, describe_assignment, serve_batch
from .formats import (
    format_collection,
    format_graph,
    format_matrix,
    parse_collection,
    parse_events,
    parse_family,
    parse_graph,
    parse_matrix,
    parse_services,
)
from .gf import GFMatrix, columns_of, mask_of, rank
from .hierarchy import hierarchy_scan
from .histories import (
    MAX_HORIZON,
    OnlineGame,
    check_asynchronous,
    check_online,
    has_extension_property,
    is_subset_closed,
)
from .recovery import RecoveryIndex, enumerate_minimal
from .simulate import (
    builtin_policies,
    random_async_run,
    restricted_policy,
    simulate_async,
    simulate_online,
)
from .strong import check_mL_strong, check_strongly_async, search_best_mL

MAX_K = 16
MAX_N = 64


class InputError(Exception):
    pass


class Report:
    def __init__(self, command: str):
        self.command = command
        self.fields: dict[str, Any] = {"command": command}
        self.lines: list[str] = []
        self.start = time.perf_counter()

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def set(self, **kw: Any) -> None:
        self.fields.update(kw)

    def digest(self, name: str, path: str) -> None:
        self.fields[f"{name}_sha256"] = hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]

    def emit(self, out) -> None:
        self.fields["wall_time_s"] = f"{time.perf_counter() - self.start:.3f}"
        for line in self.lines:
            print(line, file=out)
        print("--- report", file=out)
        for key, val in self.fields.items():
            if isinstance(val, bool):
                val = str(val).lower()
            print(f"{key}: {val}", file=out)
        print("--- end", file=out)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _matrix(args, rep: Report) -> GFMatrix:
    G = parse_matrix(_read(args.matrix))
    rep.digest("matrix", args.matrix)
    if G.k > MAX_K or G.n > MAX_N:
        raise InputError(f"matrix {G.k}x{G.n} exceeds the size guard k <= {MAX_K}, n <= {MAX_N}")
    if rank(G) != G.k:
        raise InputError(f"matrix has rank {rank(G)} < k = {G.k}")
    rep.set(q=G.q, k=G.k, n=G.n)
    return G


def _t(args, cap: Optional[int] = None) -> int:
    if args.t < 1:
        raise InputError("--t must be >= 1")
    if cap is not None and args.t > cap:
        raise InputError(f"--t {args.t} exceeds the supported bound {cap}")
    return args.t


def _verdict(rep: Report, v) -> int:
    rep.set(property=v.property, verdict=v.label, **{k: v for k, v in v.params.items() if k != "mode"})
    if v.detail:
        rep.say(v.detail)
    rep.say(f"{v.property}: {v.label}")
    return 0 if v.holds else 1


def _sets(sets) -> str:
    return " ".join("{" + ",".join(map(str, c)) + "}" for c in sets)


# subcommands ------------------------------------------------------------------


def cmd_enum_recovery(args, rep: Report) -> int:
    G = _matrix(args, rep)
    index = RecoveryIndex(G)
    reqs = [args.request] if args.request else range(1, G.k + 1)
    total = 0
    for i in reqs:
        if not 1 <= i <= G.k:
            raise InputError(f"--request {i} outside [1, {G.k}]")
        found = enumerate_minimal(G, i, index)
        total += len(found)
        rep.say(f"request {i}: {len(found)} minimal recovery sets")
        for rs in found:
            rep.say(f"  {rs}")
    rep.set(total_sets=total)
    return 0


def cmd_check_batch(args, rep: Report) -> int:
    G = _matrix(args, rep)
    t = _t(args)
    jobs = args.jobs or default_jobs()
    index = RecoveryIndex(G)
    v = check_batch(G, t, index, jobs=jobs)
    rep.set(jobs=jobs)
    if v.holds:
        rep.set(batches_checked=v.witness["batches_checked"])
        example = tuple(range(1, G.k + 1))[:t] if t <= G.k else (1,) * t
        a = serve_batch(G, example, index)
        rep.say(f"example: batch {example} served by {describe_assignment(a)}")
        rep.set(revalidated=a.is_valid(G))
    else:
        rep.set(counterexample=",".join(map(str, v.counterexample)))
        rep.set(revalidated=serve_batch(G, v.counterexample, index) is None)
    return _verdict(rep, v)


def cmd_check_online(args, rep: Report) -> int:
    G = _matrix(args, rep)
    t = _t(args)
    index = RecoveryIndex(G)
    v = check_online(G, t, index)
    if not v.holds:
        prefix = v.counterexample["losing_prefix"]
        game = OnlineGame(G, index)
        if prefix:
            rep.say(f"losing prefix: {','.join(map(str, prefix))}")
            rep.set(losing_prefix=",".join(map(str, prefix)),
                    revalidated=game.prefix_is_losing(prefix, t))
        tree = v.counterexample["strategy"]
        if tree:
            rep.say(f"adversary opens with request {tree['request']}")
            rep.set(adversary_first=tree["request"])
    return _verdict(rep, v)


def cmd_check_async(args, rep: Report) -> int:
    G = _matrix(args, rep)
    t = _t(args, MAX_HORIZON)
    index = RecoveryIndex(G)
    v = check_asynchronous(G, t, index)
    if v.holds:
        H = v.witness
        rep.set(surviving_histories=len(H),
                revalidated=is_subset_closed(H) and has_extension_property(H, G, index).holds)
    else:
        hist, why = v.counterexample["first_pruned"]
        rep.set(first_pruned=_sets(hist) or "{}", reason=f"{why[0]} {why[1]}")
    return _verdict(rep, v)


def _collection_masks(path: str) -> list[tuple[int, ...]]:
    return [cols for _, cols in parse_collection(_read(path))]


def cmd_check_strong(args, rep: Report) -> int:
    G = _matrix(args, rep)
    t = _t(args)
    R = _collection_masks(args.collection)
    rep.digest("collection", args.collection)
    index = RecoveryIndex(G)
    try:
        v = check_strongly_async(G, R, t, index)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep.set(collection_size=len(set(R)))
    if not v.holds:
        fam, i = v.counterexample
        rep.set(blocking_family=_sets(fam) or "{}", blocked_request=i)
        used = 0
        for c in fam:
            used |= mask_of(c)
        rep.set(revalidated=not any(
            not mask_of(r) & used and index.serves(mask_of(r), i) for r in R))
    return _verdict(rep, v)


def cmd_check_ml_strong(args, rep: Report) -> int:
    G = _matrix(args, rep)
    S = parse_services(_read(args.services))
    rep.digest("services", args.services)
    try:
        v = check_mL_strong(G, S, args.m, args.L)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if v.holds:
        rep.set(achieved_mL="%d,%d" % v.witness["m,L"], t=v.witness["t"])
    else:
        rep.set(counterexample=" ".join(map(str, v.counterexample)))
    return _verdict(rep, v)


def cmd_search_ml(args, rep: Report) -> int:
    G = _matrix(args, rep)
    try:
        res = search_best_mL(G)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for m, L, ok in res.trail:
        rep.say(f"m={m} L={L}: {'found' if ok else 'none'}")
    rep.say(f"best: m={res.m} L={res.L} t={res.t}")
    rep.set(best_m=res.m, best_L=res.L, best_t=res.t,
            revalidated=check_mL_strong(G, res.services, res.m, res.L).holds)
    if args.above is not None:
        ok = res.admits_m_above(args.above)
        rep.set(query=f"m >= {args.above}L+1", answer=ok)
        rep.say(f"some collection has m >= {args.above}L+1: {ok}")
        return 0 if ok else 1
    if args.out:
        Path(args.out).write_text(format_collection(res.services))
    return 0


def _family(args, rep: Report):
    F = parse_family(_read(args.family))
    rep.digest("family", args.family)
    rep.set(q=F.q, n=F.n, m=F.m)
    return F


def cmd_check_aad(args, rep: Report) -> int:
    F = _family(args, rep)
    try:
        v = aad.check_aad(F, args.L)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return _verdict(rep, v)


def cmd_check_aad_star(args, rep: Report) -> int:
    F = _family(args, rep)
    try:
        v = aad.check_aad_star(F, args.L)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return _verdict(rep, v)


def cmd_build_aad_code(args, rep: Report) -> int:
    F = _family(args, rep)
    try:
        cc = aad.build_coset_code(F)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    v = check_mL_strong(cc.matrix, cc.services, F.m, cc.L)
    rep.set(L=cc.L, code_k=cc.k, N=cc.N, n_total=cc.n_total, t=cc.t,
            services=len(cc.services), mL_strong=v.holds)
    rep.say(f"coset code [{cc.n_total}, {cc.k}] with {cc.N} parity columns, t = {cc.t}")
    if args.out:
        Path(args.out).write_text(format_matrix(cc.matrix))
    if args.services_out:
        Path(args.services_out).write_text(format_collection(cc.services))
    return 0 if v.holds else 1


def _graph(args, rep: Report) -> graphs.BipartiteGraph:
    g = parse_graph(_read(args.graph))
    rep.digest("graph", args.graph)
    rep.set(points=g.k, blocks=g.b, edges=len(g.edges))
    if g.degenerate_blocks():
        rep.say(f"note: blocks of degree 1 (repetition columns): {g.degenerate_blocks()}")
    return g


def cmd_check_graph(args, rep: Report) -> int:
    g = _graph(args, rep)
    if args.c4free:
        try:
            v = graphs.check_c4free_conditions(g, args.m, args.L)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        v = graphs.check_graph_conditions(g, args.m, args.L)
    rep.set(girth=graphs.girth(g))
    if not v.holds:
        rep.set(violated=v.counterexample[0])
    pair = graphs.build_graph_code(g)
    if pair.services:
        direct = check_mL_strong(pair.code, pair.services, args.m, args.L)
        rep.set(direct_count=direct.label)
    return _verdict(rep, v)


def cmd_build_graph_code(args, rep: Report) -> int:
    g = _graph(args, rep)
    pair = graphs.build_graph_code(g)
    rep.set(code_n=pair.code.n, code_k=pair.code.k, services=len(pair.services))
    rep.say(f"graph code [{pair.code.n}, {pair.code.k}]")
    if args.out:
        Path(args.out).write_text(format_matrix(pair.code))
    if args.services_out:
        Path(args.services_out).write_text(format_collection(pair.services))
    return 0


def cmd_gen_pg(args, rep: Report) -> int:
    try:
        g = graphs.generate_pg_incidence(args.q)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = format_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        rep.say(text.rstrip())
    rep.set(points=g.k, blocks=g.b, edges=len(g.edges), girth=graphs.girth(g))
    return 0


def cmd_simulate(args, rep: Report) -> int:
    G = _matrix(args, rep)
    t = _t(args)
    index = RecoveryIndex(G)
    if args.collection:
        policy = restricted_policy(index, _collection_masks(args.collection))
    else:
        named = {p.name.split("(")[0]: p for p in builtin_policies(G, t, index)}
        if args.policy not in named:
            raise InputError(f"unknown policy {args.policy!r}; choose from {sorted(named)}")
        policy = named[args.policy]
    rep.set(policy=policy.name)
    if args.requests:
        reqs = [int(x) for x in args.requests.split(",")]
        tr = simulate_online(G, policy, reqs, t)
        for i, cols in tr.served:
            rep.say(f"request {i} -> {{{','.join(map(str, cols))}}}")
        if not tr.ok:
            rep.say(f"request {reqs[tr.failed_at]} at position {tr.failed_at + 1} cannot be served")
            rep.set(failed_at=tr.failed_at + 1)
        rep.set(outcome="served" if tr.ok else "failed")
        return 0 if tr.ok else 1
    if args.events:
        tr = simulate_async(G, policy, parse_events(_read(args.events)), t)
        rep.digest("events", args.events)
    else:
        tr = random_async_run(G, policy, t, args.steps, args.seed)
        rep.set(seed=args.seed, steps=args.steps)
    for line in tr.lines:
        rep.say(line)
    rep.set(max_active=tr.max_active, rejected=len(tr.rejected), outcome="ok" if tr.ok else "deadlock")
    if tr.deadlock:
        d = tr.deadlock
        rep.set(deadlock_request=d["request"], active_sets=_sets(c for _, c in d["active"]) or "{}")
    return 0 if tr.ok else 1


def cmd_hierarchy_scan(args, rep: Report) -> int:
    G = _matrix(args, rep)
    try:
        scan = hierarchy_scan(G)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep.say(f"{'property':<14} max t")
    for name, val in scan.rows():
        rep.say(f"{name:<14} {val}")
        rep.set(**{name.replace("-", "_"): val})
    rep.set(best_mL="%d,%d" % scan.mL, monotone=scan.is_monotone())
    return 0 if scan.is_monotone() else 1


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="batchcodes", description="Verify and build linear batch codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, matrix=True, t=False):
        sp = sub.add_parser(name, help=help_)
        if matrix:
            sp.add_argument("--matrix", required=True, help="matrix file: 'q k n' then k rows")
        if t:
            sp.add_argument("--t", type=int, required=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("enum-recovery", cmd_enum_recovery, "list minimal recovery sets")
    sp.add_argument("--request", type=int)
    sp = add("check-batch", cmd_check_batch, "is the code a t-batch code", t=True)
    sp.add_argument("--jobs", type=int, default=None, help="worker processes (default $BATCHCODES_JOBS or 1)")
    add("check-online", cmd_check_online, "is the code t-online", t=True)
    add("check-async", cmd_check_async, "is the code t-asynchronous", t=True)
    sp = add("check-strong", cmd_check_strong, "is (G, R) strongly t-asynchronous", t=True)
    sp.add_argument("--collection", required=True, help="recovery sets, one per line")
    sp = add("check-ml-strong", cmd_check_ml_strong, "is a service collection (m, L)-strong")
    sp.add_argument("--services", required=True, help="services 'i: c1,c2,...'")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp = add("search-ml", cmd_search_ml, "best ceil(m/L) over all service collections")
    sp.add_argument("--above", type=int, help="answer: is m >= c*L+1 achievable for this c")
    sp.add_argument("--out", help="write the best collection here")
    for name, func in (("check-aad", cmd_check_aad), ("check-aad-star", cmd_check_aad_star)):
        sp = add(name, func, f"{name[6:].upper()} check of a subspace family", matrix=False)
        sp.add_argument("--family", required=True)
        sp.add_argument("--L", type=int, required=True)
    sp = add("build-aad-code", cmd_build_aad_code, "coset code of an AAD* family", matrix=False)
    sp.add_argument("--family", required=True)
    sp.add_argument("--out")
    sp.add_argument("--services-out")
    sp = add("check-graph", cmd_check_graph, "graph conditions for (m, L)-strong edge services", matrix=False)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--c4free", action="store_true", help="use the theta-graph form (C4-free input)")
    sp = add("build-graph-code", cmd_build_graph_code, "systematic code [I | B] of a graph", matrix=False)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--out")
    sp.add_argument("--services-out")
    sp = add("gen-pg", cmd_gen_pg, "incidence graph of PG(2, q)", matrix=False)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--out")
    sp = add("simulate", cmd_simulate, "online or asynchronous serving simulation", t=True)
    sp.add_argument("--policy", default="singleton-first")
    sp.add_argument("--collection", help="restrict the policy to this collection")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--requests", help="online run: comma-separated requests")
    src.add_argument("--events", help="asynchronous run: event stream file")
    sp.add_argument("--steps", type=int, default=50, help="random asynchronous run length")
    sp.add_argument("--seed", type=int, default=0)
    add("hierarchy-scan", cmd_hierarchy_scan, "max t for each property of a small code")
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rep = Report(args.command)
    try:
        code = args.func(args, rep)
    except (InputError, ValueError, IndexError) as exc:
        # library precondition failures (ValueError, IndexError) are bad input too
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep.emit(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
