"""Recompute every verdict for the three example codes, the seven-lines family
and the two incidence graphs, and print one line per fact with its timing.

    python scripts/reproduce_examples.py
"""

from __future__ import annotations

import time

from batchcodes.aad import build_coset_code, check_aad, check_aad_star, lines_family
from batchcodes.batch import check_batch
from batchcodes.gf import GFMatrix
from batchcodes.graphs import (
    build_graph_code,
    check_c4free_conditions,
    check_graph_conditions,
    generate_gq22_incidence,
    generate_pg_incidence,
    girth,
)
from batchcodes.histories import OnlineGame, check_asynchronous, check_online, losing_prefixes
from batchcodes.recovery import RecoveryIndex
from batchcodes.simulate import Event, simulate_async, singleton_first
from batchcodes.strong import check_mL_strong, check_strongly_async, search_best_mL

R38 = [(1,), (2, 3), (6, 7), (6, 8), (2,), (4, 6), (5, 7), (5, 8), (4,), (1, 5), (3, 7), (3, 8)]


def show(label: str, fn) -> None:
    t0 = time.perf_counter()
    val = fn()
    print(f"{label:<58} {str(val):<28} {time.perf_counter() - t0:7.3f} s")


def main() -> None:
    G73 = GFMatrix.from_strings(["1010101", "0110011", "0001111"])
    G32 = GFMatrix.from_strings(["101", "011"])
    G38 = GFMatrix.from_strings(["10101011", "01100111", "00011111"])

    print("# 3 x 7 simplex code")
    show("check_batch t=4", lambda: check_batch(G73, 4).label)
    show("check_online t=3", lambda: check_online(G73, 3).label)
    show("check_online t=4", lambda: check_online(G73, 4).label)
    show("losing prefixes of length 3 (t=4)", lambda: losing_prefixes(G73, 4, 3))
    show("prefix 1,2,1 losing (t=4)", lambda: OnlineGame(G73).prefix_is_losing((1, 2, 1), 4))
    show("check_asynchronous t=2 / t=3",
         lambda: (check_asynchronous(G73, 2).label, check_asynchronous(G73, 3).label))

    print("# 2 x 3 code")
    show("check_online t=2", lambda: check_online(G32, 2).label)
    show("check_asynchronous t=2", lambda: check_asynchronous(G32, 2).label)
    stream = [Event("arrive", 1), Event("arrive", 1), Event("complete", 1, (1,)), Event("arrive", 2)]
    tr = simulate_async(G32, singleton_first(RecoveryIndex(G32)), stream, 2)
    for line in tr.lines:
        print(f"  {line}")

    print("# 3 x 8 code with its twelve-set collection")
    show("check_strongly_async R t=3", lambda: check_strongly_async(G38, R38, 3).label)
    show("check_strongly_async R t=4", lambda: check_strongly_async(G38, R38, 4).label)
    res = search_best_mL(G38)
    show("best (m, L) over all service collections", lambda: (res.m, res.L, res.t))
    show("some collection has m >= 2L+1", lambda: res.admits_m_above(2))

    print("# seven lines of GF(2)^3")
    F = lines_family(2, 3)
    show("check_aad L=2 / check_aad_star L=2",
         lambda: (check_aad(F, 2).label, check_aad_star(F, 2).label))
    code = build_coset_code(F)
    show("k, N, n_total, t", lambda: (code.k, code.N, code.n_total, code.t))
    show("check_mL_strong m=7 L=2", lambda: check_mL_strong(code.matrix, code.services, 7, 2).label)
    show("check_batch t=4 on the coset code", lambda: check_batch(code.matrix, 4).label)

    print("# incidence graphs")
    for name, g, L in (("Heawood", generate_pg_incidence(2), 2), ("Tutte-Coxeter", generate_gq22_incidence(), 1)):
        pair = build_graph_code(g)
        show(f"{name}: girth, code shape", lambda: (girth(g), pair.code.shape))
        show(f"{name}: conditions (3,{L}), C4-free form",
             lambda: (check_graph_conditions(g, 3, L).label, check_c4free_conditions(g, 3, L).label))
        show(f"{name}: edge services (3,{L})-strong",
             lambda: check_mL_strong(pair.code, pair.services, 3, L).label)
        show(f"{name}: conditions (3,1)", lambda: check_graph_conditions(g, 3, 1).label)


if __name__ == "__main__":
    main()
