"""Linear batch codes: recovery sets, serving models and constructions."""

from __future__ import annotations

from .aad import Subspace, SubspaceFamily, build_coset_code, check_aad, check_aad_star, min_L_star
from .batch import check_batch, serve_batch
from .gf import GFMatrix, rank, solve_in_span, span_contains
from .graphs import BipartiteGraph, build_graph_code, check_c4free_conditions, check_graph_conditions
from .hierarchy import hierarchy_scan
from .histories import HistoryCollection, check_asynchronous, check_online
from .recovery import RecoveryIndex, RecoverySet, enumerate_minimal, is_minimal, is_recovery_set
from .strong import Service, check_mL_strong, check_strongly_async, search_best_mL
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "GFMatrix",
    "rank",
    "solve_in_span",
    "span_contains",
    "RecoveryIndex",
    "RecoverySet",
    "enumerate_minimal",
    "is_minimal",
    "is_recovery_set",
    "check_batch",
    "serve_batch",
    "HistoryCollection",
    "check_online",
    "check_asynchronous",
    "Service",
    "check_strongly_async",
    "check_mL_strong",
    "search_best_mL",
    "Subspace",
    "SubspaceFamily",
    "check_aad",
    "check_aad_star",
    "min_L_star",
    "build_coset_code",
    "BipartiteGraph",
    "check_graph_conditions",
    "check_c4free_conditions",
    "build_graph_code",
    "hierarchy_scan",
    "Verdict",
]
