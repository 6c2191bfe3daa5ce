from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from batchcodes.gf import GFMatrix
from batchcodes.hierarchy import hierarchy_scan
from oracles import random_full_rank


def test_scan_values(G73, G32, G38):
    # frozen from the individual deciders, each checked against its naive oracle
    assert [v for _, v in hierarchy_scan(G73).rows()] == [4, 3, 2, 2, 2]
    assert [v for _, v in hierarchy_scan(G32).rows()] == [2, 2, 1, 1, 1]
    assert [v for _, v in hierarchy_scan(G38).rows()] == [4, 4, 3, 3, 2]
    assert [v for _, v in hierarchy_scan(GFMatrix.identity(3)).rows()] == [1] * 5


def test_scan_reports_best_mL(G38):
    scan = hierarchy_scan(G38)
    assert scan.mL == (2, 1) and scan.limit == 5
    assert scan.is_monotone()


def test_scan_size_guard():
    with pytest.raises(ValueError):
        hierarchy_scan(GFMatrix.identity(5))


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 10**9))
def test_scan_monotone_on_random_codes(k, extra, seed):
    G = random_full_rank(random.Random(seed), k, k + extra)
    assert hierarchy_scan(G).is_monotone()
