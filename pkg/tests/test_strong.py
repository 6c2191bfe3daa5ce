from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from batchcodes.gf import GFMatrix
from batchcodes.histories import check_asynchronous
from batchcodes.recovery import RecoveryIndex
from batchcodes.strong import (
    Service,
    check_mL_strong,
    check_strongly_async,
    derive_t,
    exclusion_count,
    max_strong_t,
    mL_feasible,
    mL_parameters,
    search_best_mL,
    search_strong,
    strong_equivalence_selftest,
)
from oracles import naive_strong, random_full_rank


def test_twelve_set_collection_is_3_strong(G38, R38_sets):
    assert check_strongly_async(G38, R38_sets, 3)
    v = check_strongly_async(G38, R38_sets, 4)
    assert not v
    fam, i = v.counterexample
    assert len(fam) == 3 and i in (1, 2, 3)


def test_all_sets_of_small_code_not_2_strong(G32):
    v = check_strongly_async(G32, [(1,), (2,), (1, 3), (2, 3)], 2)
    assert not v
    assert v.counterexample in (([(1, 3)], 1), ([(2, 3)], 2))


def test_identity_singletons():
    G = GFMatrix.identity(3)
    assert check_strongly_async(G, [(1,), (2,), (3,)], 1)
    assert not check_strongly_async(G, [(1,), (2,), (3,)], 2)


def test_non_minimal_member_rejected(G32):
    with pytest.raises(ValueError):
        check_strongly_async(G32, [(1, 2)], 1)


def test_exclusion_counts(S38):
    assert exclusion_count(S38, Service.of(1, [1]), 2) == 0
    assert exclusion_count(S38, Service.of(1, [6, 7]), 2) == 2
    for s in S38:
        assert exclusion_count(S38, s, s.request) >= 1


def test_exclusion_requires_membership(S38):
    with pytest.raises(ValueError):
        exclusion_count(S38, Service.of(1, [2, 3, 4]), 1)


def test_twelve_set_collection_as_services(G38, S38):
    # settled by counting: four services per request, at most two excluded
    assert mL_parameters(S38, 3) == (4, 2)
    assert check_mL_strong(G38, S38, 4, 2)
    assert not check_mL_strong(G38, S38, 4, 1)
    assert not check_mL_strong(G38, S38, 5, 2)


def test_identity_singleton_services():
    G = GFMatrix.identity(3)
    assert check_mL_strong(G, [Service.of(i, [i]) for i in (1, 2, 3)], 1, 1)


def test_mL_strong_validates_services(G32):
    with pytest.raises(ValueError):
        check_mL_strong(G32, [Service.of(1, [3])], 1, 1)
    with pytest.raises(ValueError):
        check_mL_strong(G32, [Service.of(1, [1])], 0, 1)


def test_derive_t():
    assert derive_t(7, 2) == 4
    assert derive_t(3, 1) == 3
    assert derive_t(3, 2) == 2
    with pytest.raises(ValueError):
        derive_t(0, 1)


def test_search_on_3x8_code(G38):
    res = search_best_mL(G38)
    assert not res.admits_m_above(2)  # no collection with m >= 2L + 1
    assert (res.m, res.L, res.t) == (2, 1, 2)
    assert check_mL_strong(G38, res.services, res.m, res.L)
    for L in range(1, 5):
        assert mL_feasible(G38, 2 * L + 1, L) is None


def test_search_identity():
    res = search_best_mL(GFMatrix.identity(3))
    assert (res.m, res.L, res.t) == (1, 1, 1)
    assert sorted(s.columns for s in res.services) == [(1,), (2,), (3,)]


def test_search_size_guard(G38):
    big = GFMatrix.identity(5)
    with pytest.raises(ValueError):
        search_best_mL(big)


def test_equivalence_selftest(G38, R38_sets):
    assert strong_equivalence_selftest(G38, R38_sets, 3)
    assert strong_equivalence_selftest(G38, [], 1)


def test_search_strong(G73, G38, G32):
    assert max_strong_t(G73, 4)[0] == 2
    t, R = max_strong_t(G38, 4)
    assert t == 3 and check_strongly_async(G38, R, 3)
    assert max_strong_t(G32, 3)[0] == 1
    assert search_strong(G73, 3) is None


codes = st.tuples(st.integers(1, 3), st.integers(0, 3), st.integers(0, 10**9))


@given(codes, st.integers(1, 3), st.integers(0, 10**6))
def test_strong_matches_naive(params, t, seed):
    k, extra, s = params
    G = random_full_rank(random.Random(s), k, k + extra)
    idx = RecoveryIndex(G)
    pool = idx.all_masks()
    rng = random.Random(seed)
    from batchcodes.gf import columns_of

    R = [columns_of(m) for m in pool if rng.random() < 0.7]
    assert check_strongly_async(G, R, t, idx).holds == naive_strong(G, R, t)
    assert strong_equivalence_selftest(G, R, t, idx)


@given(codes, st.integers(1, 3))
def test_strong_implies_async(params, t):
    k, extra, s = params
    G = random_full_rank(random.Random(s), k, k + extra)
    R = search_strong(G, t)
    if R is not None:
        assert check_strongly_async(G, R, t)
        assert check_asynchronous(G, t)


@given(codes)
def test_mL_witness_implies_strong(params):
    k, extra, s = params
    G = random_full_rank(random.Random(s), k, k + extra)
    res = search_best_mL(G)
    assert check_mL_strong(G, res.services, res.m, res.L)
    assert check_strongly_async(G, [x.columns for x in res.services], res.t)


@given(codes, st.integers(0, 10**6))
def test_exclusion_relation_symmetric(params, seed):
    k, extra, s = params
    G = random_full_rank(random.Random(s), k, k + extra)
    idx = RecoveryIndex(G)
    from batchcodes.gf import columns_of

    S = [Service(i, columns_of(m)) for i in range(1, k + 1) for m in idx.minimal_masks(i)]
    for a in S:
        for b in S:
            assert a.excludes(b) == b.excludes(a)
