import json
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import posets
from poset_dim_lab import (DomainError, InputError, SampleConfig, Witness, balanced_clique_number,
                           balanced_independence_number, count_balanced_clique_pairs,
                           count_balanced_indep_pairs_size2, count_standard_examples, defect, make_poset,
                           max_incomparability_matching, min_maximal_matching, sample_poset, standard_example,
                           standard_example_greedy, standard_example_number)
from poset_dim_lab.metrics import compatibility_graph
from poset_dim_lab.poset import empty_order, full_order


# --- maximum matching --------------------------------------------------------

def test_matching_small_cases():
    assert max_incomparability_matching(standard_example(2)).size == 2
    assert max_incomparability_matching(full_order(5)).size == 0
    assert max_incomparability_matching(full_order(5), [0, 1], [2, 3]).size == 0


def test_matching_against_enumeration_n10():
    P = sample_poset(SampleConfig(10, 0.5, 17))
    M = max_incomparability_matching(P)
    rel = oracles.as_table(P)
    # recursive enumeration restricted to a 7x7 corner keeps the oracle fast
    sub = list(range(7))
    assert max_incomparability_matching(P, sub, sub).size == oracles.max_matching(rel, sub, sub)
    assert M.is_valid(P) and M.is_maximal(P)
    assert M.size == len(M.cover[0]) + len(M.cover[1])


@given(posets(max_n=5), st.data())
def test_matching_is_maximum_with_konig_cover(P, data):
    n = P.n
    S = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    S2 = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    M = max_incomparability_matching(P, S, S2)
    assert M.is_valid(P)
    assert all(i in S and j in S2 for i, j in M.edges)
    assert M.size == oracles.max_matching(oracles.as_table(P), S, S2)
    left, right = M.cover
    assert len(left) + len(right) == M.size
    for i in S:
        for j in S2:
            if not P.rel[i, j]:
                assert i in left or j in right


# --- defect ---------------------------------------------------------------------

def test_defect_examples():
    assert defect(standard_example(2), [0, 1], [0, 1]) == 0
    assert defect(full_order(5), [0, 1, 2], [2, 3, 4]) == 3


def test_defect_errors():
    with pytest.raises(InputError):
        defect(standard_example(3), [0, 1], [0])
    with pytest.raises(InputError):
        defect(standard_example(3), [], [])


@given(posets(max_n=5), st.data())
def test_defect_identity(P, data):
    s = data.draw(st.integers(1, P.n))
    S = data.draw(st.lists(st.integers(0, P.n - 1), min_size=s, max_size=s, unique=True))
    S2 = data.draw(st.lists(st.integers(0, P.n - 1), min_size=s, max_size=s, unique=True))
    assert defect(P, S, S2) == s - oracles.max_matching(oracles.as_table(P), S, S2)


def test_defect_sampled_within_bound():
    for seed in range(50):
        P = sample_poset(SampleConfig(128, 0.7, seed))
        assert defect(P, range(128), range(128)) <= 80


# --- minimum maximal matching ------------------------------------------------------

@pytest.mark.parametrize("P, size", [(standard_example(2), 2), (empty_order(2), 2), (standard_example(4), 4)])
def test_mmm_examples(P, size):
    M = min_maximal_matching(P)
    assert M.size == size and M.optimal and M.is_maximal(P)


def test_mmm_needs_incomparable_pair():
    with pytest.raises(DomainError):
        min_maximal_matching(full_order(3))
    with pytest.raises(InputError):
        min_maximal_matching(standard_example(2), mode="fast")


@given(posets(max_n=4))
def test_mmm_exact_matches_oracle(P):
    if P.num_incomparable() == 0:
        return
    M = min_maximal_matching(P)
    assert M.is_valid(P) and M.is_maximal(P)
    assert M.size == oracles.min_maximal_matching(oracles.as_table(P))


def test_heuristic_never_beats_exact():
    for seed in range(40):
        n = 6 + seed % 7
        P = sample_poset(SampleConfig(n, 0.8, seed))
        if P.num_incomparable() == 0:
            continue
        h = min_maximal_matching(P, mode="heuristic", trials=16, seed=seed)
        e = min_maximal_matching(P, mode="exact", edge_cap=200)
        assert h.is_maximal(P) and e.is_maximal(P)
        assert h.size >= e.size
        assert not h.optimal


def test_exact_falls_back_above_cap():
    P = sample_poset(SampleConfig(12, 0.3, 0))
    M = min_maximal_matching(P, mode="exact")
    assert P.num_incomparable() > 64
    assert not M.optimal and M.is_maximal(P)


# --- balanced bicliques ------------------------------------------------------------

def test_bcn_examples():
    assert balanced_clique_number(empty_order(3))[0] == 0
    assert balanced_clique_number(standard_example(3))[0] == 1
    assert balanced_clique_number(full_order(5))[0] == 5


def test_bin_examples():
    for d in range(2, 6):
        assert balanced_independence_number(standard_example(d))[0] == 1
    assert balanced_independence_number(empty_order(4))[0] == 4
    assert balanced_independence_number(full_order(3))[0] == 0


@given(posets(max_n=5))
def test_balanced_numbers_match_oracle(P):
    rel = oracles.as_table(P)
    b, wb = balanced_clique_number(P)
    i, wi = balanced_independence_number(P)
    assert b == oracles.bcn(rel) and i == oracles.bin_(rel)
    assert wb.verify(P) and wi.verify(P)
    assert not wb.exhausted and not wi.exhausted


@given(posets(max_n=6))
def test_greedy_modes_are_lower_bounds(P):
    for fn in (balanced_clique_number, balanced_independence_number):
        g, w = fn(P, mode="greedy")
        assert g <= fn(P)[0] and w.verify(P) and w.exhausted


def test_node_budget_flags_lower_bound():
    P = sample_poset(SampleConfig(40, 0.5, 1))
    v, w = balanced_clique_number(P, node_limit=3)
    assert w.exhausted and w.verify(P)
    assert v <= balanced_clique_number(P)[0]


# --- standard examples ----------------------------------------------------------------

def test_se_examples():
    assert standard_example_number(standard_example(5))[0] == 5
    assert standard_example_number(full_order(4))[0] == 1
    assert standard_example_number(empty_order(3))[0] == 1


@given(posets(max_n=5))
def test_se_matches_oracle_and_bcn_bound(P):
    se, w = standard_example_number(P)
    assert se == oracles.se(oracles.as_table(P))
    assert w.verify(P)
    assert se <= 2 * balanced_clique_number(P)[0] + 1


def test_se_bcn_inequality_sampled():
    for seed in range(30):
        P = sample_poset(SampleConfig(14, 0.6, seed))
        assert standard_example_number(P)[0] <= 2 * balanced_clique_number(P)[0] + 1


@given(posets(max_n=6), st.integers(0, 10))
def test_greedy_se_is_lower_bound(P, seed):
    g, w = standard_example_greedy(P, restarts=4, seed=seed)
    assert w.verify(P) or w.size == 0
    assert g <= standard_example_number(P)[0]


def test_compatibility_graph_is_symmetric():
    P = sample_poset(SampleConfig(7, 0.5, 4))
    pairs, adj = compatibility_graph(P)
    for u, (a, b) in enumerate(pairs):
        assert not adj[u] >> u & 1
        for v, (c, d) in enumerate(pairs):
            assert (adj[u] >> v & 1) == (adj[v] >> u & 1) == (P.rel[a, d] and P.rel[c, b])


# --- counting ----------------------------------------------------------------------------

def test_count_examples():
    assert count_balanced_indep_pairs_size2(empty_order(2)) == 1
    assert count_balanced_indep_pairs_size2(standard_example(4)) == 0
    assert count_balanced_clique_pairs(full_order(4), 2) == comb(4, 2) ** 2


@given(posets(max_n=5))
def test_counts_match_oracle(P):
    rel = oracles.as_table(P)
    assert count_balanced_indep_pairs_size2(P) == oracles.indep2(rel)
    for r in (1, 2, 3):
        assert count_balanced_clique_pairs(P, r) == oracles.clique_pairs(rel, r)
    for d in (2, 3):
        assert count_standard_examples(P, d) == oracles.standard_example_copies(rel, d)


def test_indep2_mean_matches_expectation():
    vals = [count_balanced_indep_pairs_size2(sample_poset(SampleConfig(64, 0.6, s))) for s in range(500)]
    se = np.std(vals, ddof=1) / np.sqrt(len(vals))
    assert abs(np.mean(vals) - comb(64, 2) ** 2 * 0.4 ** 4) <= 3 * se


# --- witnesses ------------------------------------------------------------------------------

def test_witness_json_is_one_based():
    w = Witness("standard-example", (0, 2), (0, 2), 2)
    d = json.loads(w.to_json())
    assert d == {"kind": "standard-example", "left": [1, 3], "right": [1, 3], "size": 2}
    assert Witness.from_dict(d) == w


def test_witness_rejects_bad_kind_and_bad_certificates():
    with pytest.raises(InputError):
        Witness("clique", (), (), 0)
    P = standard_example(3)
    assert not Witness("clique-pair", (0,), (0,), 1).verify(P)
    assert not Witness("standard-example", (0, 1), (1, 0), 2).verify(P)
    assert Witness("standard-example", (0, 1), (0, 1), 2).verify(P)
    assert not Witness("matching", (0, 0), (0, 1), 2).verify(P)


def test_matching_witness():
    M = max_incomparability_matching(standard_example(3))
    assert M.witness().verify(standard_example(3))
    assert len(M) == 3
    P = make_poset(2, [[False, False], [True, True]])
    assert max_incomparability_matching(P).size == 1
