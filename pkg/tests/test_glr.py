import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from poset_dim_lab import (EXAMPLE_GLR_9_2_3, DomainError, GLRArray, InputError, PosetFormatError, construct_glr,
                           glr_counting_feasible, loads_glr_csv, max_glr_depth, validate_glr)
from poset_dim_lab.glr import CONDITIONS, cell_size_bound, counting_depth_cap, parse_glr_csv

EXAMPLE = np.array(EXAMPLE_GLR_9_2_3)

# f(m, r) charted by max_glr_depth with its default budget and frozen here;
# every value is a proven maximum (the search was not exhausted)
DEPTHS = {(3, 1): 2, (4, 1): 3, (5, 1): 3, (7, 1): 4, (10, 1): 4, (4, 2): 2, (7, 2): 3, (9, 2): 3,
          (8, 3): 2, (4, 4): 1, (6, 4): 2}


def test_example_validates():
    assert validate_glr(EXAMPLE, 9).ok
    R = GLRArray.from_entries(EXAMPLE, 9)
    assert (R.m, R.r, R.s) == (9, 2, 3)
    # a GLR need not split into permutation blocks; this one does not
    assert not R.is_resolvable()


def test_example_column_one_repeat():
    bad = EXAMPLE.copy()
    bad[2, 0] = 1
    report = validate_glr(bad, 9)
    assert not report.ok
    v = next(v for v in report.violations if v.condition == 2)
    assert v.column == 0 and v.name == "column-distinct"


@pytest.mark.parametrize("col", range(18))
def test_row_copy_perturbations(col):
    bad = EXAMPLE.copy()
    bad[2, col] = bad[0, col]
    report = validate_glr(bad, 9)
    want = oracles.glr_conditions(bad.tolist(), 9)
    assert not report.ok
    assert report.conditions == want
    assert 2 in report.conditions


@given(st.integers(0, 2), st.integers(0, 17), st.integers(1, 9))
def test_any_single_cell_change_matches_oracle(row, col, val):
    arr = EXAMPLE.copy()
    arr[row, col] = val
    assert validate_glr(arr, 9).conditions == oracles.glr_conditions(arr.tolist(), 9)


def test_trivial_glr():
    assert validate_glr([list(range(1, 8))], 7).ok


def test_validate_input_errors():
    with pytest.raises(InputError):
        validate_glr([[0, 1]], 2)
    with pytest.raises(InputError):
        validate_glr([[1, 2, 3]], 2)
    with pytest.raises(DomainError):
        GLRArray.from_entries([[1, 1]], 2)


def test_below_pairs_are_distinct():
    R = GLRArray.from_entries(EXAMPLE, 9)
    pairs = R.below_pairs()
    assert len(pairs) == len(set(pairs)) == 18 * 3


def test_counting_feasibility():
    assert not glr_counting_feasible(9, 2, 4)
    assert glr_counting_feasible(9, 2, 3)
    assert all(glr_counting_feasible(m, r, 1) for m in range(1, 10) for r in range(1, 5))
    assert counting_depth_cap(9, 2) == 3


@pytest.mark.parametrize("m, r, s", [(100, 2, 2), (60, 1, 3), (7, 3, 1), (55, 3, 3)])
def test_construct_examples(m, r, s):
    R = construct_glr(m, r, s)
    assert validate_glr(R.entries, m).ok and R.is_resolvable()
    assert R.entries.shape == (s, r * m)


def test_single_row_is_identity_blocks():
    R = construct_glr(5, 3, 1)
    assert R.entries.tolist() == [[1, 2, 3, 4, 5] * 3]


def test_construct_is_deterministic():
    assert construct_glr(40, 2, 2) == construct_glr(40, 2, 2)


def test_construct_sweep_small():
    for s in (2, 3):
        for r in (1, 2, 3):
            for m in range(2 * r * s ** 3 + 1, 2 * r * s ** 3 + 25, 4):
                assert validate_glr(construct_glr(m, r, s).entries, m).ok


def test_cell_size_bound_at_least_half_in_guaranteed_regime():
    for s in range(2, 6):
        for r in range(1, 5):
            m = 2 * r * s ** 3 + 1
            assert cell_size_bound(m, r, s) >= m / 2


def test_best_effort_outside_regime():
    R = construct_glr(9, 2, 3, retries=64)  # 9 < 2*2*27, best effort
    assert validate_glr(R.entries, 9).ok
    with pytest.raises(DomainError):
        construct_glr(9, 2, 4, retries=4)
    with pytest.raises(DomainError):
        construct_glr(3, 1, 4)
    with pytest.raises(InputError):
        construct_glr(0, 1, 1)


@pytest.mark.parametrize("mr, value", sorted(DEPTHS.items()))
def test_frozen_depths(mr, value):
    res = max_glr_depth(*mr)
    assert res.value == value and not res.exhausted
    assert 1 <= res.value <= res.counting_cap
    assert validate_glr(res.witness.entries, mr[0]).ok
    assert not glr_counting_feasible(mr[0], mr[1], res.counting_cap + 1)


def test_depth_limits():
    with pytest.raises(InputError):
        max_glr_depth(30, 1)
    res = max_glr_depth(1, 1)
    assert res.value == 1


def test_depth_budget_gives_lower_bound():
    res = max_glr_depth(11, 2, budget=50)
    assert res.exhausted and 2 <= res.value <= res.counting_cap


def test_csv_roundtrip_and_layout():
    R = GLRArray.from_entries(EXAMPLE, 9)
    text = R.to_csv()
    assert text.splitlines()[0] == "9,2,3"
    assert loads_glr_csv(text) == R
    assert loads_glr_csv("m,r,s\n" + text) == R


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("a,b,c\n", 1),
    ("2,1,1\n", 2),
    ("2,1,1\n1,x\n", 2),
    ("2,1,1\n1,2,1\n", 2),
    ("2,1,2\n1,2\n", 3),
])
def test_csv_errors(text, line):
    with pytest.raises(PosetFormatError) as err:
        parse_glr_csv(text)
    assert err.value.lineno == line


def test_condition_names():
    assert CONDITIONS == {1: "row-multiplicity", 2: "column-distinct", 3: "below-pair-unique"}
