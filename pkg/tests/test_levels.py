import pytest
from hypothesis import given, strategies as st

from labskit.core import BinarySequence, autocorrelation, decompose_energy, deviation, e_min
from labskit.levels import (
    CSV_COLUMNS,
    build_level_table,
    expected_minus_range,
    level_pair_minus_count,
    level_products,
    level_theoretical_max,
)

from conftest import X4, X5, X7, X10, X11, X13, all_sequences


def seq(x):
    return BinarySequence.from_elements(x)


def test_level_products_examples():
    assert level_products(seq(X13), 5) == [-1, -1, 1, 1, -1, -1, 1, 1]
    assert level_products(seq(X4), 1) == [1, 1, -1]
    x = seq(X10)
    assert level_products(x, 9) == [X10[0] * X10[-1]]


def test_level_products_table_rows():
    # rows R_1 and R_12 of the length-13 table, R_2 and R_4 of the length-10 table
    assert level_products(seq(X13), 1) == [1, 1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1]
    assert level_products(seq(X13), 12) == [1]
    assert level_products(seq(X10), 2) == [1, 1, 1, -1, -1, -1, 1, 1]
    assert level_products(seq(X10), 4) == [1, -1, -1, 1, -1, -1]


@pytest.mark.parametrize("k", [0, 4, -1])
def test_level_products_range(k):
    with pytest.raises(IndexError):
        level_products(seq(X4), k)


@pytest.mark.parametrize("nk,length,expected", [(4, 9, 20), (0, 7, 0), (3, 6, 9)])
def test_pair_minus_count(nk, length, expected):
    assert level_pair_minus_count(nk, length) == expected


@pytest.mark.parametrize("length,expected", [(12, 36), (11, 30), (1, 0)])
def test_theoretical_max(length, expected):
    assert level_theoretical_max(length) == expected


@pytest.mark.parametrize("length,expected", [(12, (6, 6)), (11, (5, 6)), (1, (0, 1))])
def test_expected_range(length, expected):
    assert expected_minus_range(length) == expected


@given(st.integers(1, 500))
def test_theoretical_max_is_best_split(length):
    best = max(level_pair_minus_count(j, length) for j in range(length + 1))
    assert level_theoretical_max(length) == best
    lo, hi = expected_minus_range(length)
    assert level_pair_minus_count(lo, length) == best == level_pair_minus_count(hi, length)


def test_table_x13():
    t = build_level_table(seq(X13))
    assert [r.deviation for r in t.rows] == [0] * 12
    assert t.total_deviation == 0
    # minus-count column of the length-13 table
    assert [r.minus_count for r in t.rows] == [6, 5, 5, 4, 4, 3, 3, 2, 2, 1, 1, 0]


def test_table_x10():
    t = build_level_table(seq(X10))
    assert [r.deviation for r in t.rows] == [0, 1, 0, 1, 0, 0, 0, 0, 0]
    assert t.total_deviation == 2
    assert [r.minus_count for r in t.rows] == [4, 3, 3, 4, 3, 2, 1, 1, 0]
    assert [r.actual_pair_minus for r in t.rows] == [20, 15, 12, 8, 6, 4, 2, 1, 0]
    assert t.total_pair_minus == 68


def test_table_x4():
    t = build_level_table(seq(X4))
    assert [r.deviation for r in t.rows] == [0, 0, 0]
    assert [r.minus_count for r in t.rows] == [1, 1, 1]


def test_table_x11_minus_counts():
    t = build_level_table(seq(X11))
    assert [r.minus_count for r in t.rows] == [5, 5, 4, 4, 3, 3, 2, 2, 1, 1]


def test_table_x7_recomputed():
    # the printed length-7 tables repeat the length-5 rows; recompute instead
    t = build_level_table(seq(X7))
    assert len(t.rows) == 6
    assert t.total_deviation == 0
    assert [r.length for r in t.rows] == [6, 5, 4, 3, 2, 1]
    assert build_level_table(seq(X5)).total_deviation == 0


def test_csv_layout():
    lines = build_level_table(seq(X13)).to_csv().splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(CSV_COLUMNS) == 7
    assert lines[1] == "1,12,6,36,6,36,0"
    assert lines[2] == "2,11,5-6,30,5,30,0"
    assert lines[12] == "12,1,0-1,0,0,0,0"


def test_exhaustive_level_identities():
    for n in range(2, 13):
        for x in all_sequences(n):
            s = seq(x)
            t = build_level_table(s)
            d = decompose_energy(s)
            assert t.total_pair_minus == d.n
            assert t.total_deviation == (d.energy - e_min(n)) // 4
            prof = autocorrelation(s)
            for row, r in zip(t.rows, prof.lags):
                assert row.r_value == r == sum(row.products)
                assert row.minus_count == ((n - row.lag) - r) // 2
                assert row.deviation >= 0


def test_zero_deviation_lengths():
    hits = set()
    for n in range(2, 14):
        for x in all_sequences(n):
            if x[0] == -1:
                continue  # negation leaves the table unchanged
            if build_level_table(seq(x)).total_deviation == 0:
                hits.add(n)
                break
    assert hits == {2, 3, 4, 5, 7, 11, 13}


def test_total_matches_energy_deviation():
    for x in (X4, X5, X7, X10, X11, X13):
        s = seq(x)
        assert build_level_table(s).total_deviation == deviation(s.n, autocorrelation(s).energy)
