import math

import pytest

from stablerank.lattice import (
    ExtNat,
    INF,
    ONE,
    RankInterval,
    RankKind,
    apply_matrix_map,
    clamp,
    en,
    invert_matrix_map,
    matrix_map_value,
    meet,
)


def test_extnat_basics():
    assert en(1) == ONE
    assert en(math.inf) == INF
    assert INF.is_inf
    assert not en(3).is_inf
    assert en(3).finite == 3
    with pytest.raises(ValueError):
        ExtNat(0)
    with pytest.raises(ValueError):
        ExtNat(-2)
    with pytest.raises(ValueError):
        INF.finite


def test_extnat_order_total():
    values = [en(1), en(2), en(5), INF]
    for i, a in enumerate(values):
        for j, b in enumerate(values):
            assert (a < b) == (i < j)
            assert (a == b) == (i == j)
    assert max(values) is values[-1]


def test_extnat_successor_and_shift():
    assert en(3).succ() == en(4)
    assert INF.succ() == INF
    assert en(1).pred_clamped() == en(1)
    assert en(4).pred_clamped() == en(3)
    assert INF.pred_clamped() == INF
    assert en(2).shifted(3) == en(5)
    assert INF.shifted(7) == INF


def test_extnat_json_roundtrip():
    for v in (en(1), en(17), INF):
        assert ExtNat.from_json(v.to_json()) == v
    assert INF.to_json() == "inf"
    with pytest.raises(ValueError):
        ExtNat.from_json("nope")


def test_interval_constructors_and_meet():
    top = RankInterval.top()
    assert top.is_top and not top.is_exact
    exact = RankInterval.exact(en(3))
    assert exact.is_exact and exact.contains(en(3))
    assert not exact.contains(en(2))
    assert meet(RankInterval.at_least(en(2)), RankInterval.at_most(en(5))) == \
        RankInterval(en(2), en(5))
    assert meet(RankInterval.at_least(en(4)), RankInterval.at_most(en(2))) is None
    with pytest.raises(ValueError):
        RankInterval(en(3), en(2))


def test_matrix_map_values():
    # f_n(r) = ceil((r - 1)/n) + 1
    assert matrix_map_value(en(1), 3) == en(1)
    assert matrix_map_value(en(4), 3) == en(2)
    assert matrix_map_value(en(5), 3) == en(3)
    assert matrix_map_value(INF, 3) == INF
    assert apply_matrix_map(RankInterval(en(2), en(7)), 3) == \
        RankInterval(en(2), en(3))


def test_matrix_map_preimage_roundtrip():
    for n in (1, 2, 3, 5):
        for r in list(range(1, 41)) + [math.inf]:
            r = en(r)
            v = matrix_map_value(r, n)
            pre = invert_matrix_map(RankInterval.exact(v), n)
            assert pre.contains(r)
            # the preimage is exactly the set mapping to v
            if not pre.lo.is_inf:
                below = pre.lo.finite - 1
                if below >= 1:
                    assert matrix_map_value(en(below), n) < v


def test_clamp():
    cap = 8
    assert clamp(RankInterval(en(2), en(5)), cap) == RankInterval(en(2), en(5))
    assert clamp(RankInterval(en(9), en(12)), cap) == RankInterval(en(8), INF)
    assert clamp(RankInterval(en(3), en(9)), cap) == RankInterval(en(3), INF)
    assert clamp(RankInterval(INF, INF), cap) == RankInterval(INF, INF)


def test_rank_kinds():
    assert [k.value for k in RankKind] == ["bsr", "tsr", "csr", "gsr"]

# ------------------------------------------------------ property tests

from hypothesis import given, strategies as st

extnats = st.one_of(st.integers(min_value=1, max_value=200).map(en),
                    st.just(INF))


@given(extnats, extnats, st.integers(min_value=1, max_value=6))
def test_matrix_map_monotone(a, b, n):
    if a <= b:
        assert matrix_map_value(a, n) <= matrix_map_value(b, n)


@given(extnats, st.integers(min_value=1, max_value=6))
def test_matrix_map_galois_connection(r, n):
    v = matrix_map_value(r, n)
    assert invert_matrix_map(RankInterval.exact(v), n).contains(r)


@given(extnats, extnats, st.integers(min_value=2, max_value=32))
def test_clamp_is_idempotent_and_shrinking(lo, hi, cap):
    if lo > hi:
        lo, hi = hi, lo
    interval = RankInterval(lo, hi)
    once = clamp(interval, cap)
    assert clamp(once, cap) == once
    assert once.lo >= interval.lo or once.lo == en(cap)


@given(extnats, extnats, extnats, extnats)
def test_meet_commutative(a, b, c, d):
    if a > b:
        a, b = b, a
    if c > d:
        c, d = d, c
    x, y = RankInterval(a, b), RankInterval(c, d)
    assert meet(x, y) == meet(y, x)


@given(extnats, st.integers(min_value=0, max_value=5),
       st.integers(min_value=0, max_value=5))
def test_shift_composes(v, s, t):
    assert v.shifted(s).shifted(t) == v.shifted(s + t)
