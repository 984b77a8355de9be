from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unsharp import interval as ir
from unsharp import oracles
from unsharp.errors import NotDirected, SchemaError, Unbounded

I = ir.interval


def test_leq_examples():
    assert ir.leq(I(0, 2), I(1, 2))
    assert not ir.leq(I(0, 1), I(2, 3))


def test_way_below_examples():
    assert ir.way_below(I(0, 3), I(1, 2))
    assert not ir.way_below(I(0, 2), I(0, 1))
    assert not ir.way_below(I(1, 1), I(1, 1))


def test_sup_directed_examples():
    assert ir.sup_directed([I(0, 3), I(1, 3), I(1, "5/2")]) == I(1, F(5, 2))
    assert ir.sup_directed([I(0, 1)]) == I(0, 1)
    with pytest.raises(NotDirected):
        ir.sup_directed([I(0, 1), I(2, 3)])
    with pytest.raises(NotDirected):
        ir.sup_directed([])


def test_sup_bounded_examples():
    assert ir.sup_bounded([I(0, 2), I(1, 3)]) == I(1, 2)
    assert ir.sup_bounded([I(1, 1), I(0, 2)]) == I(1, 1)
    with pytest.raises(Unbounded):
        ir.sup_bounded([I(0, 1), I(2, 3)])
    with pytest.raises(Unbounded):
        ir.sup_bounded([])
    assert ir.sup_bounded([], lifted=True) is ir.BOT


def test_meet_examples():
    assert ir.meet(I(0, 1), I(2, 3)) == I(0, 3)
    assert ir.meet(I(0, 3), I(1, 2)) == I(0, 3)


def test_scott_basic_member():
    assert ir.scott_basic_member(I(1, 2), I(0, 3))
    assert not ir.scott_basic_member(I(0, 2), I(0, 3))
    w = I(0, 1)
    for q, inside in ((F(1, 2), True), (F(0), False), (F(1), False), (F(2), False)):
        assert ir.scott_basic_member(ir.embed_real(q), w) == inside


def test_embed_real():
    q = F(3, 7)
    assert ir.embed_real(0) == I(0, 0)
    assert ir.leq(I(q - 1, q + 1), ir.embed_real(q))
    assert not ir.way_below(ir.embed_real(q), ir.embed_real(q))


def test_bottom():
    assert ir.leq(ir.BOT, I(0, 1))
    assert ir.way_below(ir.BOT, I(0, 1))
    assert ir.way_below(ir.BOT, ir.BOT)
    assert not ir.leq(I(0, 1), ir.BOT)
    assert ir.sup_bounded([ir.BOT, I(0, 1)]) == I(0, 1)
    assert ir.meet(ir.BOT, I(0, 1)) is ir.BOT


def test_parsing_and_json():
    assert ir.interval("0.25", "1/2") == I(F(1, 4), F(1, 2))
    with pytest.raises(SchemaError):
        ir.to_fraction(True)
    with pytest.raises(SchemaError):
        ir.to_fraction("abc")
    with pytest.raises(ValueError):
        I(2, 1)
    for x in (I(F(-1, 3), 2), ir.BOT):
        assert ir.from_json(ir.to_json(x)) == x
    with pytest.raises(SchemaError):
        ir.from_json({"lo": "2", "hi": "1"})


def test_approximating_chain():
    y = I(F(1, 3), F(2, 3))
    k = 20
    chain = ir.approximating_chain(y, k)
    assert all(ir.way_below(x, y) for x in chain)
    assert all(ir.leq(a, b) for a, b in zip(chain, chain[1:]))
    last = ir.sup_directed(chain)
    assert y.lo - last.lo == F(1, k) and last.hi - y.hi == F(1, k)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def intervals(draw):
    a, b = draw(rationals), draw(rationals)
    return ir.RatInterval(min(a, b), max(a, b))


@settings(max_examples=300)
@given(intervals(), intervals())
def test_way_below_implies_leq_and_interpolates(x, y):
    if ir.way_below(x, y):
        assert ir.leq(x, y)
        z = ir.interpolant(x, y)
        assert ir.way_below(x, z) and ir.way_below(z, y)


@settings(max_examples=200)
@given(intervals(), intervals(), intervals())
def test_meet_laws(x, y, z):
    assert ir.meet(x, y) == ir.meet(y, x)
    assert ir.meet(x, x) == x
    assert ir.meet(ir.meet(x, y), z) == ir.meet(x, ir.meet(y, z))
    m = ir.meet(x, y)
    assert ir.leq(m, x) and ir.leq(m, y)
    # greatest: any common lower bound sits below the meet
    lower = ir.RatInterval(min(x.lo, y.lo) - 1, max(x.hi, y.hi))
    assert ir.leq(lower, m)


@settings(max_examples=200)
@given(st.lists(intervals(), min_size=1, max_size=5))
def test_sup_directed_is_least_upper_bound(fam):
    lub = oracles.interval_lub_brute(fam)
    if lub is None:
        with pytest.raises(NotDirected):
            ir.sup_directed(fam)
    else:
        assert ir.sup_directed(fam) == lub
        assert ir.sup_bounded(fam) == lub


@settings(max_examples=200)
@given(intervals())
def test_no_compact_elements(x):
    assert not ir.way_below(x, x)
