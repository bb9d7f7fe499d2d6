"""Core arithmetic: monomials, windows, series ring operations."""

import random
from fractions import Fraction

import pytest

from qtheta import (
    EvalContext,
    Monomial,
    NotInvertible,
    OutOfWindow,
    Series,
    Window,
    coeff_at,
    equal_on_window,
    first_difference,
    invert,
    mono,
)


def test_monomial_algebra():
    m = mono(Fraction(2, 3), 1, 2, 0)
    assert m.times(mono(3, 1)).coef == 2
    assert m.q_shift(4).e_q == 5
    assert m.power(2) == mono(Fraction(4, 9), 2, 4, 0)
    assert m.power(0) == mono(1)
    inv = m.inverse()
    assert m.times(inv) == mono(1)
    assert mono(1, 1, 1, 0).weight(2) == 3
    assert mono(0, 5, 5, 5) == mono(0)  # canonical zero


def test_window_contains_and_intersect():
    w = Window(0, 10, 0, 3, 0, 3, tilt=2)
    assert w.contains(4, 1, 2)  # weight 4 + 2*3 = 10
    assert not w.contains(5, 1, 2)  # weight 11 > 10
    assert not w.contains(2, 4, 0)  # a degree out of range
    w2 = Window(-2, 8, 0, 2, 0, 5, tilt=2)
    inter = w.intersect(w2)
    assert inter == Window(-2, 8, 0, 2, 0, 3, tilt=2)
    assert w.plain_q_hi() == 10 - 2 * 6


def test_series_construction_filters_window():
    w = Window(0, 5)
    s = Series({(2, 0, 0): 7, (9, 0, 0): 1, (3, 0, 0): 0}, w)
    assert s.terms == {(2, 0, 0): 7}


def test_add_sub_neg():
    ctx = EvalContext.univariate(10)
    s = ctx.series(mono(3, 2)) + ctx.series(mono(5, 4))
    t = s - ctx.series(mono(3, 2))
    assert t.terms == {(4, 0, 0): 5}
    assert (-t).terms == {(4, 0, 0): -5}


def _random_poly(rng, n_terms, q_hi):
    return {
        (rng.randint(0, q_hi), 0, 0): Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        for _ in range(n_terms)
    }


def _brute_mul(t1, t2):
    out = {}
    for (e1, _, _), c1 in t1.items():
        for (e2, _, _), c2 in t2.items():
            k = (e1 + e2, 0, 0)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def test_mul_matches_bruteforce():
    rng = random.Random(7)
    w = Window(0, 60)
    for _ in range(30):
        t1 = _random_poly(rng, 6, 15)
        t2 = _random_poly(rng, 6, 15)
        s = Series(dict(t1), w) * Series(dict(t2), w)
        expect = _brute_mul(
            {k: v for k, v in t1.items() if v},
            {k: v for k, v in t2.items() if v},
        )
        for key, v in expect.items():
            assert s.terms.get(key, 0) == v
        for key in s.terms:
            assert s.terms[key] == expect.get(key, 0)


def test_mul_one_minus_matches_definition():
    ctx = EvalContext.symbolic(12, ab_degree_cap=4)
    s = ctx.one() + ctx.series(mono(2, 1, 1, 0)) + ctx.series(mono(-1, 3, 0, 2))
    for m in (mono(1, 1), mono(1, 0, 1, 0), mono(-2, 2, 1, 1), mono(1, -1, 1, 0)):
        fused = s.mul_one_minus(m)
        generic = s - s.mul_monomial(m)
        assert first_difference(fused, generic) is None


def test_div_one_minus_roundtrip():
    ctx = EvalContext.symbolic(14, ab_degree_cap=5)
    s = ctx.one() + ctx.series(mono(3, 2)) + ctx.series(mono(1, 1, 1, 1))
    for m in (
        mono(1, 1),
        mono(1, 3),
        mono(1, 0, 1, 0),
        mono(-1, 2, 1, 1),
        mono(Fraction(2, 3), 1, 0, 1),
    ):
        q = s.div_one_minus(m)
        back = q.mul_one_minus(m)
        assert first_difference(back, s) is None


def test_div_by_constant_monomial():
    ctx = EvalContext.univariate(10)
    s = ctx.series(mono(6, 2))
    q = s.div_one_minus(mono(Fraction(1, 3)))
    assert q.terms == {(2, 0, 0): 9}
    with pytest.raises(NotInvertible):
        s.div_one_minus(mono(1))


def test_invert_roundtrip():
    ctx = EvalContext.univariate(15)
    s = ctx.one() + ctx.series(mono(-3, 1)) + ctx.series(mono(2, 4))
    inv = invert(s)
    assert equal_on_window(s * inv, ctx.one())


def test_invert_laurent_pivot():
    w = Window(-5, 10)
    s = Series({(-2, 0, 0): Fraction(1, 2), (1, 0, 0): 3}, w)
    inv = invert(s)
    prod = s * inv
    assert prod.terms.get((0, 0, 0)) == 1
    for key, v in prod.terms.items():
        if key != (0, 0, 0):
            assert v == 0


def test_coeff_at_and_out_of_window():
    ctx = EvalContext.univariate(8)
    s = ctx.series(mono(5, 3))
    assert coeff_at(s, 3) == 5
    assert coeff_at(s, 4) == 0
    with pytest.raises(OutOfWindow):
        coeff_at(s, 10**6)


def test_first_difference_orders_keys():
    w = Window(0, 10, 0, 2, 0, 2, tilt=0)
    s1 = Series({(1, 0, 0): 1, (2, 1, 0): 4}, w)
    s2 = Series({(1, 0, 0): 1, (2, 0, 1): 4}, w)
    key, lhs, rhs = first_difference(s1, s2)
    assert key == (2, 0, 1)
    assert (lhs, rhs) == (0, 4)
    assert first_difference(s1, s1) is None


def test_window_certification_shrinks_under_mul():
    # multiplying by a series only known to weight 5 cannot certify weight 10
    w_full = Window(0, 10)
    w_small = Window(0, 5)
    s1 = Series({(0, 0, 0): 1}, w_full)
    s2 = Series({(0, 0, 0): 1, (1, 0, 0): 1}, w_small)
    prod = s1 * s2
    assert prod.window.q_hi == 5
