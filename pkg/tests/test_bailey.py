"""Bailey pairs: the defining relation and the L-transform."""

from fractions import Fraction

from qtheta import (
    EvalContext,
    beta_from_alpha,
    equal_on_window,
    first_difference,
    mono,
    poch_inf,
    t0_pair_1,
    t0_pair_2,
    unit_pair,
    warnaar_L_transform_sides,
)

ZERO = mono(0)


def test_unit_pair_defining_relation():
    ctx = EvalContext.univariate(20)
    pair = unit_pair(mono(Fraction(2, 5)), mono(Fraction(3, 7)))
    derived = pair.without_beta()
    for n in range(5):
        assert first_difference(derived.beta(n, ctx), pair.beta(n, ctx)) is None


def test_t0_pairs_defining_relation():
    ctx = EvalContext.univariate(20)
    for pair in (t0_pair_1(mono(Fraction(3, 4))), t0_pair_2(mono(Fraction(2, 3)))):
        for n in range(5):
            got = beta_from_alpha(pair, n, ctx)
            assert first_difference(got, pair.beta(n, ctx)) is None


def test_unit_transform_gives_triple_pochhammer():
    ctx = EvalContext.univariate(15)
    a, b = mono(Fraction(1, 3)), mono(Fraction(2, 7))
    lhs, rhs = warnaar_L_transform_sides(unit_pair(a, b), ctx, a, b)
    prod = poch_inf(mono(1, 1), ctx) * poch_inf(a.q_shift(1), ctx)
    prod = prod * poch_inf(b.q_shift(1), ctx)
    assert equal_on_window(lhs, rhs, 15)
    assert equal_on_window(rhs, prod, 15)


def test_t0_transforms_balance():
    ctx = EvalContext.univariate(15)
    a = mono(Fraction(2, 5))
    for pair in (t0_pair_1(mono(Fraction(1, 2))), t0_pair_2(mono(Fraction(3, 5)))):
        lhs, rhs = warnaar_L_transform_sides(pair, ctx, a, ZERO)
        assert equal_on_window(lhs, rhs, 15)
