"""q-functions: Pochhammer symbols, theta functions, the 2phi1 series."""

import random
from fractions import Fraction

from qtheta import (
    EvalContext,
    Monomial,
    apply_poch,
    coeff_at,
    complete_theta,
    equal_on_window,
    first_difference,
    mono,
    partial_theta,
    phi21,
    poch_finite,
    poch_inf,
    psi,
    tau_monomial,
    triple_product_rhs,
)


def test_tau_monomial():
    assert tau_monomial(0) == mono(1)
    assert tau_monomial(1) == mono(-1)
    assert tau_monomial(3) == mono(-1, 3)
    assert tau_monomial(-2) == mono(1, 3)  # tau(-2) = q^3


def test_pentagonal_number_theorem():
    # (q;q)_inf = sum_k (-1)^k q^(k(3k-1)/2), k over all integers
    ctx = EvalContext.univariate(40)
    s = poch_inf(mono(1, 1), ctx)
    expect = {}
    for k in range(-10, 11):
        e = k * (3 * k - 1) // 2
        if 0 <= e <= 40:
            expect[e] = (-1) ** k
    for e in range(41):
        assert coeff_at(s, e) == expect.get(e, 0), e


def test_poch_recurrence_and_splitting():
    ctx = EvalContext.univariate(25)
    rng = random.Random(3)
    for _ in range(20):
        x = mono(Fraction(rng.randint(1, 5), rng.randint(1, 5)), rng.randint(0, 2))
        n = rng.randint(0, 5)
        m = rng.randint(0, 5)
        # (x;q)_{n+1} = (x;q)_n (1 - x q^n)
        lhs = poch_finite(x, n + 1, ctx)
        rhs = poch_finite(x, n, ctx).mul_one_minus(x.q_shift(n))
        assert first_difference(lhs, rhs) is None
        # (x;q)_{m+n} = (x;q)_m (x q^m;q)_n
        lhs = poch_finite(x, m + n, ctx)
        rhs = apply_poch(poch_finite(x, m, ctx), x.q_shift(m), n, ctx)
        assert first_difference(lhs, rhs) is None


def test_poch_negative_index_convention():
    # (x;q)_{-n} (x q^{-n};q)_n = 1
    ctx = EvalContext.univariate(20)
    for n in (1, 2, 4):
        x = mono(Fraction(2, 5), 1)
        s = poch_finite(x, -n, ctx)
        s = apply_poch(s, x.q_shift(-n), n, ctx)
        assert equal_on_window(s, ctx.one())


def test_apply_poch_inverse_roundtrip():
    ctx = EvalContext.symbolic(15, ab_degree_cap=5)
    s = ctx.one() + ctx.series(mono(2, 1, 1, 0))
    for x, n in ((ctx.gen_a(), 3), (mono(1, 1), None), (ctx.gen_b(), None)):
        t = apply_poch(s, x, n, ctx)
        t = apply_poch(t, x, n, ctx, inverse=True)
        assert first_difference(t, s) is None


def test_partial_theta_symbolic_coefficients():
    ctx = EvalContext.symbolic(30)
    s = partial_theta(ctx.gen_a(), ctx)
    for n in range(6):
        t = tau_monomial(n)
        assert s.terms.get((t.e_q, n, 0)) == t.coef


def test_partial_theta_rational_collisions():
    # theta(q, 2/3) starts 1 - 2/3 + ... : n = 0, 1 collide at q^0
    ctx = EvalContext.univariate(20)
    s = partial_theta(mono(Fraction(2, 3)), ctx)
    assert coeff_at(s, 0) == Fraction(1, 3)
    # n = 2 and n = 3 land on q^1 and q^3
    assert coeff_at(s, 1) == Fraction(4, 9)
    assert coeff_at(s, 3) == -Fraction(8, 27)


def test_jacobi_triple_product_at_point():
    ctx = EvalContext.univariate(25)
    x = mono(Fraction(3, 5))
    assert equal_on_window(complete_theta(x, ctx), triple_product_rhs(x, ctx), 25)


def test_psi_triangular_numbers():
    ctx = EvalContext.univariate(30)
    s = psi(ctx)
    tri = {n * (n + 1) // 2 for n in range(10)}
    for e in range(31):
        assert coeff_at(s, e) == (1 if e in tri else 0)


def test_phi21_terminating_matches_manual_sum():
    ctx = EvalContext.univariate(25)
    a, b, c, z = (
        mono(1, -3),
        mono(Fraction(1, 2)),
        mono(Fraction(3, 4)),
        mono(1, 1),
    )
    got = phi21(a, b, c, z, ctx)
    total = ctx.zero()
    for n in range(4):  # terminates at n = 3
        term = poch_finite(a, n, ctx)
        term = apply_poch(term, b, n, ctx)
        term = term.mul_monomial(z.power(n))
        for j in range(1, n + 1):
            term = term.div_one_minus(mono(1, j))
        term = apply_poch(term, c, n, ctx, inverse=True)
        total = total + term
    assert first_difference(got, total) is None


def test_phi21_q_gauss_sum():
    # 2phi1(A, B; c; q, c/(AB)) = (c/A;q)_inf (c/B;q)_inf / ((c;q)_inf (c/(AB);q)_inf)
    ctx = EvalContext.univariate(20)
    A, B = mono(Fraction(2, 3)), mono(Fraction(5, 7))
    c = mono(1, 2)  # q^2
    z = c.times(A.inverse()).times(B.inverse())
    lhs = phi21(A, B, c, z, ctx)
    rhs = poch_inf(c.times(A.inverse()), ctx) * poch_inf(c.times(B.inverse()), ctx)
    rhs = apply_poch(rhs, c, None, ctx, inverse=True)
    rhs = apply_poch(rhs, z, None, ctx, inverse=True)
    assert equal_on_window(lhs, rhs, 20)
