"""The identity registry and the verification checker.

Every registered identity carries builders for both sides, an engine tag
(symbolic when both sides expand safely in formal a, b; specialize-only when
the statement contains q/a-, q^(1-n)/a-, or a-b-denominators that need
rational bindings), an explicit pole set, and an optional grid of integer
parameters.  Verification compares the two sides coefficient-by-coefficient
on the intersection of their validity windows.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .bailey import t0_pair_1, t0_pair_2, unit_pair, warnaar_L_transform_sides
from .errors import (
    InsufficientWindow,
    NonTruncatable,
    PoleAtRequestedPoint,
    UnknownIdentity,
)
from .kernels import L_kernel, P_kernel, U_m, f_kernel, t_summand
from .qfun import (
    apply_poch,
    complete_theta,
    partial_theta,
    poch_finite,
    poch_inf,
    psi,
    tau_monomial,
    triple_product_rhs,
)
from .series import (
    EvalContext,
    Monomial,
    Series,
    as_rat,
    first_difference,
    mono,
)

ZERO = Monomial(0)


@dataclass(frozen=True)
class IdentityDescriptor:
    """One registered identity."""

    name: str
    summary: str
    engine: str  # "symbolic" | "specialize"
    vars: tuple  # sampled rational parameter names
    builder: Callable  # (ctx, v: dict[str, Monomial], ints: dict) -> (lhs, rhs)
    grid: tuple = ({},)  # integer parameter cases
    pole: Callable[[dict], bool] = lambda p: False
    sym: dict = field(default_factory=dict)  # var name -> "a" | "b" for symbolic runs
    notes: str = ""

    def params_schema(self) -> dict:
        out: dict = {name: "rational" for name in self.vars}
        for key in self.grid[0]:
            out[key] = sorted({ints[key] for ints in self.grid})
        return out


@dataclass(frozen=True)
class VerificationReport:
    name: str
    params: dict
    point: Optional[dict]  # var name -> Fraction; None means symbolic
    order: int
    window: tuple  # (q_lo, q_hi) achieved
    verdict: str  # "pass" | "fail" | "insufficient"
    first_diff: Optional[tuple]  # ((e_q, e_a, e_b), lhs, rhs)
    elapsed_ms: int


# -- small builder helpers -------------------------------------------------


def _mono_sum(ctx: EvalContext, term_fn, weight_fn) -> Series:
    """Sum of monomials term_fn(n), stopped once weight_fn(n) leaves the
    window and keeps growing."""
    win = ctx.window
    out: dict = {}
    n = 0
    while True:
        w = weight_fn(n)
        if w > win.q_hi and weight_fn(n + 1) > w:
            break
        m = term_fn(n)
        if m.coef != 0:
            key = (m.e_q, m.e_a, m.e_b)
            if win.contains(*key):
                out[key] = out.get(key, 0) + m.coef
        n += 1
    return Series(out, win)


def _sum_ratio(ctx: EvalContext, ratio, start: Optional[Series] = None) -> Series:
    """term_0 + term_1 + ... with term_n = ratio(term_{n-1}, n).

    Every sum fed through here carries a q**n factor, so the term's q-order
    floor grows without bound; the loop stops once it leaves the window.
    """
    total = term = ctx.one() if start is None else start
    w_hi = ctx.window.q_hi
    n = 1
    while True:
        term = ratio(term, n)
        floor = term.support_weight_min()
        if floor is None or floor > w_hi:
            if n > 4:
                break
        else:
            total = total + term
        if n > w_hi + 8:
            raise InsufficientWindow("sum failed to leave the window")
        n += 1
    return total


def _pinf(ctx: EvalContext, *xs: Monomial, base: int = 1) -> Series:
    s = ctx.one()
    for x in xs:
        s = apply_poch(s, x, None, ctx, base=base)
    return s


def _mul_inf(s: Series, ctx: EvalContext, *xs: Monomial, base: int = 1) -> Series:
    """Multiply by infinite Pochhammers factor by factor.

    Far cheaper than forming the product series and doing one dense multiply.
    """
    for x in xs:
        s = apply_poch(s, x, None, ctx, base=base)
    return s


def _div_inf(s: Series, ctx: EvalContext, *xs, base: int = 1) -> Series:
    for x in xs:
        s = apply_poch(s, x, None, ctx, base=base, inverse=True)
    return s


def _scalar(m: Monomial) -> Fraction:
    if m.e_q or m.e_a or m.e_b:
        raise ValueError("expected a constant")
    return as_rat(m.coef)


def _neg(m: Monomial) -> Monomial:
    return m.times(mono(-1))


def _q_plus(ctx: EvalContext, m: Monomial) -> Series:
    """The series q + m."""
    return ctx.series(mono(1, 1)) + ctx.series(m)


# -- identity builders -----------------------------------------------------


def _b_jacobi_triple(ctx, v, ints):
    x = v["x"]
    return complete_theta(x, ctx), triple_product_rhs(x, ctx)


def _b_ramanujan_661(ctx, v, ints):
    a = v["a"]
    q_over_a = a.inverse().q_shift(1)
    lhs = _mono_sum(ctx, lambda n: a.power(n).q_shift(n * n + n), lambda n: n * n + n)

    def ratio(term, n):
        # (q^{n+1};q)_n q^n / ((a;q)_{n+1} (q/a;q)_n), rebuilt per n: the
        # numerator's base point moves with n, so no fixed-factor ratio.
        t = poch_finite(mono(1, n + 1), n, ctx).mul_monomial(mono(1, n))
        t = apply_poch(t, a, n + 1, ctx, inverse=True)
        return apply_poch(t, q_over_a, n, ctx, inverse=True)

    rhs1 = _sum_ratio(ctx, ratio, start=ctx.one().div_one_minus(a))
    tail = _mono_sum(
        ctx,
        lambda n: a.power(3 * n + 1).q_shift(3 * n * n + 2 * n),
        lambda n: 3 * n * n + 2 * n,
    )
    tail = tail - _mono_sum(
        ctx,
        lambda n: a.power(3 * n + 2).q_shift(3 * n * n + 4 * n + 1),
        lambda n: 3 * n * n + 4 * n + 1,
    )
    tail = _div_inf(tail, ctx, a, q_over_a)
    return lhs, rhs1 - tail


def _b_ramanujan_639(ctx, v, ints):
    a = v["a"]
    q_over_a = a.inverse().q_shift(1)
    lhs = _mono_sum(
        ctx, lambda n: a.power(n).q_shift(n * (n + 1) // 2), lambda n: n * (n + 1) // 2
    )

    def ratio(term, n):
        t = poch_finite(mono(1, 1), n, ctx, base=2).mul_monomial(mono(1, n))
        t = apply_poch(t, a, n + 1, ctx, inverse=True)
        return apply_poch(t, q_over_a, n, ctx, inverse=True)

    rhs1 = _sum_ratio(ctx, ratio, start=ctx.one().div_one_minus(a))
    tail = _mono_sum(
        ctx,
        lambda n: a.power(2 * n + 1).q_shift(n * n + n).times(mono((-1) ** (n + 1))),
        lambda n: n * n + n,
    )
    tail = _div_inf(tail, ctx, mono(-1, 1), a, q_over_a)
    return lhs, rhs1 + tail


def _b_ramanujan_6311(ctx, v, ints):
    a = v["a"]
    q2_over_a = a.inverse().q_shift(2)
    lhs = _mono_sum(
        ctx, lambda n: a.power(n).q_shift(n * (n + 1) // 2), lambda n: n * (n + 1) // 2
    )

    def ratio(term, n):
        t = poch_finite(mono(1, 1), n, ctx, base=2).mul_monomial(mono(1, 2 * n))
        t = apply_poch(t, a, n + 1, ctx, base=2, inverse=True)
        return apply_poch(t, q2_over_a, n, ctx, base=2, inverse=True)

    rhs1 = _sum_ratio(ctx, ratio, start=ctx.one().div_one_minus(a))
    tail = _mono_sum(
        ctx,
        lambda n: a.power(3 * n + 1).q_shift(3 * n * n + 2 * n).times(mono((-1) ** (n + 1))),
        lambda n: 3 * n * n + 2 * n,
    )
    tail = tail + _mono_sum(
        ctx,
        lambda n: a.power(3 * n + 2).q_shift(3 * n * n + 4 * n + 1).times(mono((-1) ** (n + 1))),
        lambda n: 3 * n * n + 4 * n + 1,
    )
    tail = _div_inf(tail, ctx, mono(-1, 1))
    tail = _div_inf(tail, ctx, a, q2_over_a, base=2)
    return lhs, rhs1 + tail


def _b_andrews_yee(ctx, v, ints):
    a = v["a"]
    tilt = ctx.window.tilt
    wa = a.weight(tilt)
    lhs = _mono_sum(ctx, lambda n: a.power(n).q_shift(n * n), lambda n: n * n + n * wa)
    neg_aq2 = _neg(a.q_shift(2))
    total = ctx.one()
    n = 1
    while n * (n + 1) // 2 + n * wa <= ctx.window.q_hi:
        t = poch_finite(mono(-1, 1), n - 1, ctx)
        t = t.mul_monomial(a.power(n).q_shift(n * (n + 1) // 2))
        t = apply_poch(t, neg_aq2, n, ctx, base=2, inverse=True)
        total = total + t
        n += 1
    return lhs, total


def _warnaar_like_rhs(ctx, a, b, c_shift):
    """(q,a,b;q)_inf sum_n (ab/q;q)_{2n} q^n / ((q,a,b,ab*q^{c_shift};q)_n)."""
    ab = a.times(b)

    def ratio(term, n):
        term = term.mul_one_minus(ab.q_shift(2 * n - 3))
        term = term.mul_one_minus(ab.q_shift(2 * n - 2))
        term = term.mul_monomial(mono(1, 1))
        term = term.div_one_minus(mono(1, n))
        term = term.div_one_minus(a.q_shift(n - 1))
        term = term.div_one_minus(b.q_shift(n - 1))
        return term.div_one_minus(ab.q_shift(n - 1 + c_shift))

    s = _sum_ratio(ctx, ratio)
    return _mul_inf(s, ctx, mono(1, 1), a, b)


def _b_warnaar_sum(ctx, v, ints):
    a, b = v["a"], v["b"]
    lhs = partial_theta(a, ctx) + partial_theta(b, ctx) - ctx.one()
    return lhs, _warnaar_like_rhs(ctx, a, b, 0)


def _b_andrews_warnaar_product(ctx, v, ints):
    a, b = v["a"], v["b"]
    lhs = partial_theta(a, ctx) * partial_theta(b, ctx)
    return lhs, _warnaar_like_rhs(ctx, a, b, -1)


def _b_schilling_warnaar(ctx, v, ints):
    a, b = v["a"], v["b"]
    diff = _scalar(a) - _scalar(b)
    lhs = (partial_theta(a, ctx) - partial_theta(b, ctx)) * Monomial(1 / diff)
    ab = a.times(b)

    def ratio(term, n):
        term = term.mul_one_minus(ab.q_shift(2 * n - 2))
        term = term.mul_one_minus(ab.q_shift(2 * n - 1))
        term = term.mul_monomial(mono(1, 1))
        term = term.div_one_minus(mono(1, n))
        term = term.div_one_minus(a.q_shift(n))
        term = term.div_one_minus(b.q_shift(n))
        return term.div_one_minus(ab.q_shift(n - 1))

    rhs = _mul_inf(_sum_ratio(ctx, ratio), ctx, mono(1, 1), a.q_shift(1), b.q_shift(1))
    return lhs, -rhs


def _b_alladi_berkovich(ctx, v, ints):
    a, b = v["a"], v["b"]
    av, bv = _scalar(a), _scalar(b)
    ab = a.times(b)
    ca = av / (av - 1)
    cb = bv / (bv - 1)
    c0 = (1 - av * bv) / ((1 - av) * (1 - bv))
    w_hi = ctx.window.q_hi
    factor = ctx.one()  # (ab;q)_n / (q;q)_n, updated incrementally
    total = ctx.zero()
    n = 0
    while n * (n - 1) // 2 + 2 * n <= w_hi:
        if n > 0:
            factor = factor.mul_one_minus(ab.q_shift(n - 1)).div_one_minus(mono(1, n))
        tn = tau_monomial(n).q_shift(2 * n)
        inner = (
            partial_theta(a.q_shift(1 + n), ctx) * Monomial(ca)
            + partial_theta(b.q_shift(1 + n), ctx) * Monomial(cb)
            + partial_theta(mono(1, 1 + n), ctx) * Monomial(c0)
        )
        total = total + (factor * inner).mul_monomial(tn)
        n += 1
    rhs = _pinf(ctx, a.q_shift(1), b.q_shift(1), mono(1, 1))
    return total, rhs


def _b_main_theorem(ctx, v, ints):
    a, b = v["a"], v["b"]
    m = ints["m"]
    lhs = U_m(m, ctx, b) * partial_theta(a, ctx)
    ab = a.times(b)
    base_win = ctx.window
    w = apply_poch(ctx.one(), b, m, ctx, inverse=True)  # W_0 = 1/(b;q)_m
    w_hi = base_win.q_hi
    total = ctx.zero()
    n = 0
    while True:
        if n > 0:
            w = w.mul_one_minus(ab.q_shift(2 * n - 3))
            w = w.mul_one_minus(ab.q_shift(2 * n - 2))
            w = Series(w.mul_monomial(mono(1, 1)).terms, base_win)
            w = w.div_one_minus(ab.q_shift(n - 2))
            w = w.div_one_minus(mono(1, n))
            w = w.div_one_minus(a.q_shift(n - 1))
            w = w.div_one_minus(b.q_shift(m + n - 1))
            floor = w.support_weight_min()
            if floor is None or floor > w_hi:
                break
            if n > w_hi + 8:
                raise InsufficientWindow("sum failed to leave the window")
        # W_n * V_{m,n}: apply the terminating 2phi1's k-th summand ratio
        # directly to W_n.  The q**-m, q**-n Pochhammer ratio is used in its
        # positive-shift form (1 - q**(k-1-j)) = -q**(k-1-j) (1 - q**(j-k+1)),
        # and each term is clipped back to the base window so additions stay
        # on one common window.
        term = t = w
        for k in range(1, min(m, n) + 1):
            t = Series(t.mul_monomial(b.q_shift(2 * k - 2)).terms, base_win)
            t = t.mul_one_minus(mono(1, m - k + 1))
            t = t.mul_one_minus(mono(1, n - k + 1))
            t = t.div_one_minus(mono(1, k))
            t = t.div_one_minus(ab.q_shift(n + k - 2))
            term = term + t
        total = total + term
        n += 1
    return lhs, _mul_inf(total, ctx, mono(1, 1), a, b)


def _b_bivariate_rep(ctx, v, ints):
    a, b = v["a"], v["b"]
    lhs = partial_theta(a, ctx)
    rhs = L_kernel(ctx, a, b) + L_kernel(ctx, a.q_shift(1), b.q_shift(1)).mul_monomial(b)
    return lhs, rhs


def _b_swapped_rep(ctx, v, ints):
    a, b = v["a"], v["b"]
    lhs = partial_theta(b, ctx)
    rhs = L_kernel(ctx, a, b) + L_kernel(ctx, a.q_shift(1), b.q_shift(1)).mul_monomial(a)
    return lhs, rhs


def _b_trivariate_rep(ctx, v, ints):
    a, b = v["a"], v["b"]
    lhs = partial_theta(a, ctx)
    num = P_kernel(ctx, a, b).mul_monomial(mono(1, 1))
    p1 = P_kernel(ctx, a.q_shift(1), b.q_shift(1))
    num = num + p1.mul_monomial(b) + p1.mul_monomial(b.q_shift(1))
    num = num + P_kernel(ctx, a.q_shift(2), b.q_shift(2)).mul_monomial(b.power(2).q_shift(1))
    # divide by q + b = q (1 - (-b/q))
    rhs = num.mul_monomial(mono(1, -1)).div_one_minus(_neg(b.q_shift(-1)))
    return lhs, rhs


def _b_transform_known(ctx, v, ints):
    A, B, c, t = v["A"], v["B"], v["c"], v["t"]
    z = t.times(A.inverse()).times(B.inverse()).q_shift(1)  # tq/(AB)

    def ratio(term, n):
        term = term.mul_one_minus(A.q_shift(n - 1))
        term = term.mul_one_minus(B.q_shift(n - 1))
        term = term.mul_monomial(z)
        term = term.div_one_minus(mono(1, n))
        return term.div_one_minus(c.q_shift(n - 1))

    lhs = _sum_ratio(ctx, ratio)
    lhs = _mul_inf(lhs, ctx, t, z)
    lhs = _div_inf(lhs, ctx, t.times(A.inverse()).q_shift(1), t.times(B.inverse()).q_shift(1))

    w_hi = ctx.window.q_hi
    rhs = ctx.zero()
    n = 0
    while n * n <= w_hi + 8:
        s = poch_finite(t, n, ctx)
        s = apply_poch(s, A, n, ctx)
        s = apply_poch(s, B, n, ctx)
        s = apply_poch(s, t.times(c.inverse()).q_shift(1), n, ctx)
        s = s.mul_one_minus(t.q_shift(2 * n))
        s = s.mul_monomial(c.times(t).times(A.inverse()).times(B.inverse()).power(n).q_shift(n * n))
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        s = apply_poch(s, t.times(A.inverse()).q_shift(1), n, ctx, inverse=True)
        s = apply_poch(s, t.times(B.inverse()).q_shift(1), n, ctx, inverse=True)
        s = apply_poch(s, c, n, ctx, inverse=True)
        rhs = rhs + s
        n += 1
    return lhs, rhs


def _b_corollary_main(ctx, v, ints):
    t, c = v["t"], v["c"]
    w_hi = ctx.window.q_hi
    lhs = ctx.zero()
    n = 0
    while n * n <= w_hi + 8:
        s = ctx.series(t.power(n).q_shift(n * n))
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        s = apply_poch(s, c, n, ctx, inverse=True)
        lhs = lhs + s
        n += 1
    lhs = _mul_inf(lhs, ctx, t)
    rhs = ctx.zero()
    n = 0
    while 2 * n * n - n <= w_hi + 8:
        s = poch_finite(t, n, ctx)
        s = apply_poch(s, t.times(c.inverse()).q_shift(1), n, ctx)
        s = s.mul_one_minus(t.q_shift(2 * n))
        s = s.mul_monomial(c.times(t).power(n).q_shift(2 * n * n - n))
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        s = apply_poch(s, c, n, ctx, inverse=True)
        rhs = rhs + s
        n += 1
    return lhs, rhs


def _b_corollary_main_added(ctx, v, ints):
    t = v["t"]
    tilt = ctx.window.tilt
    wt = t.weight(tilt)
    w_hi = ctx.window.q_hi
    lhs = ctx.zero()
    n = 0
    while n * n + n * wt <= w_hi + 8:
        s = ctx.series(t.power(n).q_shift(n * n))
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        s = apply_poch(s, t, n, ctx, inverse=True)
        lhs = lhs + s
        n += 1
    lhs = _mul_inf(lhs, ctx, t)
    return lhs, partial_theta(t, ctx)


def _b_f_product_form(ctx, v, ints):
    b, c = v["b"], v["c"]
    tilt = ctx.window.tilt
    wb = b.weight(tilt)
    lhs = f_kernel(ctx, b, c)
    rhs = ctx.zero()
    n = 0
    while n * n + n * wb <= ctx.window.q_hi + 8:
        s = ctx.series(b.power(n).q_shift(n * n))
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        s = apply_poch(s, c, n, ctx, inverse=True)
        rhs = rhs + s
        n += 1
    return lhs, _mul_inf(rhs, ctx, b)


def _b_theta_expansion(ctx, v, ints):
    a = v["a"]

    def ratio(term, n):
        term = term.mul_monomial(mono(1, 1))
        term = term.div_one_minus(mono(1, n))
        return term.div_one_minus(a.q_shift(n - 1))

    rhs = _mul_inf(_sum_ratio(ctx, ratio), ctx, mono(1, 1), a)
    return partial_theta(a, ctx), rhs


def _b_corollary_b5(ctx, v, ints):
    a, b = v["a"], v["b"]
    av, bv = _scalar(a), _scalar(b)
    lhs = partial_theta(a, ctx) * Monomial(av / (av - bv)) - partial_theta(
        b, ctx
    ) * Monomial(bv / (av - bv))
    total = ctx.zero()
    w_hi = ctx.window.q_hi
    n = 0
    while n <= w_hi + 8:
        t = t_summand(n, ctx, a, b)
        floor = t.support_weight_min()
        if (floor is None or floor > w_hi) and n > 4:
            break
        total = total + t
        n += 1
    return lhs, _mul_inf(total, ctx, mono(1, 1), a, b)


def _b_corollary_b6(ctx, v, ints):
    a, b = v["a"], v["b"]
    av, bv = _scalar(a), _scalar(b)
    lhs = (_q_plus(ctx, b) * partial_theta(a, ctx)) * Monomial(av * av / (av - bv))
    lhs = lhs - (_q_plus(ctx, a) * partial_theta(b, ctx)) * Monomial(bv * bv / (av - bv))
    rhs = P_kernel(ctx, a, b).mul_monomial(mono(av + bv, 1))
    p1 = P_kernel(ctx, a.q_shift(1), b.q_shift(1))
    rhs = rhs + p1.mul_monomial(Monomial(av * bv)) + p1.mul_monomial(Monomial(av * bv, 1))
    return lhs, rhs


def _b_corollary_b7(ctx, v, ints):
    a = v["a"]
    lhs = _q_plus(ctx, a) * partial_theta(_neg(a), ctx)
    lhs = lhs - _q_plus(ctx, _neg(a)) * partial_theta(a, ctx)
    p = P_kernel(ctx, a.q_shift(1), _neg(a).q_shift(1))
    rhs = p.mul_monomial(a.times(mono(2))) + p.mul_monomial(a.times(mono(2, 1)))
    return lhs, rhs


def _b_psi_product(ctx, v, ints):
    rhs = apply_poch(ctx.one(), mono(1, 4), None, ctx, base=4)
    rhs = apply_poch(rhs, mono(-1, 1), None, ctx, base=2)
    return psi(ctx), rhs


def _b_coeff_theorem(ctx, v, ints):
    win = ctx.window
    out: dict = {}
    for i in range(win.a_hi + 1):
        for j in range(win.b_hi + 1):
            t = tau_monomial(i + j)
            if win.contains(t.e_q, i, j):
                out[(t.e_q, i, j)] = t.coef
    return L_kernel(ctx, v["a"], v["b"]), Series(out, win)


def _b_generalized_warnaar(ctx, v, ints):
    a, b = v["a"], v["b"]
    r, s = ints["r"], ints["s"]
    lhs = ctx.zero()
    for i in range(r):
        lhs = lhs + partial_theta(b.q_shift(i), ctx).mul_monomial(
            a.power(i).times(tau_monomial(i))
        )
    for i in range(s):
        lhs = lhs + partial_theta(a.q_shift(i), ctx).mul_monomial(
            b.power(i).times(tau_monomial(i))
        )
    cross: dict = {}
    win = ctx.window
    for i in range(r):
        for j in range(s):
            t = tau_monomial(i + j)
            mm = a.power(i).times(b.power(j)).times(t)
            key = (mm.e_q, mm.e_a, mm.e_b)
            if mm.coef != 0 and win.contains(*key):
                cross[key] = cross.get(key, 0) + mm.coef
    lhs = lhs - Series(cross, win)
    rhs = L_kernel(ctx, a, b)
    shift = a.power(r).times(b.power(s)).times(tau_monomial(r + s))
    rhs = rhs - L_kernel(ctx, a.q_shift(r + s), b.q_shift(r + s)).mul_monomial(shift)
    return lhs, rhs


def _b_mamade_contiguous(ctx, v, ints):
    a, b = v["a"], v["b"]
    n = ints["n"]
    lhs = t_summand(n + 2, ctx, a, b)
    base = t_summand(n, ctx, a.q_shift(2), b.q_shift(2))
    ab = a.times(b)
    part1 = base.mul_monomial(ab.q_shift(1))
    part2 = base.mul_monomial(mono(1, 2)) - base.mul_monomial(ab.q_shift(1))
    part2 = part2.mul_one_minus(ab.q_shift(2 * n + 2))
    part2 = part2.div_one_minus(mono(1, n + 1)).div_one_minus(mono(1, n + 2))
    rhs = part1 + part2
    for m in (a, a.q_shift(1), b, b.q_shift(1)):
        rhs = rhs.div_one_minus(m)
    return lhs, rhs


def _b_bailey_unit(ctx, v, ints):
    a, b = v["a"], v["b"]
    return warnaar_L_transform_sides(unit_pair(a, b), ctx, a, b)


def _b_bailey_t0_1(ctx, v, ints):
    return warnaar_L_transform_sides(t0_pair_1(v["x"]), ctx, v["a"], ZERO)


def _b_bailey_t0_2(ctx, v, ints):
    return warnaar_L_transform_sides(t0_pair_2(v["x"]), ctx, v["a"], ZERO)


# -- registry --------------------------------------------------------------


def _ab_pole(*conds):
    def pole(p: dict) -> bool:
        for c in conds:
            if c(p):
                return True
        return False

    return pole


def build_registry(perturb: Optional[str] = None) -> dict:
    """Name -> IdentityDescriptor, in presentation order.

    ``perturb`` names one identity whose RHS is deliberately corrupted by an
    added q**3 term; it exists purely to exercise the failure path.
    """
    entries = [
        IdentityDescriptor(
            "jacobi_triple",
            "bilateral theta sum equals (q,x,q/x;q)_inf",
            "specialize",
            ("x",),
            _b_jacobi_triple,
        ),
        IdentityDescriptor(
            "ramanujan_661",
            "sum q^(n(n+1)) a^n as a false-theta difference",
            "specialize",
            ("a",),
            _b_ramanujan_661,
            pole=_ab_pole(lambda p: p["a"] == 1),
        ),
        IdentityDescriptor(
            "ramanujan_639",
            "sum q^(n(n+1)/2) a^n, base-q form",
            "specialize",
            ("a",),
            _b_ramanujan_639,
            pole=_ab_pole(lambda p: p["a"] == 1),
        ),
        IdentityDescriptor(
            "ramanujan_6311",
            "sum q^(n(n+1)/2) a^n, base-q^2 form",
            "specialize",
            ("a",),
            _b_ramanujan_6311,
            pole=_ab_pole(lambda p: p["a"] == 1),
        ),
        IdentityDescriptor(
            "andrews_yee",
            "sum q^(n^2) a^n with (-q;q)_(n-1)/(-aq^2;q^2)_n weights",
            "symbolic",
            ("a",),
            _b_andrews_yee,
        ),
        IdentityDescriptor(
            "warnaar_sum",
            "theta(q,a) + theta(q,b) - 1 as a single product-sum",
            "symbolic",
            ("a", "b"),
            _b_warnaar_sum,
        ),
        IdentityDescriptor(
            "andrews_warnaar_product",
            "theta(q,a) theta(q,b) as a single product-sum",
            "symbolic",
            ("a", "b"),
            _b_andrews_warnaar_product,
        ),
        IdentityDescriptor(
            "schilling_warnaar",
            "(theta(q,a) - theta(q,b))/(a - b) in product-sum form",
            "specialize",
            ("a", "b"),
            _b_schilling_warnaar,
            pole=_ab_pole(lambda p: p["a"] == p["b"], lambda p: p["a"] * p["b"] == 1),
        ),
        IdentityDescriptor(
            "alladi_berkovich",
            "two-parameter generalization of the triple product",
            "specialize",
            ("a", "b"),
            _b_alladi_berkovich,
            pole=_ab_pole(
                lambda p: p["a"] == 1,
                lambda p: p["b"] == 1,
                lambda p: p["a"] * p["b"] == 1,
            ),
        ),
        IdentityDescriptor(
            "main_theorem",
            "U_m(b) theta(q,a) = (q,a,b;q)_inf sum with V_(m,n) kernel",
            "symbolic",
            ("a", "b"),
            _b_main_theorem,
            grid=tuple({"m": m} for m in range(5)),
        ),
        IdentityDescriptor(
            "bivariate_rep",
            "theta(q,a) = L(a,b) + b L(aq,bq)",
            "symbolic",
            ("a", "b"),
            _b_bivariate_rep,
        ),
        IdentityDescriptor(
            "swapped_rep",
            "theta(q,b) = L(a,b) + a L(aq,bq)",
            "symbolic",
            ("a", "b"),
            _b_swapped_rep,
        ),
        IdentityDescriptor(
            "trivariate_rep",
            "theta(q,a) via P(a,b), P(aq,bq), P(aq^2,bq^2)",
            "symbolic",
            ("a", "b"),
            _b_trivariate_rep,
        ),
        IdentityDescriptor(
            "transform_known",
            "2phi1-type transformation with parameters A, B, c, t",
            "specialize",
            ("A", "B", "c", "t"),
            _b_transform_known,
            pole=_ab_pole(lambda p: p["c"] == 1),
        ),
        IdentityDescriptor(
            "corollary_main",
            "(t;q)_inf sum q^(n^2) t^n/((q,c;q)_n) in false-theta form",
            "specialize",
            ("t", "c"),
            _b_corollary_main,
            pole=_ab_pole(lambda p: p["c"] == 1),
        ),
        IdentityDescriptor(
            "corollary_main_added",
            "(t;q)_inf sum q^(n^2) t^n/((q,t;q)_n) = theta(q,t)",
            "symbolic",
            ("t",),
            _b_corollary_main_added,
            sym={"t": "a"},
        ),
        IdentityDescriptor(
            "f_product_form",
            "f(b,c) = (b;q)_inf sum q^(n^2) b^n/((q,c;q)_n)",
            "symbolic",
            ("b", "c"),
            _b_f_product_form,
            sym={"b": "b", "c": "a"},
        ),
        IdentityDescriptor(
            "theta_expansion",
            "theta(q,a) = (q,a;q)_inf sum q^n/((q,a;q)_n)",
            "symbolic",
            ("a",),
            _b_theta_expansion,
        ),
        IdentityDescriptor(
            "corollary_b5",
            "a/(a-b) theta(q,a) - b/(a-b) theta(q,b) equals the L-sum",
            "specialize",
            ("a", "b"),
            _b_corollary_b5,
            pole=_ab_pole(
                lambda p: p["a"] == p["b"],
                lambda p: p["a"] == 1,
                lambda p: p["b"] == 1,
                lambda p: p["a"] * p["b"] == 1,
            ),
        ),
        IdentityDescriptor(
            "corollary_b6",
            "weighted theta difference equals q(a+b)P(a,b) + ab(q+1)P(aq,bq)",
            "specialize",
            ("a", "b"),
            _b_corollary_b6,
            pole=_ab_pole(
                lambda p: p["a"] == p["b"],
                lambda p: p["a"] == 1,
                lambda p: p["b"] == 1,
            ),
            notes="two-line display read as LHS = q(a+b)P(a,b) + ab(q+1)P(aq,bq)",
        ),
        IdentityDescriptor(
            "corollary_b7",
            "(q+a)theta(q,-a) - (q-a)theta(q,a) = 2a(1+q)P(aq,-aq)",
            "symbolic",
            ("a",),
            _b_corollary_b7,
        ),
        IdentityDescriptor(
            "psi_product",
            "theta(q,-q) = (q^4;q^4)_inf (-q;q^2)_inf",
            "specialize",
            (),
            _b_psi_product,
        ),
        IdentityDescriptor(
            "coeff_theorem",
            "L(a,b) = sum tau(i+j) a^i b^j",
            "symbolic",
            ("a", "b"),
            _b_coeff_theorem,
        ),
        IdentityDescriptor(
            "generalized_warnaar",
            "r,s-indexed family interpolating the theta representations",
            "symbolic",
            ("a", "b"),
            _b_generalized_warnaar,
            grid=tuple({"r": r, "s": s} for r in range(4) for s in range(4)),
        ),
        IdentityDescriptor(
            "mamade_contiguous",
            "contiguous relation for the L-summand t(a,b;n)",
            "symbolic",
            ("a", "b"),
            _b_mamade_contiguous,
            grid=tuple({"n": n} for n in range(3)),
        ),
        IdentityDescriptor(
            "bailey_transform_unit",
            "L-transform with the unit Bailey pair",
            "specialize",
            ("a", "b"),
            _b_bailey_unit,
            pole=_ab_pole(lambda p: p["a"] * p["b"] == 1),
        ),
        IdentityDescriptor(
            "bailey_transform_t0_1",
            "L-transform with the first t=0 pair (b=0 degeneration)",
            "specialize",
            ("a", "x"),
            _b_bailey_t0_1,
        ),
        IdentityDescriptor(
            "bailey_transform_t0_2",
            "L-transform with the second t=0 pair (b=0 degeneration)",
            "specialize",
            ("a", "x"),
            _b_bailey_t0_2,
        ),
    ]
    registry = {}
    for desc in entries:
        if perturb is not None and desc.name == perturb:
            desc = _perturbed(desc)
        registry[desc.name] = desc
    return registry


def _perturbed(desc: IdentityDescriptor) -> IdentityDescriptor:
    inner = desc.builder

    def builder(ctx, v, ints):
        lhs, rhs = inner(ctx, v, ints)
        bump = min(3, ctx.q_order)
        return lhs, rhs + ctx.series(mono(1, bump))

    return IdentityDescriptor(
        desc.name,
        desc.summary + " (perturbed test fixture)",
        desc.engine,
        desc.vars,
        builder,
        desc.grid,
        desc.pole,
        desc.sym,
        desc.notes,
    )


def list_identities(registry: Optional[dict] = None) -> list:
    if registry is None:
        registry = build_registry()
    return list(registry.values())


# -- verification ----------------------------------------------------------


def _symbolic_args(desc: IdentityDescriptor, ctx: EvalContext) -> dict:
    gens = {"a": ctx.gen_a(), "b": ctx.gen_b()}
    default = {"a": "a", "b": "b"}
    v = {}
    for name in desc.vars:
        v[name] = gens[desc.sym.get(name, default.get(name, "a"))]
    return v


def verify(
    name: str,
    point: Optional[dict] = None,
    *,
    order: int = 30,
    q_slack: int = 8,
    degree_cap: int = 10,
    registry: Optional[dict] = None,
) -> VerificationReport:
    """Verify one identity, symbolically or at one rational point."""
    if registry is None:
        registry = build_registry()
    desc = registry.get(name)
    if desc is None:
        raise UnknownIdentity(name)
    if point is not None:
        point = {k: as_rat(v) for k, v in point.items()}
        missing = [k for k in desc.vars if k not in point]
        if missing:
            raise ValueError("missing parameters: %s" % ", ".join(missing))
        if desc.pole(point):
            raise PoleAtRequestedPoint("%s at %r" % (name, point))
    elif desc.engine != "symbolic":
        raise ValueError("%s requires rational bindings" % name)

    started = time.perf_counter()
    if point is None:
        ctx = EvalContext.symbolic(order, q_slack=q_slack, ab_degree_cap=degree_cap)
        v = _symbolic_args(desc, ctx)
    else:
        ctx = EvalContext.univariate(order, q_slack=q_slack)
        v = {k: Monomial(point[k]) for k in desc.vars}

    verdict = "pass"
    first_diff = None
    q_lo = ctx.window.q_lo
    q_hi_achieved = None
    try:
        for ints in desc.grid:
            lhs, rhs = desc.builder(ctx, v, ints)
            win = lhs.window.intersect(rhs.window)
            q_lo = max(q_lo, win.q_lo)
            plain = win.plain_q_hi()
            q_hi_achieved = plain if q_hi_achieved is None else min(q_hi_achieved, plain)
            diff = first_difference(lhs, rhs, order)
            if diff is not None:
                verdict = "fail"
                first_diff = diff
                break
    except (InsufficientWindow, NonTruncatable):
        verdict = "insufficient"
    if q_hi_achieved is None:
        q_hi_achieved = ctx.window.plain_q_hi() if verdict != "insufficient" else 0
    if verdict == "pass" and q_hi_achieved < order:
        verdict = "insufficient"
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    return VerificationReport(
        name=name,
        params=desc.params_schema(),
        point=point,
        order=order,
        window=(q_lo, q_hi_achieved),
        verdict=verdict,
        first_diff=first_diff,
        elapsed_ms=elapsed_ms,
    )


def sample_points(
    desc: IdentityDescriptor, count: int, seed: int
) -> list:
    """Deterministic rational points p/p' (2 <= p, p' <= 50) off the pole set."""
    if not desc.vars:
        return [{}]
    points = []
    for i in range(count):
        rng = random.Random("%d:%s:%d" % (seed, desc.name, i))
        while True:
            point = {
                name: Fraction(rng.randint(2, 50), rng.randint(2, 50))
                for name in desc.vars
            }
            if not desc.pole(point):
                break
        points.append(point)
    return points


def verify_points(
    name: str,
    *,
    order: int = 30,
    points: int = 3,
    seed: int = 0,
    q_slack: int = 8,
    degree_cap: int = 10,
    registry: Optional[dict] = None,
) -> list:
    """All reports for one identity: one symbolic run, or `points` sampled runs."""
    if registry is None:
        registry = build_registry()
    desc = registry.get(name)
    if desc is None:
        raise UnknownIdentity(name)
    if desc.engine == "symbolic":
        return [
            verify(name, None, order=order, q_slack=q_slack,
                   degree_cap=degree_cap, registry=registry)
        ]
    return [
        verify(name, p, order=order, q_slack=q_slack,
               degree_cap=degree_cap, registry=registry)
        for p in sample_points(desc, points, seed)
    ]


# -- expansion tables ------------------------------------------------------

_EXPAND_TARGETS = ("theta", "psi", "L", "P", "poch_inf_q")


def expand(
    target: str, *, order: int = 10, degree_cap: int = 10, q_slack: int = 8
) -> list:
    """In-window coefficients of a named series, ordered by (q, a, b)."""
    if target == "theta":
        ctx = EvalContext.symbolic(order, q_slack=q_slack, ab_degree_cap=degree_cap)
        s = partial_theta(ctx.gen_a(), ctx)
    elif target == "psi":
        ctx = EvalContext.univariate(order, q_slack=q_slack)
        s = psi(ctx)
    elif target == "L":
        ctx = EvalContext.symbolic(order, q_slack=q_slack, ab_degree_cap=degree_cap)
        s = L_kernel(ctx)
    elif target == "P":
        ctx = EvalContext.symbolic(order, q_slack=q_slack, ab_degree_cap=degree_cap)
        s = P_kernel(ctx)
    elif target == "poch_inf_q":
        ctx = EvalContext.univariate(order, q_slack=q_slack)
        s = poch_inf(mono(1, 1), ctx)
    else:
        raise UnknownIdentity(target)
    rows = []
    for (eq, ea, eb), c in s.iter_sorted():
        if 0 <= eq <= order:
            rows.append(((eq, ea, eb), as_rat(c)))
    # include explicit zero rows for pure q powers so gaps are visible
    have = {key for key, _ in rows}
    for eq in range(0, order + 1):
        if (eq, 0, 0) not in have and s.window.contains(eq, 0, 0):
            rows.append(((eq, 0, 0), Fraction(0)))
    rows.sort(key=lambda r: r[0])
    return rows
