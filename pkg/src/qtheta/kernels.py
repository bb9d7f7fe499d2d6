"""The named kernels: U_m, V_{m,n}, f, g_n, L, P and the L-summand.

Each kernel takes explicit monomial arguments for its variables, defaulting
to the context's generators (formal a, b in symbolic mode, the bound
rationals otherwise).  Passing a zero monomial is the supported way to
evaluate the b = 0 degenerations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import InsufficientWindow
from .qfun import (
    _pd_mul_one_minus,
    _pd_shift,
    apply_poch,
    partial_theta,
    phi21,
    poch_finite,
)
from .series import EvalContext, Monomial, Series, mono


def _args(ctx: EvalContext, a_arg: Optional[Monomial], b_arg: Optional[Monomial]):
    if a_arg is None:
        a_arg = ctx.gen_a()
    if b_arg is None:
        b_arg = ctx.gen_b()
    return a_arg, b_arg


_LP_MEMO: dict = {}


def _lp_sum(a_arg: Monomial, b_arg: Monomial, shift: int, ctx: EvalContext) -> Series:
    """sum_n (a*b*q**(n-shift); q)_n q**n / ((q, a, b; q)_n).

    The Pochhammer ratio (x;q)_{2n}/(x;q)_n = (x q**n;q)_n has already been
    applied, so no factor 1 - a*b*q**(-shift) ever needs inverting.  Terms
    with n >= 3 are produced from their predecessor by a fixed six-factor
    ratio; earlier terms are built directly.
    """
    memo_key = (a_arg, b_arg, shift, ctx)
    cached = _LP_MEMO.get(memo_key)
    if cached is not None:
        return cached
    x = a_arg.times(b_arg)
    w_hi = ctx.window.q_hi
    total = ctx.one()
    term = total
    n = 1
    while True:
        if n <= 2:
            term = apply_poch(ctx.one(), x.q_shift(n - shift), n, ctx)
            term = term.mul_monomial(mono(1, n))
            for j in range(1, n + 1):
                term = term.div_one_minus(mono(1, j))
            term = apply_poch(term, a_arg, n, ctx, inverse=True)
            term = apply_poch(term, b_arg, n, ctx, inverse=True)
        else:
            term = term.mul_one_minus(x.q_shift(2 * n - shift - 2))
            term = term.mul_one_minus(x.q_shift(2 * n - shift - 1))
            term = term.mul_monomial(mono(1, 1))
            term = term.div_one_minus(x.q_shift(n - shift - 1))
            term = term.div_one_minus(mono(1, n))
            term = term.div_one_minus(a_arg.q_shift(n - 1))
            term = term.div_one_minus(b_arg.q_shift(n - 1))
        floor = term.support_weight_min()
        if n > shift and (floor is None or floor > w_hi):
            break
        total = total + term
        if n > w_hi + shift + 4:
            raise InsufficientWindow("kernel sum failed to leave the window")
        n += 1
    if len(_LP_MEMO) > 256:
        _LP_MEMO.clear()
    _LP_MEMO[memo_key] = total
    return total


_KERNEL_MEMO: dict = {}


def _with_prefactor(s: Series, a_arg: Monomial, b_arg: Monomial, ctx: EvalContext) -> Series:
    s = apply_poch(s, mono(1, 1), None, ctx)
    s = apply_poch(s, a_arg, None, ctx)
    return apply_poch(s, b_arg, None, ctx)


def _lp_kernel(a_arg: Monomial, b_arg: Monomial, shift: int, ctx: EvalContext) -> Series:
    key = (a_arg, b_arg, shift, ctx)
    out = _KERNEL_MEMO.get(key)
    if out is None:
        out = _with_prefactor(_lp_sum(a_arg, b_arg, shift, ctx), a_arg, b_arg, ctx)
        if len(_KERNEL_MEMO) > 256:
            _KERNEL_MEMO.clear()
        _KERNEL_MEMO[key] = out
    return out


def L_kernel(
    ctx: EvalContext,
    a_arg: Optional[Monomial] = None,
    b_arg: Optional[Monomial] = None,
) -> Series:
    """L(a,b) = (q,a,b;q)_inf sum_n (ab/q**2;q)_{2n} q**n / ((q,a,b,ab/q**2;q)_n)."""
    a_arg, b_arg = _args(ctx, a_arg, b_arg)
    return _lp_kernel(a_arg, b_arg, 2, ctx)


def L_shifted(i: int, ctx: EvalContext) -> Series:
    """L(a*q**i, b*q**i)."""
    if i < 0:
        raise ValueError("shift must be non-negative")
    return L_kernel(ctx, ctx.gen_a().q_shift(i), ctx.gen_b().q_shift(i))


def P_kernel(
    ctx: EvalContext,
    a_arg: Optional[Monomial] = None,
    b_arg: Optional[Monomial] = None,
) -> Series:
    """P(a,b): as L but with the ab/q**3 shift."""
    a_arg, b_arg = _args(ctx, a_arg, b_arg)
    return _lp_kernel(a_arg, b_arg, 3, ctx)


def P_shifted(i: int, ctx: EvalContext) -> Series:
    if i < 0:
        raise ValueError("shift must be non-negative")
    return P_kernel(ctx, ctx.gen_a().q_shift(i), ctx.gen_b().q_shift(i))


def t_summand(
    n: int,
    ctx: EvalContext,
    a_arg: Optional[Monomial] = None,
    b_arg: Optional[Monomial] = None,
) -> Series:
    """The single term (ab/q**2;q)_{2n} q**n / ((q,a,b,ab/q**2;q)_n)."""
    if n < 0:
        raise ValueError("summand index must be non-negative")
    a_arg, b_arg = _args(ctx, a_arg, b_arg)
    x2 = a_arg.times(b_arg).q_shift(-2)
    s = apply_poch(ctx.one(), x2, 2 * n, ctx)
    s = s.mul_monomial(mono(1, n))
    for j in range(1, n + 1):
        s = s.div_one_minus(mono(1, j))
    s = apply_poch(s, a_arg, n, ctx, inverse=True)
    s = apply_poch(s, b_arg, n, ctx, inverse=True)
    return apply_poch(s, x2, n, ctx, inverse=True)


def U_m(m: int, ctx: EvalContext, b_arg: Optional[Monomial] = None) -> Series:
    """U_m(b); exact m-term sum for m >= 1, theta(q, b) for m = 0."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if b_arg is None:
        b_arg = ctx.gen_b()
    if m == 0:
        # U_0(b) = f(b, b) = theta(q, b)
        return partial_theta(b_arg, ctx)
    total = ctx.zero()
    pd: dict = {(0, 0, 0): Fraction(1)}
    for k in range(m):
        if k > 0:
            pd = _pd_mul_one_minus(pd, mono(1, k - m))
        num = pd
        if b_arg.coef != 0:
            num = _pd_mul_one_minus(num, b_arg.q_shift(2 * k))
        num = _pd_shift(num, b_arg.power(2 * k).q_shift(2 * k * k - k + m * k))
        term = Series(num, ctx.window)
        for j in range(1, k + 1):
            term = term.div_one_minus(mono(1, j))
        term = apply_poch(term, b_arg.q_shift(k), m, ctx, inverse=True)
        total = total + term
    return total


def V_mn(
    m: int,
    n: int,
    ctx: EvalContext,
    a_arg: Optional[Monomial] = None,
    b_arg: Optional[Monomial] = None,
) -> Series:
    """V_{m,n}(a,b), the terminating 2phi1 of the main theorem."""
    if m < 0 or n < 0:
        raise ValueError("indices must be non-negative")
    a_arg, b_arg = _args(ctx, a_arg, b_arg)
    x = a_arg.times(b_arg)
    lo, hi = (m, n) if m <= n else (n, m)
    return phi21(
        mono(1, -lo),
        mono(1, -hi),
        x.q_shift(n - 1),
        b_arg.q_shift(m + n),
        ctx,
    )


def f_kernel(ctx: EvalContext, b_arg: Monomial, c_arg: Monomial) -> Series:
    """f(b,c) = sum_n (b, bq/c;q)_n/((q,c;q)_n) (1-b*q**2n)(bc)**n q**(2n**2-n)."""
    bq_over_c = b_arg.times(c_arg.inverse()).q_shift(1)
    w_hi = ctx.window.q_hi
    tilt = ctx.window.tilt
    w_step = b_arg.weight(tilt) + c_arg.weight(tilt)
    total = ctx.one().mul_one_minus(b_arg)
    n = 1
    while True:
        w_n = 2 * n * n - n + n * w_step
        if w_n > w_hi and 4 * n + 1 + w_step > 0:
            break
        term = poch_finite(b_arg, n, ctx)
        term = apply_poch(term, bq_over_c, n, ctx)
        term = term.mul_one_minus(b_arg.q_shift(2 * n))
        term = term.mul_monomial(b_arg.times(c_arg).power(n).q_shift(2 * n * n - n))
        for j in range(1, n + 1):
            term = term.div_one_minus(mono(1, j))
        term = apply_poch(term, c_arg, n, ctx, inverse=True)
        total = total + term
        n += 1
    return total


def g_n(
    n: int,
    ctx: EvalContext,
    c_arg: Monomial,
    a_arg: Optional[Monomial] = None,
    b_arg: Optional[Monomial] = None,
) -> Series:
    """g_n(a,b,c), the terminating 2phi1 with upper parameters q**-n, q**(1-n)/a."""
    if n < 0:
        raise ValueError("index must be non-negative")
    a_arg, b_arg = _args(ctx, a_arg, b_arg)
    z = a_arg.times(b_arg).q_shift(2 * n - 1)
    return phi21(mono(1, -n), a_arg.inverse().q_shift(1 - n), c_arg, z, ctx)
