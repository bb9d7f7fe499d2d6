"""q-special functions: tau, q-shifted factorials, theta functions, 2phi1.

All functions return :class:`~qtheta.series.Series` values truncated to the
context window.  Pochhammer products are applied factor by factor (each
factor is a binomial), which keeps every operation linear in the number of
stored terms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .errors import NonTruncatable, NotInvertible, PoleAtZero
from .series import EvalContext, Monomial, Series, as_rat, mono


def _check_base(base: int) -> None:
    if base < 1:
        raise ValueError("series base exponent must be >= 1")


def tau_monomial(n: int) -> Monomial:
    """tau(n) = (-1)**n * q**(n*(n-1)/2), defined for all integers n."""
    return Monomial(-1 if n % 2 else 1, n * (n - 1) // 2, 0, 0)


def tau(n: int, ctx: EvalContext) -> Series:
    return ctx.series(tau_monomial(n))


# -- Pochhammer symbols ----------------------------------------------------


def apply_poch(
    s: Series,
    x: Monomial,
    n: Optional[int],
    ctx: EvalContext,
    base: int = 1,
    inverse: bool = False,
) -> Series:
    """Multiply (or divide, with inverse=True) s by (x; q**base)_n.

    ``n = None`` means the infinite product; factors beyond the window's
    weighted order are identities and are skipped.  Negative n follows the
    quotient convention (x;q)_n = (x;q)_inf / (x*q**(base*n);q)_inf.
    """
    _check_base(base)
    if x.coef == 0:
        return s
    if n is not None and n < 0:
        # 1 / prod_{j=1}^{-n} (1 - x q^{-base*j}), inverted when inverse=False
        for j in range(1, -n + 1):
            f = x.q_shift(-base * j)
            s = s.mul_one_minus(f) if inverse else s.div_one_minus(f)
        return s
    tilt = s.window.tilt
    w_hi = s.window.q_hi
    k = 0
    while (n is None or k < n) and (n is not None or x.weight(tilt) + base * k <= w_hi):
        f = x.q_shift(base * k)
        s = s.div_one_minus(f) if inverse else s.mul_one_minus(f)
        k += 1
    return s


def poch_finite(x: Monomial, n: int, ctx: EvalContext, base: int = 1) -> Series:
    """(x; q**base)_n for any integer n."""
    return apply_poch(ctx.one(), x, n, ctx, base=base)


def poch_inf(x: Monomial, ctx: EvalContext, base: int = 1) -> Series:
    """(x; q**base)_inf truncated to the context window."""
    return apply_poch(ctx.one(), x, None, ctx, base=base)


# -- theta functions -------------------------------------------------------


def partial_theta(x: Monomial, ctx: EvalContext) -> Series:
    """theta(q, x) = sum_{n>=0} tau(n) x**n."""
    win = ctx.window
    tilt = win.tilt
    if x.coef == 0:
        return ctx.one()
    cx = as_rat(x.coef)
    wx = x.weight(tilt)
    out = {}
    n = 0
    coef: Fraction | int = 1
    while True:
        w_n = n * (n - 1) // 2 + n * wx
        if w_n > win.q_hi and n >= 1 - wx:
            break
        key = (n * (n - 1) // 2 + n * x.e_q, n * x.e_a, n * x.e_b)
        if win.contains(*key):
            # rational arguments can collide on the same exponent key
            out[key] = out.get(key, 0) + coef
        n += 1
        coef = -coef * cx
    return Series(out, win)


def psi(ctx: EvalContext) -> Series:
    """Ramanujan's theta function psi(q) = theta(q, -q)."""
    return partial_theta(mono(-1, 1), ctx)


def complete_theta(x: Monomial, ctx: EvalContext) -> Series:
    """The bilateral sum sum_{n in Z} tau(n) x**n."""
    if x.coef == 0:
        raise PoleAtZero("complete theta requires x != 0")
    if (x.e_a != 0 and ctx.a_formal or x.e_b != 0 and ctx.b_formal) and ctx.ab_laurent_floor == 0:
        raise NotInvertible(
            "negative powers of a formal variable need ab_laurent_floor < 0"
        )
    s = partial_theta(x, ctx)
    win = ctx.window
    tilt = win.tilt
    wx = x.weight(tilt)
    inv_c = Fraction(1, 1) / as_rat(x.coef)
    out = {}
    k = 1
    coef = -inv_c
    while True:
        w_k = k * (k + 1) // 2 - k * wx
        if w_k > win.q_hi and k >= wx + 1:
            break
        key = (k * (k + 1) // 2 - k * x.e_q, -k * x.e_a, -k * x.e_b)
        if win.contains(*key):
            out[key] = out.get(key, 0) + coef
        k += 1
        coef = -coef * inv_c
    return s + Series(out, win)


def triple_product_rhs(x: Monomial, ctx: EvalContext) -> Series:
    """(q, x, q/x; q)_inf, the product side of the Jacobi triple product."""
    if x.coef == 0:
        raise PoleAtZero("triple product requires x != 0")
    s = apply_poch(ctx.one(), mono(1, 1), None, ctx)
    s = apply_poch(s, x, None, ctx)
    return apply_poch(s, x.inverse().q_shift(1), None, ctx)


# -- exact polynomial assembly (no truncation) -----------------------------


def _pd_mul_one_minus(pd: dict, m: Monomial) -> dict:
    out = dict(pd)
    c = m.coef
    for (eq, ea, eb), v in pd.items():
        key = (eq + m.e_q, ea + m.e_a, eb + m.e_b)
        s = out.get(key, 0) - as_rat(v) * c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _pd_shift(pd: dict, m: Monomial) -> dict:
    c = as_rat(m.coef)
    return {
        (eq + m.e_q, ea + m.e_a, eb + m.e_b): v * c for (eq, ea, eb), v in pd.items()
    }


# -- the q-Heine 2phi1 series ---------------------------------------------


def _terminating_order(m: Monomial) -> Optional[int]:
    """n >= 0 such that m == q**(-n) syntactically, else None."""
    if m.coef == 1 and m.e_a == 0 and m.e_b == 0 and m.e_q <= 0:
        return -m.e_q
    return None


def phi21(
    aarg: Monomial, barg: Monomial, carg: Monomial, z: Monomial, ctx: EvalContext
) -> Series:
    """The 2phi1 series with upper parameters aarg, barg, lower carg, argument z.

    Terminating instances (an upper parameter of the exact form q**-m) are
    summed exactly through n = m; otherwise each term must raise the q-order,
    i.e. z must have positive weighted order.
    """
    m = _terminating_order(aarg)
    other = barg
    if m is None:
        m = _terminating_order(barg)
        other = aarg
    if m is not None:
        return _phi21_terminating(m, other, carg, z, ctx)
    win = ctx.window
    wz = z.weight(win.tilt)
    if wz < 1:
        raise NonTruncatable(
            "2phi1 argument %s does not raise the q-order and no upper "
            "parameter terminates the sum" % z
        )
    term = ctx.one()
    total = term
    i = 1
    while (i - 1) * wz <= win.q_hi:
        term = term.mul_one_minus(aarg.q_shift(i - 1))
        term = term.mul_one_minus(barg.q_shift(i - 1))
        term = term.mul_monomial(z)
        term = term.div_one_minus(carg.q_shift(i - 1))
        term = term.div_one_minus(mono(1, i))
        if term.is_zero():
            break
        total = total + term
        i += 1
    return total


def _phi21_terminating(
    m: int, other: Monomial, carg: Monomial, z: Monomial, ctx: EvalContext
) -> Series:
    win = ctx.window
    total = ctx.one()
    pd: dict = {(0, 0, 0): Fraction(1)}
    for i in range(1, m + 1):
        # exact numerator (q**-m;q)_i (other;q)_i z**i, assembled untruncated
        pd = _pd_mul_one_minus(pd, mono(1, i - 1 - m))
        if other.coef != 0:
            pd = _pd_mul_one_minus(pd, other.q_shift(i - 1))
        num = _pd_shift(pd, z.power(i)) if z.coef != 0 else {}
        if not num:
            continue
        for (eq, ea, eb) in num:
            if eq < win.q_lo or ea < win.a_lo or eb < win.b_lo:
                raise NonTruncatable(
                    "terminating 2phi1 term leaves the representable box at "
                    "(%d, %d, %d); lower ab_laurent_floor" % (eq, ea, eb)
                )
        term = Series(num, win)
        for j in range(i):
            term = term.div_one_minus(mono(1, j + 1))
            term = term.div_one_minus(carg.q_shift(j))
        total = total + term
    return total
