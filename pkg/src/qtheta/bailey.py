"""Bailey pairs and the L-transform.

A Bailey pair relative to the parameter t is a pair of sequences
(alpha_n(t), beta_n(t)) with

    beta_n(t) = sum_{k=0}^{n} alpha_k(t) / ((q;q)_{n-k} (t*q;q)_{n+k}).

The transform sums L(a*q**(n+1), b*q**(n+1)) q**n alpha_n(ab/q) against the
beta side; three classical example pairs are provided.
"""

from __future__ import annotations

from typing import Callable, Optional

from .errors import NonTruncatable
from .kernels import L_kernel
from .qfun import apply_poch, tau_monomial
from .series import EvalContext, Monomial, Series, mono


class BaileyPair:
    """A Bailey pair with memoized, lazily materialized entries.

    ``beta_fn`` may be None, in which case beta_n is derived from alpha via
    the defining relation.  Materialized entries are cached per context;
    a pair is otherwise immutable and shareable.
    """

    def __init__(
        self,
        t: Monomial,
        alpha_fn: Callable[[int, EvalContext], Series],
        beta_fn: Optional[Callable[[int, EvalContext], Series]] = None,
        name: str = "",
    ):
        self.t = t
        self.alpha_fn = alpha_fn
        self.beta_fn = beta_fn
        self.name = name
        self._alpha_memo: dict = {}
        self._beta_memo: dict = {}

    def alpha(self, n: int, ctx: EvalContext) -> Series:
        key = (n, ctx)
        if key not in self._alpha_memo:
            self._alpha_memo[key] = self.alpha_fn(n, ctx)
        return self._alpha_memo[key]

    def beta(self, n: int, ctx: EvalContext) -> Series:
        key = (n, ctx)
        if key not in self._beta_memo:
            if self.beta_fn is not None:
                self._beta_memo[key] = self.beta_fn(n, ctx)
            else:
                self._beta_memo[key] = beta_from_alpha(self, n, ctx)
        return self._beta_memo[key]

    def without_beta(self) -> "BaileyPair":
        """The same pair with the stated beta forgotten (beta then derived)."""
        return BaileyPair(self.t, self.alpha_fn, None, self.name + "(derived)")


def beta_from_alpha(pair: BaileyPair, n: int, ctx: EvalContext) -> Series:
    """beta_n from the defining relation, as an exact finite sum."""
    tq = pair.t.q_shift(1)
    total = ctx.zero()
    for k in range(n + 1):
        term = pair.alpha(k, ctx)
        term = apply_poch(term, mono(1, 1), n - k, ctx, inverse=True)
        term = apply_poch(term, tq, n + k, ctx, inverse=True)
        total = total + term
    return total


# -- example pairs ---------------------------------------------------------


def unit_pair(a_arg: Monomial, b_arg: Monomial) -> BaileyPair:
    """The pair relative to ab/q with beta_n = delta_{n,0}."""
    t = a_arg.times(b_arg).q_shift(-1)

    def alpha(n: int, ctx: EvalContext) -> Series:
        s = ctx.series(tau_monomial(n))
        s = s.mul_one_minus(t.q_shift(2 * n))
        s = s.div_one_minus(t)
        s = apply_poch(s, t, n, ctx)
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        return s

    def beta(n: int, ctx: EvalContext) -> Series:
        return ctx.one() if n == 0 else ctx.zero()

    return BaileyPair(t, alpha, beta, "unit")


def t0_pair_1(x_arg: Monomial) -> BaileyPair:
    """alpha_n = (-1)**n x**n q**((n**2-n)/2)/(q;q)_n, beta_n = (x;q)_n/(q;q)_n."""

    def alpha(n: int, ctx: EvalContext) -> Series:
        s = ctx.series(x_arg.power(n).q_shift((n * n - n) // 2))
        if n % 2:
            s = -s
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        return s

    def beta(n: int, ctx: EvalContext) -> Series:
        s = apply_poch(ctx.one(), x_arg, n, ctx)
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        return s

    return BaileyPair(mono(0), alpha, beta, "t0-1")


def t0_pair_2(x_arg: Monomial) -> BaileyPair:
    """alpha_n = x**n q**(n**2)/((q,xq;q)_n), beta_n = 1/((q,xq;q)_n)."""

    def divide(s: Series, n: int, ctx: EvalContext) -> Series:
        for j in range(1, n + 1):
            s = s.div_one_minus(mono(1, j))
        return apply_poch(s, x_arg.q_shift(1), n, ctx, inverse=True)

    def alpha(n: int, ctx: EvalContext) -> Series:
        return divide(ctx.series(x_arg.power(n).q_shift(n * n)), n, ctx)

    def beta(n: int, ctx: EvalContext) -> Series:
        return divide(ctx.one(), n, ctx)

    return BaileyPair(mono(0), alpha, beta, "t0-2")


# -- the transform ---------------------------------------------------------


def warnaar_L_transform_sides(
    pair: BaileyPair,
    ctx: EvalContext,
    a_arg: Optional[Monomial] = None,
    b_arg: Optional[Monomial] = None,
) -> tuple[Series, Series]:
    """Both sides of the L-transform for a pair relative to ab/q (or 0).

    LHS: sum_n L(a*q**(n+1), b*q**(n+1)) q**n alpha_n
    RHS: (q, aq, bq;q)_inf sum_n (ab;q)_{2n} q**n beta_n / ((aq, bq;q)_n)
    """
    if a_arg is None:
        a_arg = ctx.gen_a()
    if b_arg is None:
        b_arg = ctx.gen_b()
    x = a_arg.times(b_arg)
    w_hi = ctx.window.q_hi
    lhs = ctx.zero()
    n = 0
    while True:
        alpha = pair.alpha(n, ctx)
        floor = alpha.support_weight_min()
        if floor is not None and floor + n > w_hi:
            break
        if floor is None and n > w_hi:
            break
        if floor is not None and floor + n < n - 8 or n > 2 * w_hi + 40:
            raise NonTruncatable(
                "transform terms do not raise the q-order (n = %d)" % n
            )
        if floor is not None:
            term = L_kernel(ctx, a_arg.q_shift(n + 1), b_arg.q_shift(n + 1))
            lhs = lhs + term.mul_monomial(mono(1, n)) * alpha
        n += 1

    rhs = ctx.zero()
    n = 0
    while n <= w_hi:
        term = pair.beta(n, ctx).mul_monomial(mono(1, n))
        term = apply_poch(term, x, 2 * n, ctx)
        term = apply_poch(term, a_arg.q_shift(1), n, ctx, inverse=True)
        term = apply_poch(term, b_arg.q_shift(1), n, ctx, inverse=True)
        rhs = rhs + term
        n += 1
    rhs = apply_poch(rhs, mono(1, 1), None, ctx)
    rhs = apply_poch(rhs, a_arg.q_shift(1), None, ctx)
    rhs = apply_poch(rhs, b_arg.q_shift(1), None, ctx)
    return lhs, rhs
