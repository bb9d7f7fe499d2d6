"""Exact truncated Laurent-series arithmetic in q (and optionally a, b).

Coefficients are exact rationals.  A series is a sparse map from exponent
triples (e_q, e_a, e_b) to nonzero coefficients together with a validity
window: coefficients are certified exact inside the window, certified zero
below its lower (support) bounds, and unknown above its upper bounds.

The upper q-bound is stored in a *weighted* form: a triple is inside the
window only if ``e_q + tilt*(e_a + e_b) <= q_hi``.  With ``tilt = 0`` this
is an ordinary box.  Symbolic computations use ``tilt = 2`` so that
inverting factors such as ``1 - a*b/q**2`` (whose expansion has q-exponent
``-2k`` at a,b-degree ``2k``) does not destroy the q-window: every series
the engine builds keeps weight ``e_q + 2*(e_a + e_b) >= 0`` on its support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .errors import EmptyWindow, NotInvertible, OutOfWindow, PoleAtZero

Rat = Fraction
Coeff = Union[int, Fraction]

#: Sentinel used for "formal" variable bindings in EvalContext.
FORMAL = None

_BIG = 1 << 30


def _norm(c: Coeff) -> Coeff:
    """Collapse integer-valued Fractions to plain ints (cheaper arithmetic)."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_rat(c: Coeff) -> Fraction:
    return c if type(c) is Fraction else Fraction(c)


def format_rat(c: Coeff) -> str:
    c = as_rat(c)
    return "%d/%d" % (c.numerator, c.denominator)


def parse_rat(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class Monomial:
    """A single term c * q**e_q * a**e_a * b**e_b."""

    coef: Coeff = 1
    e_q: int = 0
    e_a: int = 0
    e_b: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "coef", _norm(self.coef))
        if self.coef == 0 and (self.e_q or self.e_a or self.e_b):
            # canonical zero monomial
            object.__setattr__(self, "e_q", 0)
            object.__setattr__(self, "e_a", 0)
            object.__setattr__(self, "e_b", 0)

    def is_zero(self) -> bool:
        return self.coef == 0

    def weight(self, tilt: int) -> int:
        return self.e_q + tilt * (self.e_a + self.e_b)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(
            _norm(as_rat(self.coef) * other.coef) if self.coef and other.coef else 0,
            self.e_q + other.e_q,
            self.e_a + other.e_a,
            self.e_b + other.e_b,
        )

    def q_shift(self, k: int) -> "Monomial":
        if self.coef == 0:
            return self
        return Monomial(self.coef, self.e_q + k, self.e_a, self.e_b)

    def inverse(self) -> "Monomial":
        if self.coef == 0:
            raise PoleAtZero("cannot invert the zero monomial")
        return Monomial(Fraction(1, 1) / as_rat(self.coef), -self.e_q, -self.e_a, -self.e_b)

    def power(self, n: int) -> "Monomial":
        if n == 0:
            return Monomial(1)
        if self.coef == 0:
            if n < 0:
                raise PoleAtZero("negative power of zero monomial")
            return self
        return Monomial(as_rat(self.coef) ** n, n * self.e_q, n * self.e_a, n * self.e_b)

    def __str__(self) -> str:
        parts = [str(self.coef)]
        for sym, e in (("q", self.e_q), ("a", self.e_a), ("b", self.e_b)):
            if e:
                parts.append("%s^%d" % (sym, e))
        return "*".join(parts)


def mono(coef: Coeff = 1, e_q: int = 0, e_a: int = 0, e_b: int = 0) -> Monomial:
    return Monomial(coef, e_q, e_a, e_b)


ZERO_MONOMIAL = Monomial(0)


@dataclass(frozen=True)
class Window:
    """Validity window of a series.

    ``q_lo``, ``a_lo``, ``b_lo`` are support bounds (coefficients below them
    are certified zero).  ``a_hi``, ``b_hi`` bound the known degree range,
    and ``q_hi`` bounds the *weighted* q-order ``e_q + tilt*(e_a + e_b)``.
    """

    q_lo: int
    q_hi: int
    a_lo: int = 0
    a_hi: int = 0
    b_lo: int = 0
    b_hi: int = 0
    tilt: int = 0

    def contains(self, e_q: int, e_a: int, e_b: int) -> bool:
        return (
            self.a_lo <= e_a <= self.a_hi
            and self.b_lo <= e_b <= self.b_hi
            and self.q_lo <= e_q
            and e_q + self.tilt * (e_a + e_b) <= self.q_hi
        )

    def is_empty(self) -> bool:
        if self.a_lo > self.a_hi or self.b_lo > self.b_hi:
            return True
        return self.q_lo + self.tilt * (self.a_lo + self.b_lo) > self.q_hi

    def weight(self, e_q: int, e_a: int, e_b: int) -> int:
        return e_q + self.tilt * (e_a + e_b)

    def plain_q_hi(self) -> int:
        """Largest q-exponent guaranteed exact at every in-box a,b degree."""
        return self.q_hi - self.tilt * (max(self.a_hi, 0) + max(self.b_hi, 0))

    def intersect(self, other: "Window") -> "Window":
        if self.tilt != other.tilt:
            raise ValueError("cannot mix windows of different tilt")
        return Window(
            min(self.q_lo, other.q_lo),
            min(self.q_hi, other.q_hi),
            min(self.a_lo, other.a_lo),
            min(self.a_hi, other.a_hi),
            min(self.b_lo, other.b_lo),
            min(self.b_hi, other.b_hi),
            self.tilt,
        )

    def shifted(self, m: Monomial) -> "Window":
        return Window(
            self.q_lo + m.e_q,
            self.q_hi + m.weight(self.tilt),
            self.a_lo + m.e_a,
            self.a_hi + m.e_a,
            self.b_lo + m.e_b,
            self.b_hi + m.e_b,
            self.tilt,
        )


class Series:
    """Sparse truncated Laurent series over exact rationals.

    Values are immutable after construction; every operation returns a new
    series.  Stored coefficients are nonzero and inside the window.
    """

    __slots__ = ("terms", "window")

    def __init__(self, terms, window: Window, _trusted: bool = False):
        if _trusted:
            self.terms = terms
        else:
            # inlined window filter + normalization (hot path)
            q_lo, q_hi = window.q_lo, window.q_hi
            a_lo, a_hi = window.a_lo, window.a_hi
            b_lo, b_hi = window.b_lo, window.b_hi
            tilt = window.tilt
            clean = {}
            for key, c in terms.items():
                if type(c) is Fraction and c.denominator == 1:
                    c = c.numerator
                if c == 0:
                    continue
                eq, ea, eb = key
                if (
                    a_lo <= ea <= a_hi
                    and b_lo <= eb <= b_hi
                    and q_lo <= eq
                    and eq + tilt * (ea + eb) <= q_hi
                ):
                    clean[key] = c
            self.terms = clean
        self.window = window

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(window: Window) -> "Series":
        return Series({}, window, _trusted=True)

    @staticmethod
    def one(window: Window) -> "Series":
        return Series({(0, 0, 0): 1}, window)

    @staticmethod
    def from_monomial(m: Monomial, window: Window) -> "Series":
        if m.coef == 0:
            return Series.zero(window)
        return Series({(m.e_q, m.e_a, m.e_b): m.coef}, window)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, e_q: int, e_a: int = 0, e_b: int = 0) -> Fraction:
        if not self.window.contains(e_q, e_a, e_b):
            raise OutOfWindow(
                "(%d, %d, %d) outside window %s" % (e_q, e_a, e_b, self.window)
            )
        return as_rat(self.terms.get((e_q, e_a, e_b), 0))

    def support_weight_min(self) -> Optional[int]:
        """Smallest weighted q-order on the support, or None if zero."""
        if not self.terms:
            return None
        tilt = self.window.tilt
        return min(eq + tilt * (ea + eb) for (eq, ea, eb) in self.terms)

    def min_q_order(self) -> Optional[int]:
        if not self.terms:
            return None
        return min(eq for (eq, _, _) in self.terms)

    def iter_sorted(self) -> Iterator[tuple[tuple[int, int, int], Coeff]]:
        for key in sorted(self.terms):
            yield key, self.terms[key]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (eq, ea, eb), c in self.iter_sorted():
            bits.append(str(Monomial(c, eq, ea, eb)))
        return " + ".join(bits)

    def __repr__(self) -> str:
        return "Series(%d terms, window=%r)" % (len(self.terms), self.window)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.terms == other.terms and self.window == other.window

    def __hash__(self) -> int:
        return hash((frozenset(self.terms.items()), self.window))

    # -- effective support bounds for window propagation -------------------

    def _eff_bounds(self) -> tuple[int, int, int]:
        """(weight, e_a, e_b) lower bounds on the possibly-nonzero region.

        The possibly-nonzero region is the support plus the unknown territory
        above the window's upper bounds.  For the weight bound only in-box
        unknowns (weight > q_hi) matter: a product decomposition that uses a
        term above a factor's a/b degree bound lands above the product's
        propagated a/b bound and is excluded by the box, not the weight.
        """
        w = self.window
        unk_w = w.q_hi + 1
        sw = self.support_weight_min()
        eff_w = unk_w if sw is None else min(sw, unk_w)
        if self.terms:
            ea_min = min(ea for (_, ea, _) in self.terms)
            eb_min = min(eb for (_, _, eb) in self.terms)
        else:
            ea_min, eb_min = _BIG, _BIG
        return eff_w, min(ea_min, w.a_lo), min(eb_min, w.b_lo)

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "Series":
        return Series({k: -c for k, c in self.terms.items()}, self.window, _trusted=True)

    def __add__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        w1, w2 = self.window, other.window
        same = w1 == w2
        win = w1 if same else w1.intersect(w2)
        if win.is_empty():
            raise EmptyWindow("empty window in add: %r + %r" % (w1, w2))
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        # if the upper bounds agree, every operand key is valid in the
        # intersection (lower bounds only certify zeros below them)
        trusted = same or (
            w1.q_hi == w2.q_hi and w1.a_hi == w2.a_hi and w1.b_hi == w2.b_hi
        )
        return Series(out, win, _trusted=trusted)

    def __sub__(self, other: "Series") -> "Series":
        return self.__add__(-other)

    def __mul__(self, other) -> "Series":
        if isinstance(other, Monomial):
            return self.mul_monomial(other)
        if isinstance(other, (int, Fraction)):
            return self.mul_monomial(Monomial(other))
        if not isinstance(other, Series):
            return NotImplemented
        return _mul_series(self, other)

    __rmul__ = __mul__

    def mul_monomial(self, m: Monomial) -> "Series":
        """Exact product with a single monomial (pure shift/scale)."""
        if m.coef == 0:
            return Series.zero(self.window)
        if (m.e_q, m.e_a, m.e_b) == (0, 0, 0):
            c = m.coef
            if c == 1:
                return self
            return Series(
                {k: _norm(as_rat(v) * c) for k, v in self.terms.items()},
                self.window,
                _trusted=True,
            )
        win = self.window.shifted(m)
        dq, da, db, c = m.e_q, m.e_a, m.e_b, m.coef
        if c == 1:
            out = {(eq + dq, ea + da, eb + db): v for (eq, ea, eb), v in self.terms.items()}
        else:
            out = {
                (eq + dq, ea + da, eb + db): _norm(as_rat(v) * c)
                for (eq, ea, eb), v in self.terms.items()
            }
        return Series(out, win, _trusted=True)

    def mul_one_minus(self, m: Monomial) -> "Series":
        """Product with the binomial (1 - m); the workhorse of Pochhammer chains."""
        if m.coef == 0:
            return self
        tilt = self.window.tilt
        # fused: subtract the shifted copy in one pass.  The result window is
        # the intersection with the shifted window; its lower bounds only drop
        # (support-union semantics), so only upper bounds need re-checking,
        # and only when the shift moves some direction downward.
        win = self.window.intersect(self.window.shifted(m))
        q_hi, a_hi, b_hi = win.q_hi, win.a_hi, win.b_hi
        dq, da, db, c = m.e_q, m.e_a, m.e_b, m.coef
        if m.weight(tilt) >= 0 and da >= 0 and db >= 0:
            out = dict(self.terms)
        else:
            out = {
                key: v
                for key, v in self.terms.items()
                if key[1] <= a_hi
                and key[2] <= b_hi
                and key[0] + tilt * (key[1] + key[2]) <= q_hi
            }
        for (eq, ea, eb), v in self.terms.items():
            ea2 = ea + da
            eb2 = eb + db
            eq2 = eq + dq
            if ea2 > a_hi or eb2 > b_hi or eq2 + tilt * (ea2 + eb2) > q_hi:
                continue
            key = (eq2, ea2, eb2)
            s = out.get(key, 0) - v * c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Series(out, win, _trusted=True)

    def div_one_minus(self, m: Monomial) -> "Series":
        """Quotient by the binomial (1 - m).

        Requires m to raise the (weight, a+b degree) order so the defining
        recurrence u = s + m*u is well-founded; falls back to the general
        inverse for Laurent units such as 1 - c/q**2 with rational c.
        """
        if m.coef == 0:
            return self
        tilt = self.window.tilt
        dw = m.weight(tilt)
        dd = m.e_a + m.e_b
        if dw < 0 or (dw == 0 and dd <= 0):
            if (m.e_q, m.e_a, m.e_b) == (0, 0, 0):
                if m.coef == 1:
                    raise NotInvertible("division by 1 - 1 = 0")
                return self.mul_monomial(Monomial(Fraction(1, 1) / (1 - as_rat(m.coef))))
            w = self.window
            bw = Window(
                min(w.q_lo, m.e_q, 0),
                max(w.q_hi, dw, 0),
                min(w.a_lo, m.e_a, 0),
                max(w.a_hi, m.e_a, 0),
                min(w.b_lo, m.e_b, 0),
                max(w.b_hi, m.e_b, 0),
                tilt,
            )
            return self * invert(Series.one(bw).mul_one_minus(m))
        win = self.window
        if win.is_empty():
            raise EmptyWindow("empty window in div_one_minus")
        # solve u = s + m*u level by level: each level holds the keys of one
        # (weight, a+b degree) pair, and m moves levels strictly upward in
        # lexicographic order, so processing levels in that order is exact.
        q_lo, q_hi = win.q_lo, win.q_hi
        a_lo, a_hi = win.a_lo, win.a_hi
        b_lo, b_hi = win.b_lo, win.b_hi
        dq, da, db, c = m.e_q, m.e_a, m.e_b, m.coef
        if da == 0 and db == 0 and dq <= 4:
            # small pure q-power divisor: run the recurrence densely along each
            # fixed-(e_a, e_b) slice, avoiding the level heap entirely
            out = {}
            slices: dict = {}
            for (eq, ea, eb), v in self.terms.items():
                s = slices.get((ea, eb))
                if s is None:
                    s = slices[(ea, eb)] = {}
                s[eq] = s.get(eq, 0) + v
            for (ea, eb), src in slices.items():
                hi = q_hi - tilt * (ea + eb)
                acc: dict = {}
                for eq in range(min(src), hi + 1):
                    val = src.get(eq, 0)
                    p = acc.get(eq - dq)
                    if p is not None:
                        val = val + p * c
                    if val:
                        acc[eq] = val
                        out[(eq, ea, eb)] = val
            return Series(out, win, _trusted=True)
        if not self.terms:
            return Series.zero(win)
        # the divisor moves every key strictly up in a+b degree (dd > 0) or,
        # failing that, in weight (dw > 0), so a bounded array of level
        # buckets processed in order solves u = s + m*u exactly
        if dd > 0:
            lvl_lo = a_lo + b_lo
            nlev = a_hi + b_hi - lvl_lo + 1
            step = dd
            buckets: list = [None] * nlev
            for key, v in self.terms.items():
                i = key[1] + key[2] - lvl_lo
                bkt = buckets[i]
                if bkt is None:
                    bkt = buckets[i] = {}
                bkt[key] = v
        else:
            lvl_lo = min(eq + tilt * (ea + eb) for (eq, ea, eb) in self.terms)
            nlev = q_hi - lvl_lo + 1
            step = dw
            buckets = [None] * nlev
            for key, v in self.terms.items():
                i = key[0] + tilt * (key[1] + key[2]) - lvl_lo
                bkt = buckets[i]
                if bkt is None:
                    bkt = buckets[i] = {}
                bkt[key] = v
        out: dict = {}
        for i in range(nlev):
            cur = buckets[i]
            if not cur:
                continue
            j = i + step
            tgt = buckets[j] if j < nlev else None
            for key, v in cur.items():
                if v == 0:
                    continue
                out[key] = v
                eq, ea, eb = key
                ea2 = ea + da
                eb2 = eb + db
                if ea2 > a_hi or eb2 > b_hi or ea2 < a_lo or eb2 < b_lo:
                    continue
                eq2 = eq + dq
                if eq2 < q_lo or eq2 + tilt * (ea2 + eb2) > q_hi:
                    continue
                if tgt is None:
                    tgt = buckets[j] = {}
                nk = (eq2, ea2, eb2)
                tgt[nk] = tgt.get(nk, 0) + v * c
        return Series(out, win, _trusted=True)


def _mul_series(s1: Series, s2: Series) -> Series:
    if s1.window.tilt != s2.window.tilt:
        raise ValueError("cannot multiply series of different tilt")
    w1, w2 = s1.window, s2.window
    e1, e2 = s1._eff_bounds(), s2._eff_bounds()
    win = Window(
        w1.q_lo + w2.q_lo,
        min(w1.q_hi + e2[0], w2.q_hi + e1[0]),
        w1.a_lo + w2.a_lo,
        min(w1.a_hi + e2[1], w2.a_hi + e1[1]),
        w1.b_lo + w2.b_lo,
        min(w1.b_hi + e2[2], w2.b_hi + e1[2]),
        w1.tilt,
    )
    if win.is_empty():
        raise EmptyWindow("empty window in mul")
    if not s1.terms or not s2.terms:
        return Series.zero(win)
    small, big = (s1.terms, s2.terms) if len(s1.terms) <= len(s2.terms) else (s2.terms, s1.terms)
    contains = win.contains
    out: dict = {}
    for (eq1, ea1, eb1), c1 in small.items():
        c1r = as_rat(c1) if type(c1) is Fraction else c1
        for (eq2, ea2, eb2), c2 in big.items():
            key = (eq1 + eq2, ea1 + ea2, eb1 + eb2)
            if not contains(*key):
                continue
            v = out.get(key, 0) + c1r * c2
            if v:
                out[key] = v
            else:
                del out[key]
    return Series({k: _norm(v) for k, v in out.items() if v != 0}, win, _trusted=True)


# -- public operation aliases (functional style) ---------------------------


def add(s1: Series, s2: Series) -> Series:
    return s1 + s2


def mul(s1: Series, s2: Series) -> Series:
    return s1 * s2


def coeff_at(s: Series, e_q: int, e_a: int = 0, e_b: int = 0) -> Fraction:
    return s.coeff(e_q, e_a, e_b)


def invert(s: Series) -> Series:
    """Inverse of a Laurent unit on its propagated window.

    The lowest-q-order slice of s at a,b-degree zero must be a single
    monomial c*q**d; the inverse is computed by the geometric expansion of
    1/(1 + r) after normalizing that monomial away.
    """
    pure = {eq: c for (eq, ea, eb), c in s.terms.items() if ea == 0 and eb == 0}
    if not pure:
        raise NotInvertible("no pure q-power at a,b-degree 0")
    d = min(pure)
    c = pure[d]
    tilt = s.window.tilt
    u = s.mul_monomial(Monomial(Fraction(1, 1) / as_rat(c), -d, 0, 0))
    r = {}
    for key, v in u.terms.items():
        if key == (0, 0, 0):
            continue
        eq, ea, eb = key
        w = eq + tilt * (ea + eb)
        deg = ea + eb
        if w < 0 or (w == 0 and deg <= 0):
            raise NotInvertible(
                "term %s obstructs geometric inversion" % (Monomial(v, eq, ea, eb),)
            )
        r[key] = v
    win = u.window
    if win.is_empty():
        raise EmptyWindow("empty window in invert")
    neg_r = -Series(r, win, _trusted=True)
    total = Series.one(win)
    power = Series.one(win)
    guard = 0
    while True:
        power = _mul_series(power, neg_r)
        # clip back to the target window: powers only move up in
        # (weight, a+b degree), so anything outside stays outside
        power = Series(power.terms, power.window.intersect(win))
        if power.is_zero():
            break
        total = total + power
        guard += 1
        if guard > 100000:
            raise NotInvertible("geometric inversion failed to terminate")
    return total.mul_monomial(Monomial(Fraction(1, 1) / as_rat(c), -d, 0, 0))


# -- evaluation context ----------------------------------------------------


@dataclass(frozen=True)
class EvalContext:
    """Engine selection and truncation orders.

    ``a_binding``/``b_binding`` are either FORMAL (None), keeping the
    variable as a symbolic generator, or an exact rational to substitute.
    Reported results cover q-orders up to ``q_order``; internal work runs
    with ``q_slack`` extra orders plus, in symbolic mode, headroom of
    ``2*(a cap + b cap)`` so that the full requested box is exact.
    """

    a_binding: Optional[Fraction] = FORMAL
    b_binding: Optional[Fraction] = FORMAL
    q_order: int = 30
    q_slack: int = 8
    ab_degree_cap: int = 10
    ab_laurent_floor: int = 0

    def __post_init__(self) -> None:
        if self.q_order < 1:
            raise ValueError("q_order must be positive")
        if self.q_slack < 0:
            raise ValueError("q_slack must be non-negative")
        if self.ab_degree_cap < 1:
            raise ValueError("ab_degree_cap must be positive")
        if self.ab_laurent_floor > 0:
            raise ValueError("ab_laurent_floor must be non-positive")
        for name, v in (("a", self.a_binding), ("b", self.b_binding)):
            if v is not FORMAL:
                v = as_rat(v)
                object.__setattr__(self, name + "_binding", v)
                if v == 0 or v == 1:
                    raise ValueError(
                        "%s binding must avoid {0, 1}; kernels accept an "
                        "explicit zero monomial argument instead" % name
                    )

    @staticmethod
    def symbolic(q_order: int = 30, *, q_slack: int = 8, ab_degree_cap: int = 10,
                 ab_laurent_floor: int = 0) -> "EvalContext":
        return EvalContext(FORMAL, FORMAL, q_order, q_slack, ab_degree_cap, ab_laurent_floor)

    @staticmethod
    def specialized(a: Coeff, b: Coeff, q_order: int = 30, *, q_slack: int = 8) -> "EvalContext":
        return EvalContext(as_rat(a), as_rat(b), q_order, q_slack, 1)

    @staticmethod
    def univariate(q_order: int = 30, *, q_slack: int = 8) -> "EvalContext":
        """Context for identities whose parameters are all explicit rationals."""
        return EvalContext(Fraction(1, 2), Fraction(1, 2), q_order, q_slack, 1)

    @property
    def a_formal(self) -> bool:
        return self.a_binding is FORMAL

    @property
    def b_formal(self) -> bool:
        return self.b_binding is FORMAL

    @property
    def tilt(self) -> int:
        return 2 if (self.a_formal or self.b_formal) else 0

    @property
    def cap_a(self) -> int:
        return self.ab_degree_cap if self.a_formal else 0

    @property
    def cap_b(self) -> int:
        return self.ab_degree_cap if self.b_formal else 0

    @property
    def work_q_hi(self) -> int:
        return self.q_order + self.q_slack + self.tilt * (self.cap_a + self.cap_b)

    @property
    def work_q_lo(self) -> int:
        return -(self.tilt * (self.cap_a + self.cap_b) + self.q_slack + 8)

    @property
    def window(self) -> Window:
        return Window(
            self.work_q_lo,
            self.work_q_hi,
            self.ab_laurent_floor if self.a_formal else 0,
            self.cap_a,
            self.ab_laurent_floor if self.b_formal else 0,
            self.cap_b,
            self.tilt,
        )

    # -- series constructors tied to this context -------------------------

    def zero(self) -> Series:
        return Series.zero(self.window)

    def one(self) -> Series:
        return Series.one(self.window)

    def series(self, m: Monomial) -> Series:
        return Series.from_monomial(m, self.window)

    def gen_a(self) -> Monomial:
        """The a-argument monomial: the generator, or the bound rational."""
        if self.a_formal:
            return Monomial(1, 0, 1, 0)
        return Monomial(self.a_binding)

    def gen_b(self) -> Monomial:
        if self.b_formal:
            return Monomial(1, 0, 0, 1)
        return Monomial(self.b_binding)


def eval_monomial(m: Monomial, ctx: EvalContext) -> Series:
    """Substitute context bindings into a monomial and lift it to a series."""
    if m.coef == 0:
        return ctx.zero()
    coef = as_rat(m.coef)
    e_a, e_b = m.e_a, m.e_b
    if not ctx.a_formal and e_a != 0:
        if ctx.a_binding == 0 and e_a < 0:
            raise PoleAtZero("a**%d with a = 0" % e_a)
        coef *= as_rat(ctx.a_binding) ** e_a
        e_a = 0
    if not ctx.b_formal and e_b != 0:
        if ctx.b_binding == 0 and e_b < 0:
            raise PoleAtZero("b**%d with b = 0" % e_b)
        coef *= as_rat(ctx.b_binding) ** e_b
        e_b = 0
    return Series.from_monomial(Monomial(coef, m.e_q, e_a, e_b), ctx.window)


# -- comparison ------------------------------------------------------------


def first_difference(
    s1: Series, s2: Series, q_max: Optional[int] = None
) -> Optional[tuple[tuple[int, int, int], Fraction, Fraction]]:
    """First exponent triple (in (q, a, b) order) where the series disagree.

    Comparison runs over the intersection of the validity windows, clipped
    to weighted q-order <= q_max + tilt*(a_hi + b_hi) when q_max is given.
    Returns None if the series agree everywhere there.
    """
    win = s1.window.intersect(s2.window)
    w_cap = win.q_hi
    if q_max is not None:
        w_cap = min(w_cap, q_max + win.tilt * (max(win.a_hi, 0) + max(win.b_hi, 0)))
    diffs = []
    keys = set(s1.terms) | set(s2.terms)
    for key in keys:
        eq, ea, eb = key
        if not win.contains(eq, ea, eb):
            continue
        if eq + win.tilt * (ea + eb) > w_cap:
            continue
        c1 = s1.terms.get(key, 0)
        c2 = s2.terms.get(key, 0)
        if c1 != c2:
            diffs.append(key)
    if not diffs:
        return None
    key = min(diffs)
    return key, as_rat(s1.terms.get(key, 0)), as_rat(s2.terms.get(key, 0))


def equal_on_window(s1: Series, s2: Series, q_max: Optional[int] = None) -> bool:
    return first_difference(s1, s2, q_max) is None
