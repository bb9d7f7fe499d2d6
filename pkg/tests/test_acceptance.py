"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest -v`` (add ``-s`` to watch the lines appear live).
"""

import json
import random
from fractions import Fraction

from qtheta import (
    EvalContext,
    L_kernel,
    Monomial,
    Series,
    U_m,
    V_mn,
    apply_poch,
    beta_from_alpha,
    build_registry,
    cli,
    coeff_at,
    equal_on_window,
    first_difference,
    invert,
    mono,
    partial_theta,
    poch_finite,
    poch_inf,
    psi,
    t0_pair_1,
    t0_pair_2,
    tau_monomial,
    unit_pair,
    warnaar_L_transform_sides,
)

ZERO = mono(0)


def _report(number: int, ok: bool, description: str) -> None:
    print("ACCEPTANCE %d: %s — %s" % (number, "PASS" if ok else "FAIL", description))
    assert ok, "acceptance criterion %d failed: %s" % (number, description)


def test_acceptance_1_full_suite(capsys):
    code = cli.run([
        "verify", "all", "--order", "30", "--points", "3",
        "--jobs", "1", "--output", "json", "--no-timing",
    ])
    out = capsys.readouterr().out
    reports = json.loads(out)
    names = {r["identity"] for r in reports}
    ok = (
        code == 0
        and len(names) >= 27
        and all(r["verdict"] == "pass" for r in reports)
        and all(r["first_diff"] is None for r in reports)
    )
    with capsys.disabled():
        _report(1, ok, "verify all --order 30 --points 3 exits 0, "
                       "%d reports over %d identities" % (len(reports), len(names)))


def test_acceptance_2_coefficient_theorem(capsys):
    ctx = EvalContext.symbolic(50, ab_degree_cap=10)
    s = L_kernel(ctx)
    win = ctx.window
    ok = True
    for i in range(11):
        for j in range(11 - i):
            t = tau_monomial(i + j)  # (-1)^(i+j) q^((i+j)(i+j-1)/2)
            key = (t.e_q, i, j)
            if win.contains(*key):
                if s.terms.get(key, 0) != t.coef:
                    ok = False
    with capsys.disabled():
        _report(2, ok, "L(a,b) order 50 cap 10: coeff(a^i b^j) = tau(i+j) "
                       "for all i+j <= 10")


def test_acceptance_3_special_values(capsys):
    ctx = EvalContext.symbolic(30, ab_degree_cap=8)
    a, b = ctx.gen_a(), ctx.gen_b()
    ab = a.times(b)
    ok = equal_on_window(U_m(1, ctx), ctx.one())
    ok = ok and first_difference(
        U_m(2, ctx), ctx.one() + ctx.series(mono(1, 1, 0, 1))
    ) is None
    ok = ok and first_difference(U_m(0, ctx), partial_theta(b, ctx)) is None
    for n in range(6):
        ok = ok and equal_on_window(V_mn(0, n, ctx), ctx.one())
        # V_{1,n} = (1 - abq^{n-1} + b(1-q^n)) / (1 - abq^{n-1})
        num = ctx.one().mul_one_minus(ab.q_shift(n - 1))
        num = num + ctx.series(b).mul_one_minus(mono(1, n))
        v1 = num.div_one_minus(ab.q_shift(n - 1))
        ok = ok and first_difference(V_mn(1, n, ctx), v1) is None
        # V_{2,n} = 1 + b(1+q)(1-q^n)/(1-abq^{n-1})
        #             + b^2 q^2 (1-q^{n-1})(1-q^n)/((1-abq^{n-1})(1-abq^n))
        p1 = (ctx.series(b) + ctx.series(b.q_shift(1))).mul_one_minus(mono(1, n))
        p1 = p1.div_one_minus(ab.q_shift(n - 1))
        p2 = ctx.series(b.power(2).q_shift(2))
        p2 = p2.mul_one_minus(mono(1, n - 1)).mul_one_minus(mono(1, n))
        p2 = p2.div_one_minus(ab.q_shift(n - 1)).div_one_minus(ab.q_shift(n))
        ok = ok and first_difference(V_mn(2, n, ctx), ctx.one() + p1 + p2) is None
    with capsys.disabled():
        _report(3, ok, "U_1 = 1, U_2 = 1 + bq, U_0 = theta(q,b) at order 30; "
                       "V_{0,n} = 1 and V_{1,n}, V_{2,n} closed forms, n <= 5")


def _bailey_points(tag, count):
    points = []
    for i in range(count):
        rng = random.Random("bailey:%s:%d" % (tag, i))
        while True:
            vals = (Fraction(rng.randint(2, 50), rng.randint(2, 50)),
                    Fraction(rng.randint(2, 50), rng.randint(2, 50)))
            if vals[0] * vals[1] != 1:
                break
        points.append(vals)
    return points


def test_acceptance_4_bailey(capsys):
    ok = True
    ctx6 = EvalContext.univariate(20)
    pairs = [
        ("unit", lambda av, bv: unit_pair(Monomial(av), Monomial(bv))),
        ("t0_1", lambda av, bv: t0_pair_1(Monomial(av))),
        ("t0_2", lambda av, bv: t0_pair_2(Monomial(av))),
    ]
    for tag, make in pairs:
        for i, (av, bv) in enumerate(_bailey_points(tag, 3)):
            pair = make(av, bv)
            # defining relation: beta derived from alpha, n <= 6
            for n in range(7):
                got = beta_from_alpha(pair, n, ctx6)
                ok = ok and first_difference(got, pair.beta(n, ctx6)) is None
            # transform identity at order 20; b = 0 degeneration for t pairs
            ctx = EvalContext.univariate(20)
            a_arg = Monomial(av) if tag != "unit" else Monomial(Fraction(av))
            b_arg = Monomial(bv) if tag == "unit" else ZERO
            lhs, rhs = warnaar_L_transform_sides(pair, ctx, a_arg, b_arg)
            ok = ok and equal_on_window(lhs, rhs, 20)
            if tag == "unit":
                # the unit pair collapses the transform to (q,aq,bq;q)_inf
                prod = poch_inf(mono(1, 1), ctx)
                prod = prod * poch_inf(Monomial(av).q_shift(1), ctx)
                prod = prod * poch_inf(Monomial(bv).q_shift(1), ctx)
                ok = ok and equal_on_window(rhs, prod, 20)
    with capsys.disabled():
        _report(4, ok, "Bailey defining relation for 3 pairs, n <= 6; "
                       "transform LHS = RHS at order 20, 3 points per pair")


def test_acceptance_5_psi_product(capsys):
    ctx = EvalContext.univariate(100)
    lhs = partial_theta(mono(-1, 1), ctx)  # theta(q, -q)
    rhs = poch_inf(mono(1, 4), ctx, base=4)
    rhs = apply_poch(rhs, mono(-1, 1), None, ctx, base=2)
    tri = {n * (n + 1) // 2 for n in range(16)}
    ok = equal_on_window(lhs, rhs, 100)
    ok = ok and first_difference(lhs, psi(ctx)) is None
    for e in range(101):
        ok = ok and coeff_at(lhs, e) == (1 if e in tri else 0)
    with capsys.disabled():
        _report(5, ok, "theta(q,-q) = (q^4;q^4)_inf (-q;q^2)_inf to order 100; "
                       "coefficient 1 exactly at triangular exponents")


def test_acceptance_6_reduction_coherence(capsys):
    registry = build_registry()
    ctx = EvalContext.symbolic(24, ab_degree_cap=8)
    v = {"a": ctx.gen_a(), "b": ctx.gen_b()}
    gw = registry["generalized_warnaar"].builder
    ok = True
    for params, other in ((
        {"r": 1, "s": 1}, "warnaar_sum"), ({"r": 0, "s": 1}, "bivariate_rep"),
    ):
        g_lhs, g_rhs = gw(ctx, v, params)
        o_lhs, o_rhs = registry[other].builder(ctx, v, {})
        ok = ok and first_difference(g_lhs, o_lhs) is None
        ok = ok and first_difference(g_rhs, o_rhs) is None
    with capsys.disabled():
        _report(6, ok, "generalized_warnaar (1,1) and (0,1) coincide "
                       "coefficientwise with warnaar_sum and bivariate_rep")


def _random_series(rng, ctx, n_terms=4):
    win = ctx.window
    terms = {}
    for _ in range(n_terms):
        ea = rng.randint(0, win.a_hi)
        eb = rng.randint(0, win.b_hi)
        eq = rng.randint(0, max(0, win.q_hi - win.tilt * (ea + eb)))
        terms[(eq, ea, eb)] = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    return Series(terms, win)


def test_acceptance_7_property_suites(capsys):
    ok = True
    # ring axioms, 200 randomized cases
    ctx = EvalContext.symbolic(8, ab_degree_cap=3)
    rng = random.Random(11)
    one = ctx.one()
    for _ in range(200):
        x = _random_series(rng, ctx)
        y = _random_series(rng, ctx)
        z = _random_series(rng, ctx)
        ok = ok and first_difference(x + y, y + x) is None
        ok = ok and first_difference((x + y) + z, x + (y + z)) is None
        ok = ok and first_difference(x * y, y * x) is None
        ok = ok and first_difference((x * y) * z, x * (y * z)) is None
        ok = ok and first_difference(x * (y + z), x * y + x * z) is None
        ok = ok and first_difference(x * one, x) is None
        ok = ok and first_difference(x + (-x), ctx.zero()) is None
    # Pochhammer recurrence and splitting, 100 cases
    ctx1 = EvalContext.univariate(15)
    rng = random.Random(12)
    for _ in range(100):
        x = mono(Fraction(rng.randint(1, 6), rng.randint(1, 6)), rng.randint(0, 2))
        n, m = rng.randint(0, 5), rng.randint(0, 5)
        lhs = poch_finite(x, n + 1, ctx1)
        rhs = poch_finite(x, n, ctx1).mul_one_minus(x.q_shift(n))
        ok = ok and first_difference(lhs, rhs) is None
        lhs = poch_finite(x, m + n, ctx1)
        rhs = apply_poch(poch_finite(x, m, ctx1), x.q_shift(m), n, ctx1)
        ok = ok and first_difference(lhs, rhs) is None
    # invert round-trip, 100 cases
    ctx2 = EvalContext.univariate(12)
    rng = random.Random(13)
    for _ in range(100):
        terms = {(0, 0, 0): Fraction(rng.randint(1, 9))}
        for _ in range(3):
            terms[(rng.randint(1, 12), 0, 0)] = Fraction(
                rng.randint(-9, 9), rng.randint(1, 5)
            )
        s = Series(terms, ctx2.window)
        ok = ok and equal_on_window(s * invert(s), ctx2.one())
    # order-refinement stability: 5 identities at N in {10, 20, 30}
    registry = build_registry()
    stable = ["andrews_yee", "theta_expansion", "f_product_form",
              "corollary_main_added", "mamade_contiguous"]
    for name in stable:
        desc = registry[name]
        runs = []
        for order in (10, 20, 30):
            ctxn = EvalContext.symbolic(order, ab_degree_cap=6)
            gens = {"a": ctxn.gen_a(), "b": ctxn.gen_b()}
            v = {var: gens[desc.sym.get(var, var if var in gens else "a")]
                 for var in desc.vars}
            lhs, rhs = desc.builder(ctxn, v, desc.grid[0])
            ok = ok and first_difference(lhs, rhs) is None
            runs.append(lhs)
        # refining the order must never change an already-certified coefficient
        base = runs[0]
        win = base.window
        for later in runs[1:]:
            for key in set(base.terms) | set(later.terms):
                if win.contains(*key) and later.window.contains(*key):
                    ok = ok and base.terms.get(key, 0) == later.terms.get(key, 0)
    with capsys.disabled():
        _report(7, ok, "ring axioms x200, Pochhammer identities x100, "
                       "invert round-trip x100, order-refinement at N=10/20/30")


def test_acceptance_8_negative_path(capsys):
    code = cli.run([
        "verify", "warnaar_sum", "--perturb", "warnaar_sum",
        "--order", "10", "--jobs", "1", "--output", "json", "--no-timing",
    ])
    out = capsys.readouterr().out
    rep = json.loads(out)[0]
    diff = rep["first_diff"]
    ok = (
        code == 1
        and rep["verdict"] == "fail"
        and diff is not None
        and (diff["e_q"], diff["e_a"], diff["e_b"]) == (3, 0, 0)
        and diff["lhs"] != diff["rhs"]
    )
    with capsys.disabled():
        _report(8, ok, "perturbed fixture exits 1 and reports first "
                       "differing exponent triple (q^3 a^0 b^0)")
