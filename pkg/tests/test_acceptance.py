"""Acceptance suite: one test per shipped guarantee, each printing a
single PASS/FAIL line with the measured quantity next to its bound."""

import json
import math
import random
from fractions import Fraction

from scipy.linalg import expm as scipy_expm

from peocalc import cli
from peocalc.gammafn import recip_gamma
from peocalc.series import FracSeries, rl_derivative
from peocalc.special import (
    bessel_j0,
    kelvin_bei,
    kelvin_ber,
    laguerre_cos,
    laguerre_exp,
    laguerre_sin,
)
from peocalc.umbral import laguerre_semigroup_check, ml_semigroup_discrepancy
from peocalc.weyl import (
    GradedOpSeries,
    Polynomial,
    WeylElement,
    apply,
    berry_graded_check,
    berry_rule_check,
    commutator,
    crofton_glaisher_check,
    graded_exp,
    zassenhaus_coeff,
)
from peocalc import solvers
from peocalc import volterra


def _report(cid: str, ok: bool, detail: str) -> None:
    print(f"{cid} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{cid}: {detail}"


def test_c01_bessel_identification():
    worst = max(
        abs(laguerre_exp(-((t / 2.0) ** 2)).value - bessel_j0(t))
        for t in (0.5, 1.0, 2.0, 5.0, 10.0)
    )
    _report("C01", worst <= 1e-12, f"max |le(-(t/2)^2) - J0(t)| = {worst:.3e} <= 1e-12")


def test_c02_kelvin_identification():
    worst = 0.0
    for x in (0.5, 1.0, 2.0, 5.0):
        z = 2.0 * math.sqrt(x)
        worst = max(
            worst,
            abs(laguerre_cos(x).value - kelvin_ber(z)),
            abs(laguerre_sin(x).value - kelvin_bei(z)),
        )
    _report("C02", worst <= 1e-12, f"max Kelvin deviation = {worst:.3e} <= 1e-12")


def test_c03_laguerre_semigroup():
    exact = True
    for n in range(11):
        for a in range(n + 1):
            lhs = Fraction(math.comb(n, a) ** 2, math.factorial(n) ** 2)
            rhs = Fraction(1, math.factorial(a) ** 2 * math.factorial(n - a) ** 2)
            exact = exact and lhs == rhs
    resid = laguerre_semigroup_check(0.7, -0.3)
    ok = exact and resid <= 1e-13
    _report(
        "C03",
        ok,
        f"coefficients exact n<=10: {exact}; residual(0.7,-0.3) = {resid:.3e} <= 1e-13",
    )


def test_c04_weyl_rule_and_disentanglement():
    pairs = [
        (Fraction(2, 3), Fraction(-1, 2)),
        (Fraction(1), Fraction(1)),
        (Fraction(-3, 5), Fraction(1, 7)),
    ]
    k = 6
    drift_ok = chain_ok = True
    for a, b in pairs:
        x_el = WeylElement.x_op().scale(a)
        y_el = WeylElement.d_op().scale(b)
        whole = graded_exp(GradedOpSeries.single(1, x_el + y_el, k))
        comm = commutator(x_el, y_el)
        drift = (
            graded_exp(GradedOpSeries.single(2, comm.scale(Fraction(-1, 2)), k))
            * graded_exp(GradedOpSeries.single(1, x_el, k))
            * graded_exp(GradedOpSeries.single(1, y_el, k))
        )
        drift_ok = drift_ok and whole == drift
        cs = zassenhaus_coeff(x_el, y_el, k)
        chain = graded_exp(GradedOpSeries.single(1, x_el, k)) * graded_exp(
            GradedOpSeries.single(1, y_el, k)
        )
        for m in range(2, k + 1):
            cm = cs.get(m, WeylElement.zero())
            if not cm.is_zero:
                chain = chain * graded_exp(GradedOpSeries.single(m, cm, k))
        chain_ok = chain_ok and whole == chain
    x2 = WeylElement.d_op(2).scale(Fraction(1, 3))
    y2 = WeylElement.x_op().scale(Fraction(2, 5))
    cs = zassenhaus_coeff(x2, y2, 5)
    c2_ok = cs[2] == commutator(y2, x2).scale(Fraction(1, 2))
    c3_ok = cs[3] == commutator(cs[2], x2 + y2.scale(2)).scale(Fraction(1, 3))
    heat = zassenhaus_coeff(WeylElement.d_op(2), WeylElement.x_op(), 5)
    z45_ok = all(heat.get(m, WeylElement.zero()).is_zero for m in (4, 5))
    ok = drift_ok and chain_ok and c2_ok and c3_ok and z45_ok
    _report(
        "C04",
        ok,
        "grade-6 exact: drift product "
        f"{drift_ok}, correction chain {chain_ok}, C2 {c2_ok}, C3 {c3_ok}, "
        f"C4=C5=0 {z45_ok}",
    )


def test_c05_shift_rule_and_cubic_hermite():
    f = Polynomial({4: 1, 2: -2, 1: 3, 0: -1})
    p = Polynomial({4: Fraction(1, 2), 3: -1, 1: 1, 0: -2})
    rule_ok = all(crofton_glaisher_check(f, p, m, 5) for m in (1, 2, 3))
    y = Fraction(1, 3)
    regen_ok = True
    for n in range(10):
        acc = Polynomial({})
        power = Polynomial({n: 1})
        for r in range(n // 3 + 1):
            acc = acc + apply(WeylElement.d_op(3 * r), power).scale(
                y**r * Fraction(1, math.factorial(r))
            )
        regen_ok = regen_ok and acc == solvers.hermite_cubic_poly(n, 1, y)
    ok = rule_ok and regen_ok
    _report(
        "C05",
        ok,
        f"shift rule exact m in 1..3: {rule_ok}; "
        f"exp(y d^3) x^n == H_n for n<=9: {regen_ok}",
    )


def test_c06_oscillator_series():
    rec_ok = True
    for a, b in ((Fraction(1), Fraction(1, 2)), (Fraction(2, 3), Fraction(-3, 5))):
        y = a * a * b / 6
        op = WeylElement.x_op().scale(a) + WeylElement.d_op(2).scale(b / 2)
        for n in range(13):
            got = apply(op, solvers.hermite_cubic_poly(n, a, y))
            rec_ok = rec_ok and got == solvers.hermite_cubic_poly(n + 1, a, y)
    exact = solvers.solve_laguerre_schrodinger_general(
        Polynomial({0: 1}), 1, Fraction(1, 2), 12
    )
    floated = solvers.BivariateSeries(
        {key: complex(c.to_complex()) for key, c in exact.items()}
    )
    resid = (
        solvers.schrodinger_residual(floated, 1, Fraction(1, 2))
        .restrict_t(10)
        .max_abs_coeff()
    )
    ok = rec_ok and resid <= 1e-12
    _report(
        "C06",
        ok,
        f"recurrence exact n<=12: {rec_ok}; termwise residual through order 10 "
        f"= {resid:.3e} <= 1e-12",
    )


def test_c07_matrix_pseudo_exponential():
    rng = random.Random(20260816)
    worst = 0.0
    trials = 0
    while trials < 20:
        m = solvers.Matrix2(*(rng.uniform(-1.0, 1.0) for _ in range(4)))
        lp, lm = m.eigenvalues()
        if abs(lp - lm) < 0.1:
            continue
        trials += 1
        ch = solvers.matrix_laguerre_exp(m, 0.6)
        ser = solvers.matrix_laguerre_exp(m, 0.6, method="series")
        for g, w in zip(
            (ch.a, ch.b, ch.c, ch.d), (ser.a, ser.b, ser.c, ser.d)
        ):
            worst = max(worst, abs(g - w) / max(1.0, abs(w)))
    rot = solvers.pseudo_rotation(2.0, 0.5, 0.9)
    direct = solvers.matrix_laguerre_exp(solvers.Matrix2(0.0, -2.0, 0.5, 0.0), 0.9)
    rot_dev = solvers.matrix_max_diff(rot, direct)
    z = math.sqrt(2.0 * 0.5) * 0.9
    struct_ok = (
        abs(rot.a - rot.d) <= 1e-13
        and abs(rot.b * rot.c + abs(laguerre_sin(z).value) ** 2) <= 1e-12
    )
    ok = worst <= 1e-11 and rot_dev <= 1e-12 and struct_ok
    _report(
        "C07",
        ok,
        f"20 matrices, interpolation vs 60-term series rel = {worst:.3e} <= 1e-11; "
        f"pseudo-rotation deviation = {rot_dev:.3e}, structure {struct_ok}",
    )


def test_c08_fractional_pseudo_eigenfunction():
    worst = 0.0
    for mu in (0.3, 0.5, 0.8):
        fm = Fraction(mu)
        for m in (1.0, -0.7):
            terms = [
                (fm * n, (m**n) * recip_gamma(mu * n + 1.0)) for n in range(15)
            ]
            s = FracSeries(terms, truncation_order=fm * 15, truncated=True)
            resid = (
                rl_derivative(s, mu)
                - s.scale(m)
                - FracSeries.monomial(-mu, recip_gamma(1.0 - mu))
            )
            worst = max(worst, resid.max_abs_coeff(10.0 * mu + 1e-9))
    _report(
        "C08",
        worst <= 1e-12,
        f"RL residual of E_(mu,1)(m t^mu) through 10 mu = {worst:.3e} <= 1e-12",
    )


def test_c09_volterra_neumann_closed_forms():
    mono_ok = True
    for m in (1, 2, 3):
        f = FracSeries.monomial(m, -1, truncation_order=20)
        got = volterra.laguerre_vn_solve(f, 1, 40, 20).partial_sum
        want_terms = []
        n = 0
        while n * (m + 1) <= 20:
            want_terms.append(
                (
                    n * (m + 1),
                    Fraction((-1) ** n, (m + 1) ** (2 * n) * math.factorial(n) ** 2),
                )
            )
            n += 1
        want = FracSeries(want_terms, 20, truncated=True)
        mono_ok = mono_ok and got == want
    st = volterra.laguerre_vn_solve(volterra.cosine_series(24), 1, 6, 24)
    cos_ok = True
    for n in range(1, 5):
        cap = 2 * 6 + n
        clip = lambda e, c: (e, c) if float(e) <= cap else None
        cos_ok = cos_ok and st.iterate(n).map_terms(clip) == (
            volterra.cos_recursion_iterate(n, 6).map_terms(clip)
        )
    from peocalc.series import series_eval

    frac_worst = 0.0
    f = FracSeries.monomial(1, -1, truncation_order=30)
    for alpha in (0.3, 0.7):
        state = volterra.fractional_vn_solve(f, alpha, 1, 6, 30)
        for n in range(6):
            got_v = series_eval(state.iterate(n), 0.9)
            want_v = volterra.fractional_vn_monomial_closed_form(n, alpha, 0.9)
            frac_worst = max(frac_worst, abs(got_v - want_v) / max(1.0, abs(want_v)))
    ok = mono_ok and cos_ok and frac_worst <= 1e-12
    _report(
        "C09",
        ok,
        f"monomial kernels exact through t^20: {mono_ok}; cosine recursion n<=4: "
        f"{cos_ok}; fractional Beta product dev = {frac_worst:.3e} <= 1e-12",
    )


def test_c10_dyson_consistency():
    rows = [[0.3, -0.8], [0.55, 0.1]]
    worst = 0.0
    for alpha in (0.4, 1.0):
        u = volterra.dyson_evolution_operator(
            volterra.MatrixSeries.constant(rows, 8), alpha, 25, 8
        )
        p = [[1.0, 0.0], [0.0, 1.0]]
        n = 0
        while alpha * n <= 8.0 + 1e-9:
            w = recip_gamma(alpha * n + 1.0)
            c = u.coeff_matrix(alpha * n)
            for i in range(2):
                for j in range(2):
                    want = p[i][j] * w
                    worst = max(
                        worst, abs(complex(c[i][j]) - want) / max(1.0, abs(want))
                    )
            p = [
                [sum(p[i][l] * rows[l][j] for l in range(2)) for j in range(2)]
                for i in range(2)
            ]
            n += 1
    grid = [
        [FracSeries.zero(22), FracSeries.constant(1, 22)],
        [FracSeries.monomial(1, 1, truncation_order=22), FracSeries.zero(22)],
    ]
    u = volterra.dyson_evolution_operator(volterra.MatrixSeries(grid), 1, 24, 22)
    got = u.eval(1.0)
    integ = {}
    for steps in (256, 512):
        acc = [[1.0, 0.0], [0.0, 1.0]]
        dt = 1.0 / steps
        for k in range(steps):
            tm = (k + 0.5) * dt
            step = scipy_expm([[0.0, dt], [tm * dt, 0.0]])
            acc = [
                [sum(step[i][l] * acc[l][j] for l in range(2)) for j in range(2)]
                for i in range(2)
            ]
        integ[steps] = acc
    noncomm = max(
        abs(
            complex(got[i][j])
            - (4.0 * integ[512][i][j] - integ[256][i][j]) / 3.0
        )
        for i in range(2)
        for j in range(2)
    )
    ok = worst <= 1e-12 and noncomm <= 1e-8
    _report(
        "C10",
        ok,
        f"constant-generator coefficient dev = {worst:.3e} <= 1e-12; "
        f"non-commuting vs product integrator = {noncomm:.3e} <= 1e-8",
    )


def test_c11_quadratic_generator_rule():
    resid = berry_rule_check(0.1, 0.1, max_degree=6)
    a, b = Fraction(1, 3), Fraction(2, 5)
    mixed_ok = berry_graded_check(a, b, 6)
    x_el = WeylElement.d_op(2).scale(a)
    y_el = WeylElement.x_op().scale(b)
    k = 6
    whole = graded_exp(GradedOpSeries.single(1, x_el + y_el, k))
    cs = zassenhaus_coeff(x_el, y_el, k)
    chain = graded_exp(GradedOpSeries.single(1, x_el, k)) * graded_exp(
        GradedOpSeries.single(1, y_el, k)
    )
    for m in range(2, k + 1):
        cm = cs.get(m, WeylElement.zero())
        if not cm.is_zero:
            chain = chain * graded_exp(GradedOpSeries.single(m, cm, k))
    chain_ok = whole == chain
    ok = resid <= 1e-10 and mixed_ok and chain_ok
    _report(
        "C11",
        ok,
        f"residual over monomials deg<=6 = {resid:.3e} <= 1e-10; mixed-form split "
        f"{mixed_ok}; correction-chain agreement {chain_ok}",
    )


def test_c12_trig_table_and_zeros(capsys):
    rc = cli.main(["plot-trig", "-10", "10", "0.5"])
    captured = capsys.readouterr()
    rows = [line.split(",") for line in captured.out.splitlines()[1:]]
    by_x = {float(r[0]): (float(r[1]), float(r[2])) for r in rows}
    origin_ok = by_x[0.0] == (1.0, 0.0)
    zero_lines = [
        line for line in captured.err.splitlines() if line.startswith("ls zero")
    ]
    neg = float(zero_lines[0].split("=")[1])
    pos = float(zero_lines[1].split("=")[1])
    lo, hi = 5.0, 8.0
    flo = kelvin_bei(2.0 * math.sqrt(lo))
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = kelvin_bei(2.0 * math.sqrt(mid))
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    bei_zero = 0.5 * (lo + hi)
    dev = abs(pos - bei_zero)
    ok = rc == 0 and origin_ok and neg < 0 < pos and dev <= 1e-8
    with capsys.disabled():
        _report(
            "C12",
            ok,
            f"row at 0 is (0,1,0): {origin_ok}; zeros at {neg:.6f}, {pos:.6f}; "
            f"positive zero vs bei oracle dev = {dev:.3e} <= 1e-8",
        )


def test_c13_ml_semigroup_discrepancy_guard():
    # independent oracle: half-integer Gamma values from double factorials
    def gamma_half(p: int) -> float:
        if p % 2 == 0:
            return float(math.factorial(p // 2 - 1))
        m = (p - 1) // 2
        return math.factorial(2 * m) / (4**m * math.factorial(m)) * math.sqrt(math.pi)

    rows = ml_semigroup_discrepancy(0.5, 1.0, 6)
    worst = 0.0
    for row in rows:
        r, k = row["r"], row["k"]
        n = r + k
        product = 1.0 / (gamma_half(r + 2) * gamma_half(k + 2))
        # the binomial-side sum divides each power by Gamma(a n + b), so
        # its (r, k) coefficient is C(n, r) times the product side's
        binomial = math.comb(n, r) * product
        worst = max(
            worst,
            abs(row["product"] - product) / product,
            abs(row["binomial"] - binomial) / binomial,
        )
    mixed = next(r for r in rows if r["r"] == 1 and r["k"] == 1)
    # the forms genuinely disagree; the measured ratio must equal the
    # oracle's C(2,1) Gamma(2) = 2, not 1
    gap_ok = abs(mixed["ratio"] - 2.0) <= 1e-12 and abs(mixed["ratio"] - 1.0) > 0.5
    ok = worst <= 1e-12 and gap_ok
    _report(
        "C13",
        ok,
        f"discrepancy table vs brute-force oracle rel dev = {worst:.3e} <= 1e-12; "
        f"measured (1,1) ratio = {mixed['ratio']:.12f} (identity would need 1)",
    )
