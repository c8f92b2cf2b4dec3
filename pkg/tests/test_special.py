from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from qtheta import special as sp
from qtheta.errors import Divergent
from qtheta.laurent import Growth, XYPoly, first_mismatch_xy, mul_xy
from qtheta.qseries import QSeries, first_mismatch


def D(series, n):
    return oracle.dense(series, n)


# -- products and thetas ------------------------------------------------------

def test_euler_product():
    assert D(sp.pochhammer(1, 1, 1, 13), 13) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0]


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 2), (3, 3), (1, 5), (4, 5), (6, 6)])
def test_pochhammer_against_factors(a, b):
    assert D(sp.pochhammer(a, b, 1, 30), 30) == oracle.poch(a, b, 30)
    assert D(sp.pochhammer(a, b, 1, 30, negate=True), 30) == oracle.poch(a, b, 30, plus=True)


def test_pochhammer_laws():
    assert sp.pochhammer(2, 2, 1, 20) == sp.pochhammer(1, 1, 1, 10).subst_power(2)
    assert first_mismatch(sp.pochhammer(1, 2, 1, 20) * sp.pochhammer(2, 2, 1, 20), sp.pochhammer(1, 1, 1, 20), 20) is None
    with pytest.raises(Divergent):
        sp.pochhammer(0, 1, 1, 5)


def test_pochhammer_with_denominator():
    # (q^(1/3); q^(1/3)) is (q;q) with q -> q^(1/3)
    assert sp.pochhammer(1, 1, 3, 10) == sp.pochhammer(1, 1, 1, 30).twist(0)


def test_theta_examples():
    assert D(sp.theta0(9), 9) == [1, -2, 0, 0, 2, 0, 0, 0, 0, -2]
    assert D(sp.theta1(10), 10) == [1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]
    assert sp.trisum(10).coeff(0) == 2
    assert sp.trisum(20) == sp.theta1(20).scale(2)


def test_theta_slices_partition_theta():
    for j, base in ((0, sp.theta0), (1, sp.trisum)):
        total = sum((sp.theta_slice(j, i, 20) for i in range(3)), QSeries.zero(3, 60))
        assert first_mismatch(total, base(60).twist(0), 20) is None


@pytest.mark.parametrize("A,B,alt", [(5, 3, True), (5, 1, True), (10, 2, True), (10, 6, True), (4, 6, False), (5, -3, True)])
def test_thetasum(A, B, alt):
    s = sp.thetasum(A, B, 40, alt=alt)
    want = {}
    for n in range(-30, 31):
        e = Fraction(A * n * n + B * n, 2)
        if e <= 40:
            want[e] = want.get(e, 0) + ((-1) ** (n % 2) if alt else 1)
    got = {Fraction(e, s.den): c.a for e, c in s.items()}
    assert got == {e: v for e, v in want.items() if v}


def test_jacobi_theta_terms():
    t = sp.jacobi_theta(1, 0, 1, 1, 3)
    low = {m[0]: c for m, c in t.terms.items() if abs(m[0]) <= 2}
    assert low[0] == QSeries.one(1, 3)
    assert low[1] == QSeries.monomial(-1, 0, 1, 3)
    assert low[-1] == QSeries.monomial(-1, 1, 1, 3)
    assert low[2] == QSeries.monomial(1, 1, 1, 3)
    assert low[-2] == QSeries.monomial(1, 3, 1, 3)
    u = sp.jacobi_theta(1, 1, 2, 1, 20)  # Theta(xq; q^2): coefficient of x^n is (-1)^n q^(n^2)
    for n in range(-4, 5):
        assert u.coefficient((n,)) == QSeries.monomial(-1 if n % 2 else 1, n * n, 1, 20)


def test_triple_product_window6():
    order = 25
    prod = (sp.x_pochhammer(1, 0, 1, 1, order) * sp.x_pochhammer(-1, 1, 1, 1, order)).scale(sp.pochhammer(1, 1, 1, order))
    assert first_mismatch_xy(prod, sp.jacobi_theta(1, 0, 1, 1, order), 6, order) is None


# -- indefinite sums ----------------------------------------------------------

def test_numerator_examples():
    assert D(sp.indefinite_theta(sp.CHI_NUM, 6), 6) == [0, 1, 0, 0, 0, -1, 2]
    assert D(sp.indefinite_theta(sp.PHI_NUM, 8), 8) == [1, 0, -2, -1, 0, 0, 2, 1, 2]


def test_below_constant_offset_is_zero():
    spec = sp.IndefThetaSpec(2, 6, 2, 3, 3, 7, scale_den=3)
    assert sp.indefinite_theta(spec, 2).is_zero()


def test_spec_validation():
    with pytest.raises(ValueError):
        sp.IndefThetaSpec(0, 1, 1, 0, 0, 0)
    with pytest.raises(ValueError):
        sp.IndefThetaSpec(1, -1, 1, 0, 0, 0)


specs = st.builds(
    lambda A, B, C, ta, tb, c, alt: (A, B, C, ta * (2 * A + B) // 4, tb * (2 * C + B) // 4, c, alt),
    st.integers(1, 3), st.integers(0, 4), st.integers(1, 3),
    st.integers(0, 4), st.integers(0, 4), st.integers(0, 3), st.booleans(),
)


@settings(max_examples=50, deadline=None)
@given(specs)
def test_indefinite_theta_against_brute_force(t):
    A, B, C, a, b, c, alt = t
    got = sp.indefinite_theta(sp.IndefThetaSpec(A, B, C, a, b, c, alternating=alt), 25)
    assert {e: v.a for e, v in got.items()} == oracle.indef(A, B, C, a, b, c, alt, 25)


@settings(max_examples=30, deadline=None)
@given(specs, st.integers(0, 3), st.integers(0, 3))
def test_rho_shift_is_a_change_of_variables(t, dr, ds):
    A, B, C, a, b, c, alt = t
    spec = sp.IndefThetaSpec(A, B, C, a, b, c + 40, alternating=alt, rho_shift=(dr, ds))
    N = 60
    want = {}
    for r in range(-40, 41):
        for s in range(-40, 41):
            w = oracle.rho(r + dr, s + ds)
            e = A * r * r + B * r * s + C * s * s + a * r + b * s + c + 40
            if w and e <= N:
                want[e] = want.get(e, 0) + w * ((-1) ** ((r + s) % 2) if alt else 1)
    got = sp.indefinite_theta(spec, N)
    assert {e: v.a for e, v in got.items()} == {e: v for e, v in want.items() if v}


def test_enumeration_bound_independence():
    for spec in (sp.PHI_NUM, sp.PSI_NUM, sp.X_NUM, sp.CHI_NUM):
        a = sp.indefinite_theta(spec, 30)
        b = sp.indefinite_theta(spec, 60)
        assert first_mismatch(a, b, 30) is None


# -- mock theta functions -----------------------------------------------------

def test_mock_functions_are_integral():
    for f in (sp.mock_phi, sp.mock_psi, sp.mock_X, sp.mock_chi):
        s = f(50)
        assert s.den == 1 and s.is_rational() and s.order >= 50


def test_psi_valuation():
    assert sp.mock_psi(20).val >= 1


def test_phi_hyper_against_dense_oracle():
    n = 40
    acc = [0] * (n + 1)
    m = 0
    while m * (m + 1) // 2 <= n:
        den = [1] + [0] * n
        for j in range(m + 1):
            den = oracle.mul(den, oracle.poch(2 * j + 1, 10 ** 6, n), n)  # single factor (1 - q^(2j+1))
        term = [0] * (n + 1)
        term[m * (m + 1) // 2] = 1
        part = oracle.mul(term, oracle.inverse(den, n), n)
        acc = [x + y for x, y in zip(acc, part)]
        m += 1
    assert D(sp.mock_phi_hyper(n), n) == acc
    assert D(sp.mock_phi(n), n) == acc


def test_chi_two_forms_agree():
    assert first_mismatch(sp.mock_chi_raw(30), sp.mock_chi(30), 30) is None


# -- quadruple sums -----------------------------------------------------------

def _brute(spec, n3):
    kl = (lambda k: k * k) if spec.kl_kind == "square" else (lambda k: k * (k + 1) // 2)
    sign = (lambda k, l, r, s: (-1) ** ((k + l + r + s) % 2)) if spec.kl_kind == "square" else (lambda *a: 1)
    return oracle.quad_sum_thirds(kl, spec.rs_form, spec.const, spec.weight, n3, sign)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_quad_sum_against_brute_force(n):
    spec = sp.THEOREM_SPECS[n]
    got = sp.quad_sum(spec, 4)
    assert {e: c.a for e, c in got.lift(3).items()} == _brute(spec, 12)


def test_quad_sum_constant_terms():
    assert sp.quad_sum(sp.THEOREM_SPECS[1], 5).coeff(0) == -1
    assert sp.quad_sum(sp.THEOREM_SPECS[3], 5).coeff(0) == 4
    rhs3 = sp.pochhammer(2, 2, 1, 5) * sp.trisum(5) ** 2 * sp.thetasum(10, 2, 5)
    assert rhs3.coeff(0) == 4


# -- constant terms -----------------------------------------------------------

def _const_one(order=10):
    return XYPoly(1, 1, {(0,): QSeries.one(1, order)}, order, growth=Growth(1, 0, 0))


@pytest.mark.parametrize("law", [(1, 0, 0, 1), (3, 3, 3, 1, 3), (6, -3, -3, -6, 3)])
def test_appell_with_constant_factors(law):
    out = sp.appell_constant_term(_const_one(), _const_one(), law, (0, 0), 5)
    c0 = law[3] if len(law) == 5 else 0
    assert out == QSeries.monomial(1, c0 * (out.den // law[-1]), out.den, out.den * 5)


def test_three_theta_diagonal():
    tx = sp.jacobi_theta((1, 0), 0, 2, 1, 12)
    ty = sp.jacobi_theta((0, 1), 0, 2, 1, 12)
    tz = sp.jacobi_theta((-1, -1), 1, 1, 1, 12)
    ct = mul_xy(mul_xy(tx, ty), tz).coefficient((0, 0))
    assert D(ct, 12) == [1, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0]


def _brute_appell(F, G, law, at, order, bound=25):
    alpha, beta, gamma, c0, Dn = law
    acc = {}
    for r in range(-bound, bound + 1):
        for s in range(-bound, bound + 1):
            w = oracle.rho(r, s)
            if not w:
                continue
            e = Fraction(alpha * r * s + beta * r + gamma * s + c0, Dn)
            cf = F.terms.get((r + at[0],))
            cg = G.terms.get((s + at[1],))
            if not cf or not cg:
                continue
            for e1, x in cf.items():
                for e2, y in cg.items():
                    tot = e + Fraction(e1, cf.den) + Fraction(e2, cg.den)
                    if tot <= order:
                        acc[tot] = acc.get(tot, 0) + w * (x * y).a
    return {e: v for e, v in acc.items() if v}


@pytest.mark.parametrize(
    "law,at",
    [((1, 0, 0, 0, 1), (0, 0)), ((1, 0, 0, 0, 1), (2, -1)), ((1, 0, 0, 0, 1), (-3, 1)), ((3, 3, 3, 1, 3), (0, 0))],
)
def test_appell_against_brute_force(law, at):
    order = 8
    F = sp.jacobi_theta(1, 0, 1, 1, 30).reflect()
    G = sp.jacobi_theta(1, 0, 2, 1, 30)
    got = sp.appell_constant_term(F, G, law, at, order)
    assert {Fraction(e, got.den): c.a for e, c in got.items()} == _brute_appell(F, G, law, at, order)


def test_lemma31_first_identity():
    L = sp.lemma31_sides("first", "L", 10)
    R = sp.lemma31_sides("first", "R", 10)
    assert first_mismatch_xy(L, R, 5, 10) is None
