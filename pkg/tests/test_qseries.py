from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from qtheta.errors import NonIntegerExponents, NotInvertible, OrderExceeded, ZeroSeries
from qtheta.exactnum import OMEGA, OMEGA2, Eisenstein
from qtheta.qseries import FirstMismatch, QSeries, equal_through, first_mismatch
from qtheta import special as sp


def S(values, order=None, den=1):
    return QSeries.from_list(values, order, den)


def test_monomial_order():
    m = QSeries.monomial(1, 2, 3, 30)
    assert m.order_q == 10
    assert m.coeff(2, 3) == 1
    assert m.to_text().startswith("q^(2/3)")


def test_add_neg_keeps_order():
    f = sp.theta0(12)
    z = f + (-f)
    assert z.is_zero() and z.order == f.order


def test_add_small():
    assert S([1, -1]) + S([0, 1]) == S([1, 0])


def test_telescoping():
    geo = S([1] * 21)
    assert (S([1, -1], 20) * geo) == QSeries.one(1, 20)


def test_euler_product_first_terms():
    prod = QSeries.one(1, 12)
    for k in range(1, 51):
        prod = prod * QSeries({0: 1, k: -1}, 1, 12)
    assert oracle.dense(prod, 12) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]


def test_times_zero():
    z = QSeries.zero(1, 10)
    assert (sp.theta0(10) * z).is_zero()


def test_invert_geometric_and_partitions():
    assert oracle.dense(S([1, -1], 8).invert(), 8) == [1] * 9
    inv = sp.pochhammer(1, 1, 1, 10).invert()
    assert oracle.dense(inv, 10) == oracle.partitions(10)
    assert oracle.dense(inv, 4) == [1, 1, 2, 3, 5]


def test_invert_negative_valuation():
    f = QSeries({1: 1, 2: 1}, 1, 12)
    g = f.invert()
    assert g.val == -1 and g.coeff(-1) == 1
    assert g.order == 10  # order drops by twice the valuation
    assert (f * g) == QSeries.one(1, g.order + 1)


def test_invert_errors():
    with pytest.raises(ZeroSeries):
        QSeries.zero(1, 5).invert()
    with pytest.raises(NotInvertible):
        S([2, 1]).invert()


def test_unit_leading_coefficient_is_fine():
    f = QSeries({0: OMEGA, 1: 1}, 1, 6)
    assert (f * f.invert()) == QSeries.one(1, 6)


def test_subst_power():
    assert S([1, -2], 4).subst_power(3) == QSeries({0: 1, 3: -2}, 1, 12)
    assert QSeries.monomial(1, 1, 3, 9).subst_power(3).reduced().coeffs == {1: Eisenstein(1, 0)}
    f = sp.theta0(10)
    assert f.subst_power(1) is f


def test_twist_examples():
    assert QSeries.monomial(1, 2, 1, 6).twist(1) == QSeries.monomial(OMEGA2, 2, 3, 6)
    t = sp.theta0(9).twist(1)
    expected = QSeries({0: 1, 1: -2 * OMEGA, 4: 2 * OMEGA, 9: -2}, 3, 9)
    assert t == expected
    f = sp.theta1(9)
    assert f.twist(0).coeffs == f.coeffs and f.twist(0).den == 3
    assert f.twist(0).subst_power(3) == f


def test_twist_needs_integer_exponents():
    with pytest.raises(NonIntegerExponents):
        sp.theta0(9).twist(1).twist(1)


def test_coeff_and_mismatch():
    assert sp.theta0(5).coeff(1, 1) == -2
    f = sp.theta0(8)
    assert equal_through(f, f, 8) is True
    m = equal_through(S([1, -1], 5), S([1, 1], 5), 5)
    assert isinstance(m, FirstMismatch) and not m
    assert (m.exponent, m.lhs, m.rhs) == (1, -1, 1)


def test_first_mismatch_needs_order():
    with pytest.raises(OrderExceeded):
        first_mismatch(S([1, 1], 3), S([1, 1], 10), 5)


def test_mismatch_in_lifted_denominator():
    f = QSeries({0: 1, 1: 1}, 2, 10)
    g = QSeries({0: 1, 2: 1}, 3, 15)
    m = first_mismatch(f, g, 5)
    assert m.exponent == Fraction(1, 2) and m.exponent_den == 6


def test_dump_round_trip():
    f = sp.theta0(20).twist(2)
    text = f.dump()
    assert QSeries.parse_dump(text, f.order) == f
    assert "0/3\t1\t0" in text.splitlines()[0]


def test_mul_to_truncates_without_certifying():
    f = sp.theta0(10)
    g = f.mul_to(f, 4)
    assert g.order == 4 and oracle.dense(g, 4) == oracle.dense(f * f, 4)


# -- properties ---------------------------------------------------------------

small = st.integers(-3, 3)
coef = st.builds(Eisenstein, small, small)


@st.composite
def series(draw, min_val=0):
    order = draw(st.integers(6, 14))
    keys = draw(st.lists(st.integers(min_val, order), max_size=8))
    return QSeries({k: draw(coef) for k in keys}, 1, order)


@st.composite
def unit_series(draw):
    f = draw(series())
    u = draw(st.sampled_from([1, -1, OMEGA, -OMEGA2]))
    return f.shift(1).truncate(f.order) + QSeries.monomial(u, 0, 1, f.order)


def _cut(f, n):
    return f.truncate(min(n, f.order))


@settings(max_examples=60)
@given(series(), series(), series())
def test_ring_laws(f, g, h):
    n = min(f.order, g.order, h.order)
    assert first_mismatch((f * g) * h, f * (g * h), n) is None
    assert first_mismatch(f * (g + h), f * g + f * h, n) is None
    assert first_mismatch(f * g, g * f, n) is None


@settings(max_examples=60)
@given(series(), series(), st.integers(0, 6))
def test_truncate_then_multiply(f, g, n):
    full = f * g
    n = min(n, full.order)
    assert first_mismatch((_cut(f, n) * _cut(g, n)), full, n) is None


@settings(max_examples=60)
@given(series(), series())
def test_product_matches_dense_oracle(f, g):
    fr = QSeries({e: Eisenstein(c.a, 0) for e, c in f.items()}, 1, f.order)
    gr = QSeries({e: Eisenstein(c.a, 0) for e, c in g.items()}, 1, g.order)
    p = fr * gr
    n = p.order
    assert oracle.dense(p, n) == oracle.mul(oracle.dense(fr, n), oracle.dense(gr, n), n)


@settings(max_examples=60)
@given(unit_series())
def test_double_inverse(f):
    g = f.invert().invert()
    assert first_mismatch(g, f, g.order) is None


@settings(max_examples=60)
@given(series())
def test_twist_conjugates_for_integer_coefficients(f):
    f = QSeries({e: c.a for e, c in f.items()}, 1, f.order)
    assert f.twist(1).conj() == f.twist(2)
    assert f.twist(0).subst_power(3) == f
