"""Registry of verifiable identities and the engine that checks them.

Every entry names two "sides" (callables of the requested order) that must
agree exactly.  Univariate sides return a :class:`QSeries` exact at least
through ``q^order``; bivariate sides return an :class:`XYPoly` compared on a
finite window; residue entries compare two integer-valued functions on a
finite set of tuples.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .errors import NotDivisible, OrderExceeded, UnknownIdentity
from .exactnum import Eisenstein, OMEGA, OMEGA2, omega_pow
from .laurent import XYPoly, first_mismatch_xy, mul_xy
from .qseries import FirstMismatch, QSeries, first_mismatch
from .residues import chi3, d, delta, p, rho
from . import special as sp

__all__ = [
    "IdentityCase",
    "VerificationReport",
    "list_cases",
    "get_case",
    "verify",
    "verify_all",
    "run_case",
    "export_catalog",
    "omega_quotient",
]

W = OMEGA - OMEGA2  # 1 + 2w, squares to -3


@dataclass(frozen=True)
class IdentityCase:
    id: str
    description: str
    kind: str  # "univariate" | "bivariate" | "residue"
    default_order: int
    exponent_den: int
    anchor: str
    lhs: Callable
    rhs: Callable
    window: Optional[int] = None
    domain: Optional[Callable[[], Iterable]] = None
    integral: bool = False

    def summary(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "description": self.description,
            "default_order": self.default_order,
            "exponent_den": self.exponent_den,
            "anchor": self.anchor,
        }


@dataclass
class VerificationReport:
    id: str
    status: str  # "pass" | "fail" | "error"
    checked_order: int
    first_mismatch: Optional[FirstMismatch] = None
    wall_time_ms: float = 0.0
    message: str = ""

    def key(self):
        """Everything except the timing, for determinism checks."""
        return (self.id, self.status, self.checked_order, self.first_mismatch, self.message)

    def to_record(self) -> dict:
        fm = None
        m = self.first_mismatch
        if m is not None:
            fm = {
                "exponent_num": m.exponent_num,
                "exponent_den": m.exponent_den,
                "lhs": {"a": str(m.lhs.a), "b": str(m.lhs.b)},
                "rhs": {"a": str(m.rhs.a), "b": str(m.rhs.b)},
                "monomial": None if m.monomial is None else list(m.monomial),
            }
        return {
            "id": self.id,
            "status": self.status,
            "checked_order": self.checked_order,
            "first_mismatch": fm,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


# ---------------------------------------------------------------------------
# shared series


def omega_quotient(u: QSeries) -> QSeries:
    """Divide exactly by (w - w^2); the quotient must have rational coefficients."""
    out = u.div_scalar(W)
    for e, c in out.items():
        if c.b:
            raise NotDivisible(f"quotient by (w - w^2) is not rational at key {e}/{out.den}: {c}")
    return out


def _through(build: Callable, order, step: int = 4):
    """Call ``build(order + pad)`` with growing padding until it certifies ``order``."""
    pad = 0
    for _ in range(8):
        try:
            out = build(order + pad)
        except OrderExceeded:
            out = None
        if out is not None and out.order_q >= order:
            return out
        pad = pad * 2 + step
    raise OrderExceeded(f"could not certify order {order} even with padding {pad}")


@lru_cache(maxsize=64)
def _phi(o):
    return sp.mock_phi(o)


@lru_cache(maxsize=64)
def _psi(o):
    return sp.mock_psi(o)


@lru_cache(maxsize=64)
def _X(o):
    return sp.mock_X(o)


@lru_cache(maxsize=64)
def _chi(o):
    return sp.mock_chi(o)


def _poch(a, b, o, negate=False):
    return sp.pochhammer(a, b, 1, o, negate=negate)


def _indef(spec, o):
    return sp.indefinite_theta(spec, o)


def _thirds(o):
    # a series in q needed through 3*o so that its twists reach q^o
    return 3 * o + 3


# ---------------------------------------------------------------------------
# original identities with twists and the right-hand products


def ram_lhs(n: int, o) -> QSeries:
    N = _thirds(o)
    if n == 1:
        psi = _psi(N)
        return _phi(o + 1).subst_power(3).shift_q(Fraction(2, 3)) - omega_quotient(psi.twist(1) - psi.twist(2))
    if n == 2:
        phi = _phi(N)
        tw = phi.twist(1).scale(OMEGA) - phi.twist(2).scale(OMEGA2)
        return _psi(o + 1).subst_power(3).shift_q(Fraction(-2, 3)) + omega_quotient(tw)
    if n == 3:
        chi = _chi(N)
        tw = chi.twist(1).scale(OMEGA) - chi.twist(2).scale(OMEGA2)
        return _X(o + 1).subst_power(3) - omega_quotient(tw)
    if n == 4:
        X = _X(N)
        return _chi(o + 1).subst_power(3) + omega_quotient(X.twist(1) - X.twist(2)).shift_q(Fraction(2, 3))
    raise ValueError(n)


def ram_rhs(n: int, o) -> QSeries:
    N = _thirds(o)
    o1 = o + 2
    if n in (1, 2):
        ratio = sp.theta0(N).twist(0) / sp.theta0(o1)
        tail = sp.thetasum(5, 3 if n == 1 else 1, o1) / _poch(1, 2, o1)
        out = ratio * tail
        return -out.shift_q(Fraction(1, 3)) if n == 1 else out
    # sum q^(n(n+1)/6) over sum q^(n(n+1)/2): the factors 2 cancel, so use theta_1
    ratio = sp.theta1(N).twist(0) / sp.theta1(o1)
    tail = sp.thetasum(10, 2 if n == 3 else 6, o1) / _poch(1, 1, o1, negate=True)
    out = ratio * tail
    return out if n == 3 else -out.shift_q(1)


def thm_rhs(n: int, o) -> QSeries:
    if n == 1:
        return -(_poch(1, 1, o) * sp.theta0(o) ** 2 * sp.thetasum(5, 3, o))
    if n == 2:
        return _poch(1, 1, o) * sp.theta0(o) ** 2 * sp.thetasum(5, 1, o)
    tail = sp.thetasum(10, 2 if n == 3 else 6, o)
    return _poch(2, 2, o) * sp.trisum(o) ** 2 * tail


def thm_lhs(n: int, o) -> QSeries:
    return sp.quad_sum(sp.THEOREM_SPECS[n], o)


# ---------------------------------------------------------------------------
# the rewriting chains (all with denominator 3)


def _theta_pair(j: int, o):
    """theta_j(w q^(1/3)), theta_j(w^2 q^(1/3)) and theta_j(q^3), exact through q^o."""
    base = sp.theta0 if j == 0 else sp.theta1
    t = base(_thirds(o))
    return t.twist(1), t.twist(2), base(o + 1).subst_power(3)


def multiplier(n: int, o) -> QSeries:
    """The factor each original identity is multiplied by."""
    j = 0 if n <= 2 else 1
    a, b, c = _theta_pair(j, o + 2)
    m = a * b * c
    if n == 1:
        return m.shift_q(Fraction(-1, 3))
    if n == 2:
        return m
    if n == 3:
        return m.scale(4)
    return m.scale(-4).shift_q(-1)


def chain_first(n: int, o) -> QSeries:
    """Multiplied first term, straight from the mock theta numerators."""
    j = 0 if n <= 2 else 1
    a, b, _ = _theta_pair(j, o + 2)
    if n == 1:
        return (a * b * _indef(sp.PHI_NUM, o + 1).subst_power(3)).shift_q(Fraction(1, 3))
    if n == 2:
        return -(a * b * _indef(sp.PSI_NUM, o + 2).subst_power(3)).shift_q(Fraction(-2, 3))
    if n == 3:
        return (a * b * _indef(sp.X_NUM, o + 1).subst_power(3)).scale(4)
    return (a * b * _indef(sp.CHI_NUM, o + 2).subst_power(3)).scale(-4).shift_q(-1)


def chain_second(n: int, o) -> QSeries:
    """Multiplied second term: the twisted numerators combined with the other twist."""
    j = 0 if n <= 2 else 1
    a, b, c = _theta_pair(j, o + 2)
    N = _thirds(o + 2)
    if n == 1:
        num = -_indef(sp.PSI_NUM, N)
        inner = omega_quotient(b * num.twist(1) - a * num.twist(2))
        return -(c * inner).shift_q(Fraction(-1, 3))
    if n == 2:
        num = _indef(sp.PHI_NUM, N)
        inner = omega_quotient((b * num.twist(1)).scale(OMEGA) - (a * num.twist(2)).scale(OMEGA2))
        return c * inner
    if n == 3:
        num = _indef(sp.CHI_NUM, N)
        inner = omega_quotient((b * num.twist(1)).scale(OMEGA) - (a * num.twist(2)).scale(OMEGA2))
        return (c * inner).scale(-4)
    num = _indef(sp.X_NUM, N)
    inner = omega_quotient(b * num.twist(1) - a * num.twist(2))
    return (c * inner).scale(-4).shift_q(Fraction(-1, 3))


def _sq(o, form, const, w, with_k=True):
    return sp.weighted_quad_sum("square", form, const, w, o, with_k=with_k)


def _tri(o, form, const, w, with_k=True):
    return sp.weighted_quad_sum("triangular", form, const, w, o, with_k=with_k)


# weights of the rewritten terms, one tuple per equation:
# (first term, first term after reindexing, second term triple-sum weight,
#  folded second term weight, antisymmetric remainder)
def _first_sum(n, o):
    if n == 1:
        return _sq(o, (1, 3, 1, 3, 3), 1, lambda k, l, r, s: delta(r) * delta(s) * p(k, l))
    if n == 2:
        return _sq(o, (1, 3, 1, 9, 9), 16, lambda k, l, r, s: -delta(r) * delta(s) * p(k, l))
    if n == 3:
        return _tri(o, (2, 6, 2, 3, 3), 0, lambda k, l, r, s: delta(r) * delta(s) * p(k - 1, l - 1))
    return _tri(o, (2, 6, 2, 9, 9), 6, lambda k, l, r, s: -delta(r) * delta(s) * p(k - 1, l - 1))


def _first_reindexed(n, o):
    if n == 2:
        return _sq(o, (1, 3, 1, 1, 1), 0, lambda k, l, r, s: delta(r + 2) * delta(s + 2) * p(k, l))
    if n == 4:
        return _tri(o, (2, 6, 2, 1, 1), -2, lambda k, l, r, s: delta(r + 1) * delta(s + 1) * p(k - 1, l - 1))
    return _first_sum(n, o)


def _second_triple(n, o):
    """theta_j(q^3) times the (l, r, s) sum, with its prefactor."""
    o2 = o + 2
    if n == 1:
        w = lambda k, l, r, s: chi3(2 * l * l + r * r + 3 * r * s + s * s + 3 * r + 3 * s + 2)
        return sp.theta0(o2).subst_power(3) * _sq(o2, (1, 3, 1, 3, 3), 1, w, with_k=False)
    if n == 2:
        w = lambda k, l, r, s: chi3(2 * l * l + r * r + 3 * r * s + s * s + r + s + 1)
        return sp.theta0(o2).subst_power(3) * _sq(o2, (1, 3, 1, 1, 1), 0, w, with_k=False)
    if n == 3:
        w = lambda k, l, r, s: chi3(l * l + l + 2 * r * r + 6 * r * s + 2 * s * s + 3 * r + 3 * s + 2)
        return (sp.theta1(o2).subst_power(3) * _tri(o2, (2, 6, 2, 3, 3), 1, w, with_k=False)).scale(-2)
    w = lambda k, l, r, s: chi3(l * l + l + 2 * r * r + 6 * r * s + 2 * s * s + r + s)
    out = sp.theta1(o2).subst_power(3) * _tri(o2, (2, 6, 2, 1, 1), 0, w, with_k=False)
    return out.scale(-2).shift_q(Fraction(-1, 3))


def _second_folded(n, o):
    if n == 1:
        return _sq(o, (1, 3, 1, 3, 3), 1, lambda k, l, r, s: delta(k) * chi3(r * r + s * s - l * l - 1))
    if n == 2:
        return _sq(o, (1, 3, 1, 1, 1), 0, lambda k, l, r, s: delta(k) * chi3(r * r + s * s - l * l + r + s + 1))
    if n == 3:
        w = lambda k, l, r, s: -delta(k - 1) * chi3(-r * r - s * s + l * l + l - 1)
        return _tri(o, (2, 6, 2, 3, 3), 0, w)
    w = lambda k, l, r, s: -delta(k - 1) * chi3(-r * r - s * s + l * l + l + r + s)
    return _tri(o, (2, 6, 2, 1, 1), -2, w)


def _combined(n, o):
    if n == 1:
        w = lambda k, l, r, s: delta(r) * delta(s) * p(k, l) + delta(k) * chi3(r * r + s * s - l * l - 1)
        return _sq(o, (1, 3, 1, 3, 3), 1, w)
    if n == 2:
        w = lambda k, l, r, s: (
            delta(r + 2) * delta(s + 2) * p(k, l) + delta(k) * chi3(r * r + s * s - l * l + r + s + 1)
        )
        return _sq(o, (1, 3, 1, 1, 1), 0, w)
    if n == 3:
        w = lambda k, l, r, s: (
            delta(r) * delta(s) * p(k - 1, l - 1) - delta(k - 1) * chi3(-r * r - s * s + l * l + l - 1)
        )
        return _tri(o, (2, 6, 2, 3, 3), 0, w)
    w = lambda k, l, r, s: (
        delta(r + 1) * delta(s + 1) * p(k - 1, l - 1) - delta(k - 1) * chi3(-r * r - s * s + l * l + l + r + s)
    )
    return _tri(o, (2, 6, 2, 1, 1), -2, w)


def _antisym(n, o):
    if n == 1:
        return _sq(o, (1, 3, 1, 3, 3), 1, lambda k, l, r, s: delta(r) * (delta(s) - 1) * (delta(k) - delta(l)))
    if n == 2:
        w = lambda k, l, r, s: delta(r + 2) * (delta(s + 2) - 1) * (delta(k) - delta(l))
        return _sq(o, (1, 3, 1, 1, 1), 0, w)
    if n == 3:
        w = lambda k, l, r, s: delta(r) * (delta(s) - 1) * (delta(k - 1) - delta(l - 1))
        return _tri(o, (2, 6, 2, 3, 3), 0, w)
    w = lambda k, l, r, s: delta(r + 1) * (delta(s + 1) - 1) * (delta(k - 1) - delta(l - 1))
    return _tri(o, (2, 6, 2, 1, 1), -2, w)


def _zero(o, den=1):
    return QSeries.zero(den, math.floor(Fraction(o) * den))


# ---------------------------------------------------------------------------
# the constant-term method


_CT_LAWS = {
    1: ("first", (3, 3, 3, 1, 3), (0, 0)),
    2: ("first", (3, 3, 3, -2, 3), (-1, -1)),
    3: ("second", (6, 3, 3, 0, 3), (0, 0)),
    4: ("second", (6, -3, -3, -6, 3), (1, 1)),
}


def ct_appell(n: int, side: str, o) -> QSeries:
    which, law, at = _CT_LAWS[n]

    def build(oo):
        F = sp.lemma31_sides(which, side, oo)
        return sp.appell_constant_term(F, F, law, at, o)

    return _through(build, o, step=6)


def _ct_prefactor(n: int, o) -> QSeries:
    p1, p2 = _poch(1, 1, o), _poch(2, 2, o)
    if n == 1:
        return -(p1 ** 5 / p2 ** 2)
    if n == 2:
        return -(p1 ** 5 / p2 ** 2).shift(-1)
    return (p2 ** 5 / p1 ** 2).scale(4)


def ct_triple(n: int, o) -> QSeries:
    """Constant term of the product of three thetas left after cancellation."""

    def build(oo):
        jt = sp.jacobi_theta
        if n <= 2:
            tx, ty, tz = jt((1, 0), 0, 2, 1, oo), jt((0, 1), 0, 2, 1, oo), jt((-1, -1), 1, 1, 1, oo)
        else:
            a = 2 if n == 3 else -2
            tx = jt((1, 0), 2, 4, 1, oo, sign=-1)
            ty = jt((0, 1), 2, 4, 1, oo, sign=-1)
            tz = jt((-1, -1), a, 2, 1, oo)
        prod = mul_xy(mul_xy(tx, ty), tz)
        return prod.coefficient((-1, -1) if n == 2 else (0, 0))

    return _through(build, o)


def ct_diagonal(n: int, o) -> QSeries:
    """The same constant term read off the forced diagonal k = l = m."""
    if n == 1:
        return sp.thetasum(5, -3, o)
    if n == 2:
        return sp.thetasum(5, -11, o + 4).shift(4)
    if n == 3:
        return sp.thetasum(10, 2, o)
    return sp.thetasum(10, -6, o)


def ct_prefixed(n: int, kind: str, o) -> QSeries:
    o2 = o + 2
    inner = ct_triple(n, o2) if kind == "triple" else ct_diagonal(n, o2)
    return _ct_prefactor(n, o2) * inner


# ---------------------------------------------------------------------------
# bivariate builders


def jtp_sum(o, window=None):
    return sp.jacobi_theta(1, 0, 1, 1, o)


def jtp_product(o, window=None):
    prod = sp.x_pochhammer(1, 0, 1, 1, o) * sp.x_pochhammer(-1, 1, 1, 1, o)
    return prod.scale(_poch(1, 1, o))


def _zero_xy(o, den=1):
    return XYPoly(1, den, {}, math.floor(Fraction(o) * den))


def theta_fe(o, window=None):
    """Theta(x;q) + x Theta(xq;q), which must vanish."""

    def build(oo):
        t = sp.jacobi_theta(1, 0, 1, 1, oo)
        return t + t.qshift(1).shift((1,))

    return _through(build, o)


def theta_reflected(o, window=None):
    """Theta(x^-1 q; q) from the sum side."""
    return sp.jacobi_theta(-1, 1, 1, 1, o)


def lemma31_fe(which: str, side: str, o, window=None):
    """Right side of the quasi-periodicity: -q^3 x^3 f(q^2 x) or q^6 x^3 g(q^4 x)."""

    def build(oo):
        f = sp.lemma31_sides(which, side, oo)
        if which == "first":
            return f.qshift(2).shift((3,), 9, -1)
        return f.qshift(4).shift((3,), 18, 1)

    return _through(build, o, step=8)


def lemma32_lhs(o, window):
    """(sum rho x^r y^s q^rs) Theta(x;q) Theta(y;q) monomial by monomial on the window."""
    F = sp.jacobi_theta(1, 0, 1, 1, o + window + 2).reflect()
    terms = {}
    for A in range(-window, window + 1):
        for B in range(-window, window + 1):
            c = sp.appell_constant_term(F, F, (1, 0, 0, 0, 1), at=(-A, -B), order=o)
            if c.coeffs:
                terms[(A, B)] = c
    return XYPoly(2, 1, terms, math.floor(o), window=window)


def lemma32_rhs(o, window=None):
    return sp.jacobi_theta((1, 1), 0, 1, 1, o).scale(_poch(1, 1, o) ** 3)


# ---------------------------------------------------------------------------
# residue-exhaustive checks


def _del81(variant):
    def lhs(t):
        k, l, r, s = t
        if variant == "base":
            return delta(r) * delta(s) * p(k, l) + delta(k) * chi3(r * r + s * s - l * l - 1)
        if variant == "rs":
            return delta(r + 2) * delta(s + 2) * p(k, l) + delta(k) * chi3(r * r + s * s - l * l + r + s + 1)
        if variant == "kl":
            return delta(r) * delta(s) * p(k - 1, l - 1) - delta(k - 1) * chi3(-r * r - s * s + l * l + l - 1)
        return delta(r + 1) * delta(s + 1) * p(k - 1, l - 1) - delta(k - 1) * chi3(-r * r - s * s + l * l + l + r + s)

    def rhs(t):
        k, l, r, s = t
        if variant == "base":
            return (delta(k) - delta(r)) * (delta(l) - delta(s)) + delta(r) * (delta(s) - 1) * (delta(k) - delta(l))
        if variant == "rs":
            return (delta(k) - delta(r - 1)) * (delta(l) - delta(s - 1)) + delta(r + 2) * (delta(s + 2) - 1) * (
                delta(k) - delta(l)
            )
        if variant == "kl":
            return (delta(k - 1) - delta(r)) * (delta(l - 1) - delta(s)) + delta(r) * (delta(s) - 1) * (
                delta(k - 1) - delta(l - 1)
            )
        return (delta(k - 1) - delta(r + 1)) * (delta(l - 1) - delta(s + 1)) + delta(r + 1) * (delta(s + 1) - 1) * (
            delta(k - 1) - delta(l - 1)
        )

    return lhs, rhs


def _residue_tuples():
    return [(k, l, r, s) for k in range(3) for l in range(3) for r in range(3) for s in range(3)]


_RHO_RULES = ("neg", "neg1", "neg2", "d_delta")


def _rho_domain():
    out = []
    for i in range(len(_RHO_RULES)):
        for r in range(-12, 13):
            for s in range(-12, 13):
                if i == 3 and s:
                    continue
                out.append((i, r, s))
    return out


def _rho_lhs(t):
    i, r, s = t
    if i == 0:
        return rho(-r, -s)
    if i == 1:
        return rho(-r - 1, -s - 1)
    if i == 2:
        return rho(-r - 2, -s - 2)
    return d(r + 1) * delta(r + 2)


def _rho_rhs(t):
    i, r, s = t
    if i == 0:
        return -rho(r, s) + d(r) + d(s)
    if i == 1:
        return -rho(r, s)
    if i == 2:
        return -rho(r, s) - d(r + 1) - d(s + 1)
    return 0


def _chi_omega_lhs(t):
    (k,) = t
    return omega_pow(k) - omega_pow(2 * k)


def _chi_omega_rhs(t):
    (k,) = t
    return W * chi3(k)


# ---------------------------------------------------------------------------
# registry


def _pkl_sum(j: int, o) -> QSeries:
    """sum p(k,l)(-1)^(k+l) q^((k^2+l^2)/3) (j=0) or sum p(k-1,l-1) q^((k(k+1)+l(l+1))/6) (j=1)."""
    N = math.floor(3 * Fraction(o))
    acc: dict = {}
    bound = math.isqrt(2 * N + 1) + 2
    for k in range(-bound, bound + 1):
        ek = k * k if j == 0 else k * (k + 1) // 2
        if ek > N:
            continue
        for l in range(-bound, bound + 1):
            e = ek + (l * l if j == 0 else l * (l + 1) // 2)
            if e > N:
                continue
            w = p(k, l) * (-1) ** ((k + l) % 2) if j == 0 else p(k - 1, l - 1)
            if w:
                acc[e] = acc.get(e, 0) + w
    return QSeries({e: v for e, v in acc.items() if v}, 3, N)


def _slice_product(j: int, o) -> QSeries:
    s0, s1, s2 = (sp.theta_slice(j, i, o) for i in range(3))
    if j == 0:
        return s0 * s0 - s0 * s1 - s0 * s2 + s1 * s1 + s1 * s2.scale(2) + s2 * s2
    return s0 * s0 + s0 * s2.scale(2) + s2 * s2 - s0 * s1 - s1 * s2 + s1 * s1


def _twisted_pair(j: int, o) -> QSeries:
    a, b, _ = _theta_pair(j, o)
    return a * b if j == 0 else (a * b).scale(4)


def _lemma21(j: int, o) -> QSeries:
    base = sp.theta0 if j == 0 else sp.theta1
    t = base(_thirds(o))
    return t.twist(0) * t.twist(1) * t.twist(2) * base(o + 1).subst_power(3)


def _lemma21_poch(o) -> QSeries:
    t = _poch(1, 1, _thirds(o))
    return t.twist(0) * t.twist(1) * t.twist(2) * _poch(1, 1, o + 1).subst_power(3)


def _fl_x0(o):
    return _through(lambda oo: sp.lemma31_sides("first", "L", oo).constant_term(), o)


def _gl_x0(o):
    return _through(lambda oo: sp.lemma31_sides("second", "L", oo).constant_term(), o)


def _fr_core_x0(o):
    prod = sp.jacobi_theta(1, 0, 2, 1, o) * sp.jacobi_theta(1, 0, 1, 1, o)
    return prod.coefficient((1,))


def _gr_core_x0(o):
    prod = sp.jacobi_theta(1, 1, 2, 1, o) * sp.jacobi_theta(1, 2, 4, 1, o, sign=-1)
    return prod.coefficient((0,))


def _specialised(which: str, qexp, sign=1, moment=0):
    def side(o):
        return _through(lambda oo: sp.lemma31_sides(which, "L", oo).specialize(qexp, sign, moment), o, step=8)

    return side


_CASES: dict = {}


def _add(id, description, lhs, rhs, order, den=1, kind="univariate", anchor="", **kw):
    if id in _CASES:
        raise ValueError(f"duplicate identity id {id}")
    _CASES[id] = IdentityCase(id, description, kind, order, den, anchor or description, lhs, rhs, **kw)


def _register():
    uni = 50
    # quadruple sums against theta products
    thm_anchor = {
        1: "sum rho (-1)^(k+l+r+s)(d(k)-d(r))(d(l)-d(s)) q^((k^2+l^2+r^2+3rs+s^2+3r+3s+1)/3) "
        "= -(q;q) theta0^2 sum (-1)^n q^(5n^2/2+3n/2)",
        2: "sum rho (-1)^(k+l+r+s)(d(k)-d(r-1))(d(l)-d(s-1)) q^((k^2+l^2+r^2+3rs+s^2+r+s)/3) "
        "= (q;q) theta0^2 sum (-1)^n q^(5n^2/2+n/2)",
        3: "sum rho (d(k-1)-d(r))(d(l-1)-d(s)) q^((T_k+T_l+2r^2+6rs+2s^2+3r+3s)/3) "
        "= (q^2;q^2) (sum q^T_n)^2 sum (-1)^n q^(5n^2+n)",
        4: "sum rho (d(k-1)-d(r+1))(d(l-1)-d(s+1)) q^((T_k+T_l+2r^2+6rs+2s^2+r+s-2)/3) "
        "= (q^2;q^2) (sum q^T_n)^2 sum (-1)^n q^(5n^2+3n)",
    }
    for n in range(1, 5):
        _add(f"thm12.{n}", f"quadruple sum equals theta product, equation {n}",
             (lambda o, n=n: thm_lhs(n, o)), (lambda o, n=n: thm_rhs(n, o)), uni, 3, anchor=thm_anchor[n])

    ram_anchor = {
        1: "q^(2/3) phi(q^3) - (psi(w q^(1/3)) - psi(w^2 q^(1/3)))/(w-w^2) = -q^(1/3) ...",
        2: "q^(-2/3) psi(q^3) + (w phi(w q^(1/3)) - w^2 phi(w^2 q^(1/3)))/(w-w^2) = ...",
        3: "X(q^3) - (w chi(w q^(1/3)) - w^2 chi(w^2 q^(1/3)))/(w-w^2) = ...",
        4: "chi(q^3) + q^(2/3) (X(w q^(1/3)) - X(w^2 q^(1/3)))/(w-w^2) = -q ...",
    }
    for n in range(1, 5):
        _add(f"ram.{n}", f"twisted mock theta combination equals theta quotient, identity {n}",
             (lambda o, n=n: ram_lhs(n, o)), (lambda o, n=n: ram_rhs(n, o)), 20, 6,
             anchor=ram_anchor[n], integral=True)

    # rewriting chains
    for n in range(1, 5):
        tag = f"chain{n}"
        _add(f"{tag}.mult", f"identity {n} times its theta multiplier splits into two terms",
             (lambda o, n=n: ram_lhs(n, o + 2) * multiplier(n, o + 2)),
             (lambda o, n=n: chain_first(n, o) + chain_second(n, o)), uni, 3)
        _add(f"{tag}.rhs", f"multiplied right side of identity {n} is the theorem product",
             (lambda o, n=n: ram_rhs(n, o + 2) * multiplier(n, o + 2)),
             (lambda o, n=n: thm_rhs(n, o)), uni, 3)
        _add(f"{tag}.first", f"first term of equation {n} as a residue-weighted quadruple sum",
             (lambda o, n=n: chain_first(n, o)), (lambda o, n=n: _first_sum(n, o)), uni, 3)
        if n in (2, 4):
            _add(f"{tag}.reindex", f"first term of equation {n} after reflecting (r, s)",
                 (lambda o, n=n: _first_sum(n, o)), (lambda o, n=n: _first_reindexed(n, o)), uni, 3)
        _add(f"{tag}.second", f"second term of equation {n} as theta(q^3) times a triple sum",
             (lambda o, n=n: chain_second(n, o)), (lambda o, n=n: _second_triple(n, o)), uni, 3)
        _add(f"{tag}.fold", f"theta(q^3) folded into the k-sum, equation {n}",
             (lambda o, n=n: _second_triple(n, o)), (lambda o, n=n: _second_folded(n, o)), uni, 3)
        _add(f"{tag}.combine", f"combined weights give the theorem sum, equation {n}",
             (lambda o, n=n: _first_reindexed(n, o) + _second_folded(n, o)),
             (lambda o, n=n: thm_lhs(n, o)), uni, 3)
        _add(f"{tag}.antisym", f"antisymmetric remainder vanishes, equation {n}",
             (lambda o, n=n: _antisym(n, o)), (lambda o: _zero(o, 3)), uni, 3)
        _add(f"{tag}.weights", f"combined weights minus theorem weights is the antisymmetric part, equation {n}",
             (lambda o, n=n: _combined(n, o)), (lambda o, n=n: thm_lhs(n, o) + _antisym(n, o)), uni, 3)

    # constant-term method
    ct = 25
    for n in range(1, 5):
        tag = f"ct{n}"
        _add(f"{tag}.a", f"theorem sum {n} as a fused constant term of the double-sum sides",
             (lambda o, n=n: thm_lhs(n, o)), (lambda o, n=n: ct_appell(n, "L", o)), ct, 3)
        _add(f"{tag}.b", f"double-sum side replaced by the theta product inside the constant term, equation {n}",
             (lambda o, n=n: ct_appell(n, "L", o)), (lambda o, n=n: ct_appell(n, "R", o)), ct, 3)
        _add(f"{tag}.c", f"Appell factor cancelled against the thetas, equation {n}",
             (lambda o, n=n: ct_appell(n, "R", o)), (lambda o, n=n: ct_prefixed(n, "triple", o)), ct, 3)
        _add(f"{tag}.d", f"three-theta constant term is a single theta series, equation {n}",
             (lambda o, n=n: ct_triple(n, o)), (lambda o, n=n: ct_diagonal(n, o)), ct, 3)
        _add(f"{tag}.e", f"prefactor times theta series is the theorem product, equation {n}",
             (lambda o, n=n: ct_prefixed(n, "diagonal", o)), (lambda o, n=n: thm_rhs(n, o)), ct, 3)

    # bivariate identities
    for j in (0, 1):
        _add(f"lem21.j{j}", f"theta_{j} at the three cube-root twists times theta_{j}(q^3) is theta_{j}^4",
             (lambda o, j=j: _lemma21(j, o)),
             (lambda o, j=j: (sp.theta0 if j == 0 else sp.theta1)(o) ** 4), uni, 3)
    _add("lem21.poch", "(q^(1/3);q^(1/3)) and its two twists times (q^3;q^3) is (q;q)^4",
         _lemma21_poch, lambda o: _poch(1, 1, o) ** 4, uni, 3)
    _add("classical.theta0", "theta0 = (q;q)^2/(q^2;q^2)", lambda o: sp.theta0(o),
         lambda o: _poch(1, 1, o) ** 2 / _poch(2, 2, o), uni)
    _add("classical.theta1", "theta1 = (q^2;q^2)^2/(q;q)", lambda o: sp.theta1(o),
         lambda o: _poch(2, 2, o) ** 2 / _poch(1, 1, o), uni)
    _add("classical.trisum", "sum q^(n(n+1)/2) = 2 (q^2;q^2)^2/(q;q)", lambda o: sp.trisum(o),
         lambda o: (_poch(2, 2, o) ** 2 / _poch(1, 1, o)).scale(2), uni)
    _add("poch.odd_even", "(q;q^2)(q^2;q^2) = (q;q)", lambda o: _poch(1, 2, o) * _poch(2, 2, o),
         lambda o: _poch(1, 1, o), uni)
    _add("poch.minus_q", "(-q;q) = (q^2;q^2)/(q;q)", lambda o: _poch(1, 1, o, negate=True),
         lambda o: _poch(2, 2, o) / _poch(1, 1, o), uni)
    for j in (0, 1):
        _add(f"slices.theta{j}", f"the three residue slices of theta_{j}(q^(1/3)) add up",
             (lambda o, j=j: sum((sp.theta_slice(j, i, o) for i in range(3)), _zero(o, 3))),
             (lambda o, j=j: (sp.theta0(_thirds(o)) if j == 0 else sp.trisum(_thirds(o))).twist(0)), uni, 3)
        _add(f"pkl.theta{j}", f"product of the two twisted theta_{j} as a p(k,l)-weighted double sum",
             (lambda o, j=j: _twisted_pair(j, o)), (lambda o, j=j: _pkl_sum(j, o)), uni, 3)
        _add(f"pkl.slices{j}", f"slice expansion of the twisted theta_{j} product",
             (lambda o, j=j: _slice_product(j, o)), (lambda o, j=j: _pkl_sum(j, o)), uni, 3)

    _add("phi.crosscheck", "phi from the indefinite theta quotient equals the hypergeometric series",
         lambda o: sp.mock_phi(o), lambda o: sp.mock_phi_hyper(o), uni)
    rr = sp.IndefThetaSpec(2, 6, 2, -3, -3, 0)
    rp = sp.IndefThetaSpec(2, 6, 2, 3, 3, 0)
    _add("chi.rewrite", "sum rho q^(2r^2+6rs+2s^2-3r-3s) = -sum rho q^(...+3r+3s) + 2 sum q^(2n^2+3n)",
         lambda o: sp.indefinite_theta(rr, o),
         lambda o: -sp.indefinite_theta(rp, o) + sp.thetasum(4, 6, o, alt=False).scale(2), 30)
    _add("chi.rewrite2", "2q sum q^(2n^2+3n) = sum q^(m(m+1)/2)",
         lambda o: sp.thetasum(4, 6, o, alt=False).scale(2).shift_q(1), lambda o: sp.trisum(o), 30)
    _add("chi.raw", "chi from the -3r-3s form equals chi from the rewritten form",
         lambda o: sp.mock_chi_raw(o), lambda o: sp.mock_chi(o), 30)

    # bivariate
    _add("jtp", "Jacobi triple product: sum side equals (q;q)(x;q)(q/x;q)", jtp_sum, jtp_product,
         25, kind="bivariate", window=6)
    _add("jtp.symmetry", "Theta(q/x;q) = Theta(x;q)", theta_reflected, jtp_sum, 25, kind="bivariate", window=6)
    _add("jtp.fe", "Theta(x;q) + x Theta(qx;q) = 0", theta_fe, lambda o, w=None: _zero_xy(o), 10,
         kind="bivariate", window=5)
    for n, which in ((1, "first"), (2, "second")):
        _add(f"lem31.{n}", f"{which} double sum in x equals its theta product",
             (lambda o, w=None, which=which: sp.lemma31_sides(which, "L", o)),
             (lambda o, w=None, which=which: sp.lemma31_sides(which, "R", o)),
             10, 3 * n, kind="bivariate", window=5)
        for side in ("L", "R"):
            _add(f"lem31.{n}.fe{side}", f"quasi-periodicity of the {which} identity, {side} side",
                 (lambda o, w=None, which=which, side=side: sp.lemma31_sides(which, side, o)),
                 (lambda o, w=None, which=which, side=side: lemma31_fe(which, side, o)),
                 10, 3 * n, kind="bivariate", window=5)
    _add("lem32.mult", "(sum rho x^r y^s q^rs) Theta(x;q) Theta(y;q) = (q;q)^3 Theta(xy;q)",
         lemma32_lhs, lemma32_rhs, 20, kind="bivariate", window=4)

    # coefficient of x^0 and zeros used to pin the constants
    _add("lem31.x0.fL", "x^0 coefficient of the first double sum",
         _fl_x0, lambda o: (_poch(1, 1, o) * _poch(6, 6, o) ** 2 / (_poch(2, 2, o) * _poch(3, 3, o)))
         .scale(2).shift_q(Fraction(1, 3)), uni, 3)
    _add("lem31.x0.fR", "x^1 coefficient of Theta(x;q^2) Theta(x;q)", _fr_core_x0,
         lambda o: (_poch(6, 6, o) ** 2 / _poch(3, 3, o)).scale(-2), uni)
    _add("lem31.x0.gL", "x^0 coefficient of the second double sum",
         _gl_x0, lambda o: (_poch(2, 2, o) * _poch(3, 3, o) ** 2 / (_poch(1, 1, o) * _poch(6, 6, o))).scale(-2),
         uni, 3)
    _add("lem31.x0.gR", "x^0 coefficient of Theta(xq;q^2) Theta(-xq^2;q^4)", _gr_core_x0,
         lambda o: _poch(3, 3, o) ** 2 / _poch(6, 6, o), uni)
    zeros = [
        ("lem31.zero.fL_1", "first double sum vanishes at x = 1", _specialised("first", 0)),
        ("lem31.zero.dfL_1", "x d/dx of the first double sum vanishes at x = 1", _specialised("first", 0, moment=1)),
        ("lem31.zero.fL_q", "first double sum vanishes at x = q", _specialised("first", 1)),
        ("lem31.zero.gL_q", "second double sum vanishes at x = q", _specialised("second", 1)),
        ("lem31.zero.gL_mq2", "second double sum vanishes at x = -q^2", _specialised("second", 2, sign=-1)),
    ]
    for zid, desc, side in zeros:
        _add(zid, desc, side, lambda o: _zero(o, 3), 20, 3)

    # residue-exhaustive
    for variant, label in (("base", "del81"), ("rs", "del81.rs"), ("kl", "del81.kl"), ("all", "del81.klrs")):
        lhs, rhs = _del81(variant)
        _add(label, f"residue identity for the combined weights ({variant} shift), all 81 cases",
             lhs, rhs, 0, kind="residue", domain=_residue_tuples)
    _add("rho.reflect", "reflection rules for rho, d and delta on |r|,|s| <= 12",
         _rho_lhs, _rho_rhs, 0, kind="residue", domain=_rho_domain)
    _add("chi3.omega", "(w^k - w^2k) = chi3(k)(w - w^2) for |k| <= 30",
         _chi_omega_lhs, _chi_omega_rhs, 0, kind="residue", domain=lambda: [(k,) for k in range(-30, 31)])


_register()


# ---------------------------------------------------------------------------
# engine


def list_cases() -> list:
    return [_CASES[k] for k in sorted(_CASES)]


def get_case(id: str) -> IdentityCase:
    try:
        return _CASES[id]
    except KeyError:
        raise UnknownIdentity(f"unknown identity {id!r}") from None


def _compare(case: IdentityCase, order: int):
    if case.kind == "residue":
        for t in case.domain():
            a, b = case.lhs(t), case.rhs(t)
            if a != b:
                return FirstMismatch(0, 1, Eisenstein.coerce(a), Eisenstein.coerce(b), monomial=tuple(t))
        return None
    if case.kind == "bivariate":
        L, R = case.lhs(order, case.window), case.rhs(order, case.window)
        return first_mismatch_xy(L, R, case.window, order)
    L, R = case.lhs(order), case.rhs(order)
    if case.integral:
        for name, s in (("left", L), ("right", R)):
            bad = [e for e, c in s.items() if c.b]
            if bad:
                raise NotDivisible(f"{name} side has a non-rational coefficient at key {bad[0]}/{s.den}")
    den = case.exponent_den
    return first_mismatch(L, R, order * den, den)


def verify(id: str, order: Optional[int] = None) -> VerificationReport:
    """Check one identity; ``NotDivisible`` is reported as status ``error``."""
    return run_case(get_case(id), order)


def run_case(case: IdentityCase, order: Optional[int] = None) -> VerificationReport:
    """Evaluate and compare any case, registered or not (the tests use mutated copies)."""
    id = case.id
    if order is None:
        order = case.default_order
    if order < 0:
        raise ValueError("order must be non-negative")
    t0 = time.perf_counter()
    try:
        mm = _compare(case, order)
    except NotDivisible as exc:
        return VerificationReport(id, "error", order, None, (time.perf_counter() - t0) * 1000, str(exc))
    ms = (time.perf_counter() - t0) * 1000
    return VerificationReport(id, "pass" if mm is None else "fail", order, mm, ms)


def _verify_safe(args) -> VerificationReport:
    id, order = args
    try:
        return verify(id, order)
    except Exception as exc:  # one broken case must not abort the run
        return VerificationReport(id, "error", order if order is not None else -1, None, 0.0,
                                  f"{type(exc).__name__}: {exc}")


def scaled_order(case: IdentityCase, order_scale=None) -> int:
    if order_scale is None:
        return case.default_order
    return max(1, math.ceil(case.default_order * order_scale)) if case.default_order else 0


def verify_all(order_scale=None, jobs: Optional[int] = None, ids: Optional[Iterable[str]] = None,
               order: Optional[int] = None) -> list:
    """Run every case (or ``ids``); reports come back ordered by id.

    ``order`` overrides every case's order; otherwise defaults are scaled by
    ``order_scale``.
    """
    cases = list_cases() if ids is None else [get_case(i) for i in sorted(ids)]
    work = [(c.id, scaled_order(c, order_scale) if order is None else order) for c in cases]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(work) <= 1:
        return [_verify_safe(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_verify_safe, work))
    return sorted(results, key=lambda r: r.id)


def export_catalog() -> list:
    """One record per identity: id, description, default order, anchor formula."""
    return [
        {"id": c.id, "description": c.description, "default_order": c.default_order, "anchor": c.anchor}
        for c in list_cases()
    ]
