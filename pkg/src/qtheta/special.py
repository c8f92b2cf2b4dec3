"""Named series: Pochhammer products, theta functions, indefinite theta sums,
the four tenth-order mock theta functions and the bivariate theta objects
used by the constant-term method.

Orders passed to the constructors here are q-exponents (``int`` or
``Fraction``): the result is exact through ``q^order``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .errors import Divergent, OrderExceeded, WindowExceeded
from .exactnum import ZERO
from .laurent import Growth, XYPoly
from .qseries import QSeries, lcm
from .residues import delta, rho

__all__ = [
    "pochhammer",
    "x_pochhammer",
    "theta0",
    "theta1",
    "trisum",
    "theta_slice",
    "thetasum",
    "jacobi_theta",
    "IndefThetaSpec",
    "indefinite_theta",
    "mock_phi",
    "mock_psi",
    "mock_X",
    "mock_chi",
    "mock_chi_raw",
    "mock_phi_hyper",
    "QuadSumSpec",
    "THEOREM_SPECS",
    "quad_sum",
    "weighted_quad_sum",
    "appell_constant_term",
    "lemma31_sides",
    "PHI_NUM",
    "PSI_NUM",
    "X_NUM",
    "CHI_NUM",
]


def _keys(order, den: int) -> int:
    """Largest key ``e`` with ``e/den <= order``."""
    return math.floor(Fraction(order) * den)


def _convex_range(qa, qb, qc, limit, lo=None) -> Optional[tuple]:
    """Integer interval where ``qa n^2 + qb n + qc <= limit`` (``qa > 0``), with ``n >= lo``."""

    def f(n):
        return qa * n * n + qb * n + qc

    v = math.floor(Fraction(-qb) / (2 * qa))
    if lo is not None and v < lo:
        v = lo
    best = v if f(v) <= f(v + 1) else v + 1
    if f(best) > limit:
        return None
    a = b = best
    while (lo is None or a - 1 >= lo) and f(a - 1) <= limit:
        a -= 1
    while f(b + 1) <= limit:
        b += 1
    return a, b


def _int_min(qa, qb, lo=0):
    """Minimum of ``qa n^2 + qb n`` over integers ``n >= lo``."""
    v = max(math.floor(Fraction(-qb) / (2 * qa)), lo)
    return min(qa * n * n + qb * n for n in (v, v + 1))


def _quadrant(A, B, C, a, b, c, limit) -> Iterator[tuple]:
    """Points ``u, v >= 0`` with ``A u^2 + B uv + C v^2 + a u + b v + c <= limit``.

    Needs ``A, C > 0`` and ``B >= 0``: then ``B uv >= 0`` on the quadrant and the
    separable bound ``(A u^2 + a u) + (C v^2 + b v) + c`` limits the rows.
    """
    rng = _convex_range(A, a, c + _int_min(C, b), limit, lo=0)
    if rng is None:
        return
    for u in range(rng[0], rng[1] + 1):
        row = _convex_range(C, B * u + b, A * u * u + a * u + c, limit, lo=0)
        if row is None:
            continue
        base = A * u * u + a * u + c
        for v in range(row[0], row[1] + 1):
            yield u, v, base + B * u * v + C * v * v + b * v


def _quadrant_floor(A, B, C, a, b, c):
    return _int_min(A, a) + _int_min(C, b) + c


# ---------------------------------------------------------------------------
# products and classical thetas


def pochhammer(a: int, b: int, den: int = 1, order=0, negate: bool = False) -> QSeries:
    """``(q^(a/den); q^(b/den))_oo``; with ``negate`` the factors are ``1 + q^...``."""
    if a <= 0:
        raise Divergent(f"(q^({a}/{den}); ...) has a factor with non-positive exponent")
    if b <= 0:
        raise Divergent("the Pochhammer step must be positive")
    N = _keys(order, den)
    if N < 0:
        return QSeries.zero(den, N)
    c = [0] * (N + 1)
    c[0] = 1
    sgn = 1 if negate else -1
    e = a
    while e <= N:
        for i in range(N, e - 1, -1):
            if c[i - e]:
                c[i] += sgn * c[i - e]
        e += b
    return QSeries({i: v for i, v in enumerate(c) if v}, den, N)


def _sum_over(f: Callable[[int], int], sign: Callable[[int], int], A, B, N) -> dict:
    """``{f(n): sum of sign(n)}`` over all n with ``A n^2 + B n <= N`` (keys)."""
    out: dict = {}
    rng = _convex_range(A, B, 0, N)
    if rng is None:
        return out
    for n in range(rng[0], rng[1] + 1):
        e = f(n)
        out[e] = out.get(e, 0) + sign(n)
    return {e: v for e, v in out.items() if v}


def theta0(order) -> QSeries:
    """sum (-1)^n q^(n^2)."""
    N = _keys(order, 1)
    return QSeries(_sum_over(lambda n: n * n, lambda n: -1 if n % 2 else 1, 1, 0, N), 1, N)


def theta1(order) -> QSeries:
    """Half of sum q^(n(n+1)/2), i.e. sum_{n >= 0} q^(n(n+1)/2)."""
    N = _keys(order, 1)
    out = {}
    n = 0
    while n * (n + 1) // 2 <= N:
        out[n * (n + 1) // 2] = 1
        n += 1
    return QSeries(out, 1, N)


def trisum(order) -> QSeries:
    """sum over all n of q^(n(n+1)/2); constant term 2."""
    return theta1(order).scale(2)


def theta_slice(j: int, residue: int, order) -> QSeries:
    """Residue slice of theta_j(q^(1/3)) (denominator 3).

    ``j = 0``: sum over n = residue (mod 3) of (-1)^n q^(n^2/3).
    ``j = 1``: sum over n = residue (mod 3) of q^(n(n+1)/6) -- twice the slice of
    theta_1, so that coefficients stay integral.
    """
    N = _keys(order, 3)
    if j not in (0, 1):
        raise ValueError("theta index must be 0 or 1")
    terms: dict = {}
    a2, b2 = (1, 0) if j == 0 else (Fraction(1, 2), Fraction(1, 2))
    rng = _convex_range(a2, b2, 0, N)
    for n in range(rng[0], rng[1] + 1):
        if n % 3 != residue % 3:
            continue
        e = n * n if j == 0 else n * (n + 1) // 2
        terms[e] = terms.get(e, 0) + (-1 if j == 0 and n % 2 else 1)
    return QSeries(terms, 3, N)


def thetasum(A: int, B: int, order, alt: bool = True) -> QSeries:
    """sum over n of (+-1)^n q^((A n^2 + B n)/2)."""
    if A <= 0:
        raise Divergent("thetasum needs A > 0")
    N = _keys(order, 2)
    sign = (lambda n: -1 if n % 2 else 1) if alt else (lambda n: 1)
    return QSeries(_sum_over(lambda n: A * n * n + B * n, sign, A, B, N), 2, N).reduced()


def jacobi_theta(m, a: int, b: int, den: int = 1, order=0, window=None, sign: int = 1) -> XYPoly:
    """Sum side of the triple product: Theta(sign * x^m q^(a/den); q^(b/den)).

    ``m`` is an int (one variable) or a pair of exponents ``(m_x, m_y)``.  The
    default ``window=None`` keeps every term through the order, giving a
    complete object.
    """
    if b <= 0:
        raise Divergent("theta needs a positive nome exponent")
    exps = (m,) if isinstance(m, int) else tuple(m)
    if not any(exps):
        raise ValueError("theta needs a nonzero monomial")
    N = _keys(order, den)
    rng = _convex_range(Fraction(b, 2), a - Fraction(b, 2), 0, N)
    terms = {}
    if rng is not None:
        for n in range(rng[0], rng[1] + 1):
            e = b * n * (n - 1) // 2 + a * n
            c = (-sign) ** abs(n)
            terms[tuple(x * n for x in exps)] = QSeries.monomial(c, e, den, N)
    growth = None
    if len(exps) == 1:
        mm = exps[0]
        growth = Growth(Fraction(b, 2 * mm * mm), Fraction(2 * a - b, 2 * mm), 0)
    if window is None:
        return XYPoly(len(exps), den, terms, N, growth=growth)
    support = [(0, 0)] * len(exps)
    if rng is not None:
        support = [tuple(sorted((x * rng[0], x * rng[1]))) for x in exps]
    return XYPoly(len(exps), den, terms, N, window=window, support=support, growth=growth)


def x_pochhammer(m, a: int, b: int, den: int = 1, order=0, sign: int = 1) -> XYPoly:
    """Product side piece ``(sign * x^m q^(a/den); q^(b/den))_oo`` as a complete polynomial."""
    if a < 0 or b <= 0:
        raise Divergent("x-Pochhammer needs a >= 0 and b > 0")
    exps = (m,) if isinstance(m, int) else tuple(m)
    N = _keys(order, den)
    poly = {(0,) * len(exps): {0: 1}}
    e = a
    while e <= N:
        new = {k: dict(v) for k, v in poly.items()}
        for k, coeffs in poly.items():
            tgt = tuple(x + y for x, y in zip(k, exps))
            slot = new.setdefault(tgt, {})
            for key, v in coeffs.items():
                if key + e <= N:
                    slot[key + e] = slot.get(key + e, 0) - sign * v
        poly = new
        e += b
    terms = {k: QSeries({e: v for e, v in c.items() if v}, den, N) for k, c in poly.items()}
    return XYPoly(len(exps), den, terms, N)


# ---------------------------------------------------------------------------
# indefinite theta sums


@dataclass(frozen=True)
class IndefThetaSpec:
    """sum rho_{r+dr,s+ds} (+-1)^(r+s) q^((A r^2 + B rs + C s^2 + a r + b s + c)/scale_den)."""

    A: int
    B: int
    C: int
    a: int
    b: int
    c: int
    scale_den: int = 1
    alternating: bool = False
    rho_shift: tuple = (0, 0)

    def __post_init__(self):
        if self.A <= 0 or self.C <= 0 or self.B < 0:
            raise ValueError("indefinite sums here need A > 0, C > 0 and B >= 0")
        if self.scale_den <= 0:
            raise ValueError("scale_den must be positive")

    def shifted_form(self):
        """Coefficients after the change of variables r' = r + dr, s' = s + ds."""
        A, B, C, a, b, c = self.A, self.B, self.C, self.a, self.b, self.c
        dr, ds = self.rho_shift
        return (
            A, B, C,
            a - 2 * A * dr - B * ds,
            b - 2 * C * ds - B * dr,
            A * dr * dr + B * dr * ds + C * ds * ds - a * dr - b * ds + c,
        )

    def floor_key(self) -> int:
        """Lower bound for every exponent key of the sum."""
        A, B, C, a, b, c = self.shifted_form()
        return min(
            _quadrant_floor(A, B, C, a, b, c),
            _quadrant_floor(A, B, C, 2 * A + B - a, 2 * C + B - b, A + B + C - a - b + c),
        )

    def points(self, limit) -> Iterator[tuple]:
        """``(r, s, weight, key)`` for every term with key ``<= limit``."""
        A, B, C, a, b, c = self.shifted_form()
        dr, ds = self.rho_shift
        flip = -1 if self.alternating and (dr + ds) % 2 else 1
        for u, v, e in _quadrant(A, B, C, a, b, c, limit):
            w = flip * (-1 if self.alternating and (u + v) % 2 else 1)
            yield u - dr, v - ds, w, e
        for u, v, e in _quadrant(A, B, C, 2 * A + B - a, 2 * C + B - b, A + B + C - a - b + c, limit):
            w = -flip * (-1 if self.alternating and (u + v) % 2 else 1)
            yield -1 - u - dr, -1 - v - ds, w, e


PHI_NUM = IndefThetaSpec(1, 3, 1, 1, 1, 0, alternating=True)
PSI_NUM = IndefThetaSpec(1, 3, 1, 3, 3, 2, alternating=True)  # enters with an extra minus sign
X_NUM = IndefThetaSpec(2, 6, 2, 1, 1, 0)
CHI_NUM = IndefThetaSpec(2, 6, 2, 3, 3, 1)


def indefinite_theta(spec: IndefThetaSpec, order) -> QSeries:
    N = _keys(order, spec.scale_den)
    acc: dict = {}
    for _, _, w, e in spec.points(N):
        acc[e] = acc.get(e, 0) + w
    return QSeries({e: v for e, v in acc.items() if v}, spec.scale_den, N)


def mock_phi(order) -> QSeries:
    return indefinite_theta(PHI_NUM, order) / theta0(order)


def mock_psi(order) -> QSeries:
    return -indefinite_theta(PSI_NUM, order) / theta0(order)


def mock_X(order) -> QSeries:
    # 2 / sum q^(n(n+1)/2) is 1 / theta_1
    return indefinite_theta(X_NUM, order) / theta1(order)


def mock_chi(order) -> QSeries:
    return indefinite_theta(CHI_NUM, order) / theta1(order)


def mock_chi_raw(order) -> QSeries:
    """chi from the form with -3r-3s: 2 - 2q/(sum q^(n(n+1)/2)) * sum rho q^(2r^2+6rs+2s^2-3r-3s)."""
    num = indefinite_theta(IndefThetaSpec(2, 6, 2, -3, -3, 0), order).shift(1)
    return QSeries.one(1, num.order).scale(2) - num / theta1(order)


def mock_phi_hyper(order) -> QSeries:
    """sum over n >= 0 of q^(n(n+1)/2) / ((1-q)(1-q^3)...(1-q^(2n+1)))."""
    N = _keys(order, 1)
    inv = [0] * (N + 1)  # 1 / prod_{j <= n} (1 - q^(2j+1)), grown one factor at a time
    inv[0] = 1
    total = [0] * (N + 1)
    n = 0
    while n * (n + 1) // 2 <= N:
        m = 2 * n + 1
        for i in range(m, N + 1):
            inv[i] += inv[i - m]
        t = n * (n + 1) // 2
        for i in range(0, N + 1 - t):
            total[i + t] += inv[i]
        n += 1
    return QSeries({i: v for i, v in enumerate(total) if v}, 1, N)


# ---------------------------------------------------------------------------
# quadruple sums over (k, l, r, s)


@dataclass(frozen=True)
class QuadSumSpec:
    """One of the (k, l, r, s) sums with weight (d(k+dk)-d(r+dr))(d(l+dl)-d(s+ds)).

    ``kl_kind`` is ``"square"`` (k^2 + l^2 and the sign (-1)^(k+l+r+s)) or
    ``"triangular"`` (k(k+1)/2 + l(l+1)/2, no sign).  ``rs_form`` is
    ``(A, B, C, a, b)``; all exponents are divided by ``scale_den``.
    """

    kl_kind: str
    delta_shifts: tuple
    rs_form: tuple
    const: int = 0
    scale_den: int = 3

    def weight(self, k, l, r, s) -> int:
        dk, dl, dr, ds = self.delta_shifts
        return (delta(k + dk) - delta(r + dr)) * (delta(l + dl) - delta(s + ds))


THEOREM_SPECS = {
    1: QuadSumSpec("square", (0, 0, 0, 0), (1, 3, 1, 3, 3), 1),
    2: QuadSumSpec("square", (0, 0, -1, -1), (1, 3, 1, 1, 1), 0),
    3: QuadSumSpec("triangular", (-1, -1, 0, 0), (2, 6, 2, 3, 3), 0),
    4: QuadSumSpec("triangular", (-1, -1, 1, 1), (2, 6, 2, 1, 1), -2),
}


def _kl_exponent(kind: str, k: int) -> int:
    return k * k if kind == "square" else k * (k + 1) // 2


def weighted_quad_sum(kl_kind: str, rs_form, const: int, weight, order, with_k: bool = True, scale_den: int = 3):
    """sum rho_{r,s} w(k,l,r,s) [sign] q^((f(k) + f(l) + Q(r,s) + const)/scale_den).

    ``weight`` must be 3-periodic in each argument; it is evaluated on residues
    only, and the sum is assembled residue class by residue class.  With
    ``with_k=False`` the k-sum is dropped (weight is then called with k = 0).
    """
    if kl_kind not in ("square", "triangular"):
        raise ValueError(f"unknown kl kind {kl_kind!r}")
    alt = kl_kind == "square"
    spec = IndefThetaSpec(*rs_form, 0, scale_den=scale_den, alternating=alt)
    T = _keys(order, scale_den)
    Trs = T - const
    Tkl = Trs - spec.floor_key()
    den = scale_den

    # one-dimensional slices by residue class
    slices = {i: {} for i in range(3)}
    if Tkl >= 0:
        a2, b2 = (1, 0) if alt else (Fraction(1, 2), Fraction(1, 2))
        rng = _convex_range(a2, b2, 0, Tkl)
        for k in range(rng[0], rng[1] + 1):
            e = _kl_exponent(kl_kind, k)
            sl = slices[k % 3]
            sl[e] = sl.get(e, 0) + (-1 if alt and k % 2 else 1)
    K = {i: QSeries({e: v for e, v in sl.items() if v}, den, Tkl) for i, sl in slices.items()}
    KL = {}
    for i in range(3 if with_k else 1):
        for j in range(3):
            KL[i, j] = K[i].mul_to(K[j], Tkl) if with_k else K[j]

    rs_cls: dict = {}
    for r, s, w, e in spec.points(Trs):
        slot = rs_cls.setdefault((r % 3, s % 3), {})
        slot[e] = slot.get(e, 0) + w

    acc = QSeries.zero(den, Trs)
    for (ri, si), terms in sorted(rs_cls.items()):
        R = QSeries({e: v for e, v in terms.items() if v}, den, Trs)
        combo = QSeries.zero(den, Tkl)
        for (i, j), ser in KL.items():
            w = weight(i, j, ri, si)
            if w:
                combo = combo + ser.scale(w)
        if combo.coeffs:
            acc = acc + combo.mul_to(R, Trs)
    return acc.shift(const)


def quad_sum(spec: QuadSumSpec, order) -> QSeries:
    return weighted_quad_sum(spec.kl_kind, spec.rs_form, spec.const, spec.weight, order, scale_den=spec.scale_den)


# ---------------------------------------------------------------------------
# constant terms against the Appell-type sum


def appell_constant_term(F: XYPoly, G: XYPoly, law, at=(0, 0), order=0) -> QSeries:
    """C_{x^a y^b} [ F(x) G(y) sum rho_{r,s} x^-r y^-s q^((alpha rs + beta r + gamma s + c)/D) ].

    ``law`` is ``(alpha, beta, gamma, c, D)`` (``c`` may be omitted as a
    4-tuple ``(alpha, beta, gamma, D)``).  The double sum is never formed: the
    result is ``sum rho_{r,s} F_{r+a} G_{s+b} q^law(r,s)``, enumerated over the
    pairs whose valuation bound (growth of F and G plus the law) stays within
    the order.  Every pair that contributes must have both coefficients inside
    the certified windows and precise enough; otherwise the call raises.
    """
    if len(law) == 4:
        alpha, beta, gamma, D = law
        c0 = 0
    else:
        alpha, beta, gamma, c0, D = law
    if alpha < 0:
        raise ValueError("the Appell law needs alpha >= 0")
    if F.nvars != 1 or G.nvars != 1:
        raise ValueError("F and G must each be polynomials in one variable")
    if F.growth is None or G.growth is None:
        raise WindowExceeded("the Appell sum needs growth bounds on both factors")
    L = lcm(F.den, G.den, D)
    F, G = F.lift(L), G.lift(L)
    k = L // D
    T = _keys(order, L)
    a, b = at
    gF, gG = F.growth, G.growth

    def law_key(r, s):
        return k * (alpha * r * s + beta * r + gamma * s + c0)

    pairs = []
    # r, s >= 0: law >= beta r + gamma s + c0
    pu = gF.shifted(-a)
    P = Growth(pu.A, pu.B + k * beta, pu.C)
    qg = gG.shifted(-b)
    Q = Growth(qg.A, qg.B + k * gamma, qg.C + k * c0)
    pairs += [(u, v) for u, v in _pair_range(P, Q, T)]
    # r = -1-u, s = -1-v: law >= (alpha-beta) u + (alpha-gamma) v + (alpha-beta-gamma+c0)
    pn = gF.shifted(-a).reflected().shifted(-1)  # u -> gF(a - 1 - u)
    P = Growth(pn.A, pn.B + k * (alpha - beta), pn.C)
    qn = gG.shifted(-b).reflected().shifted(-1)
    Q = Growth(qn.A, qn.B + k * (alpha - gamma), qn.C + k * (alpha - beta - gamma + c0))
    pairs += [(-1 - u, -1 - v) for u, v in _pair_range(P, Q, T)]

    acc: dict = {}
    for r, s in pairs:
        e = law_key(r, s)
        n, m = r + a, s + b
        if gF(n) + gG(m) + e > T:
            continue
        try:
            cf = F.coefficient((n,))
            cg = G.coefficient((m,))
        except WindowExceeded as exc:
            raise WindowExceeded(f"pair (r, s) = ({r}, {s}) needs x^{n} and y^{m}: {exc}") from None
        vf = max(cf.effective_val(), math.ceil(gF(n)))
        vg = max(cg.effective_val(), math.ceil(gG(m)))
        exact = min(cf.order + vg, cg.order + vf) + e
        if exact < T:
            raise OrderExceeded(f"pair ({r}, {s}) is exact only through key {exact}, need {T}")
        if not cf.coeffs or not cg.coeffs:
            continue
        w = rho(r, s)
        part = cf.mul_to(cg, T - e)
        for key, v in part.coeffs.items():
            tot = acc.get(key + e, ZERO) + v * w
            acc[key + e] = tot
    return QSeries({e: v for e, v in acc.items() if v}, L, T)


def _pair_range(P: Growth, Q: Growth, T):
    """Pairs ``u, v >= 0`` with ``P(u) + Q(v) <= T`` (both convex quadratics)."""
    qmin = min(Q(v) for v in _vertex_candidates(Q))
    rng = _convex_range(P.A, P.B, P.C + qmin, T, lo=0)
    if rng is None:
        return
    for u in range(rng[0], rng[1] + 1):
        row = _convex_range(Q.A, Q.B, Q.C + P(u), T, lo=0)
        if row is None:
            continue
        for v in range(row[0], row[1] + 1):
            yield u, v


def _vertex_candidates(g: Growth):
    v = max(math.floor(-g.B / (2 * g.A)), 0)
    return (v, v + 1)


# ---------------------------------------------------------------------------
# the two theta-product identities of the constant-term method


def _f_left(order) -> XYPoly:
    """sum (-1)^(k+l) (d(k) - d(l)) q^((k^2+l^2)/3) x^l, complete."""
    T = _keys(order, 3)
    S = {0: {}, 1: {}}  # by delta(l)
    rng = _convex_range(1, 0, 0, T)
    for kk in range(rng[0], rng[1] + 1):
        sg = -1 if kk % 2 else 1
        for dl in (0, 1):
            w = delta(kk) - dl
            if w:
                S[dl][kk * kk] = S[dl].get(kk * kk, 0) + sg * w
    terms = {}
    for l in range(rng[0], rng[1] + 1):
        sg = -1 if l % 2 else 1
        base = S[delta(l)]
        c = {e + l * l: sg * v for e, v in base.items() if v and e + l * l <= T}
        if c:
            terms[(l,)] = QSeries(c, 3, T)
    return XYPoly(1, 3, terms, T, growth=Growth(1, 0, 0))


def _g_left(order) -> XYPoly:
    """sum (d(k-1) - d(l)) q^((k(k+1)/2 + 2 l^2)/3) x^l, complete."""
    T = _keys(order, 3)
    S = {0: {}, 1: {}}
    rng = _convex_range(Fraction(1, 2), Fraction(1, 2), 0, T)
    for kk in range(rng[0], rng[1] + 1):
        e = kk * (kk + 1) // 2
        for dl in (0, 1):
            w = delta(kk - 1) - dl
            if w:
                S[dl][e] = S[dl].get(e, 0) + w
    terms = {}
    lr = _convex_range(2, 0, 0, T)
    for l in range(lr[0], lr[1] + 1):
        base = S[delta(l)]
        c = {e + 2 * l * l: v for e, v in base.items() if v and e + 2 * l * l <= T}
        if c:
            terms[(l,)] = QSeries(c, 3, T)
    return XYPoly(1, 3, terms, T, growth=Growth(2, 0, 0))


def _f_right(order) -> XYPoly:
    """-x^-1 q^(1/3) (q;q)/(q^2;q^2) Theta(x;q^2) Theta(x;q)."""
    o = math.ceil(Fraction(order))
    prod = jacobi_theta(1, 0, 2, 1, o) * jacobi_theta(1, 0, 1, 1, o)
    pre = pochhammer(1, 1, 1, o) / pochhammer(2, 2, 1, o)
    out = prod.scale(pre).lift(3).shift((-1,), 1, -1)
    return out.truncate(_keys(order, 3))


def _g_right(order) -> XYPoly:
    """-2 (q^2;q^2)/(q;q) Theta(xq;q^2) Theta(-xq^2;q^4)."""
    o = math.ceil(Fraction(order))
    prod = jacobi_theta(1, 1, 2, 1, o) * jacobi_theta(1, 2, 4, 1, o, sign=-1)
    pre = (pochhammer(2, 2, 1, o) / pochhammer(1, 1, 1, o)).scale(-2)
    return prod.scale(pre).lift(3).truncate(_keys(order, 3))


def lemma31_sides(which: str, side: str, order, window=None) -> XYPoly:
    """One side of the two theta-product identities used by the constant-term method.

    ``which`` is ``"first"`` (the (-1)^(k+l) q^((k^2+l^2)/3) family) or
    ``"second"`` (the q^((k(k+1)/2 + 2l^2)/3) family); ``side`` is ``"L"``
    (double sum) or ``"R"`` (theta product).  All four come back with
    denominator 3.
    """
    build = {
        ("first", "L"): _f_left,
        ("first", "R"): _f_right,
        ("second", "L"): _g_left,
        ("second", "R"): _g_right,
    }.get((which, side))
    if build is None:
        raise ValueError(f"unknown side {which!r}/{side!r}")
    poly = build(order)
    if window is not None:
        poly = poly.restrict(window)
    return poly
