"""Laurent polynomials in x (or x, y) with truncated q-series coefficients.

An :class:`XYPoly` never pretends to be more exact than it can prove.  Besides
the stored terms it carries

``order``
    every stored coefficient is exact through ``q^(order/den)``;
``window``
    a box of exponents (one ``(lo, hi)`` interval per variable, bounds may be
    infinite) inside which each coefficient is exact -- monomials absent from
    ``terms`` but inside the window are zero through ``order``;
``support``
    a box outside which every true coefficient has valuation above ``order``
    (``None`` when unknown);
``floor``
    a lower bound on the valuation of every true coefficient (``None`` when
    unknown);
``growth``
    for one variable only: a quadratic lower bound ``A n^2 + B n + C`` on the
    valuation of the coefficient of ``x^n`` (``None`` when unknown).

Products certify their own window from these fields; see :meth:`XYPoly.__mul__`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import OrderExceeded, WindowExceeded, WindowUnderflow
from .exactnum import Eisenstein, ZERO
from .qseries import FirstMismatch, QSeries, _mul_terms, lcm

__all__ = ["Growth", "XYPoly", "subst_x", "first_mismatch_xy", "INF"]

INF = math.inf


@dataclass(frozen=True)
class Growth:
    """Quadratic valuation bound ``A n^2 + B n + C`` (units of ``q^(1/den)``)."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __call__(self, n) -> Fraction:
        return self.A * n * n + self.B * n + self.C

    def scaled(self, k) -> "Growth":
        return Growth(self.A * k, self.B * k, self.C * k)

    def plus(self, e) -> "Growth":
        return Growth(self.A, self.B, self.C + e)

    def shifted(self, a: int) -> "Growth":
        """Bound for ``x^a * F``: n -> n - a."""
        return Growth(self.A, self.B - 2 * self.A * a, self.A * a * a - self.B * a + self.C)

    def reflected(self) -> "Growth":
        return Growth(self.A, -self.B, self.C)

    def tilted(self, t) -> "Growth":
        """Bound after x -> x q^t (t in the same units)."""
        return Growth(self.A, self.B + t, self.C)

    def inf_convolve(self, other: "Growth") -> Optional["Growth"]:
        """Lower bound for the product of two series with these bounds."""
        A1, B1, C1 = self.A, self.B, self.C
        A2, B2, C2 = other.A, other.B, other.C
        if A1 <= 0 or A2 <= 0:
            return None

        def h(n):
            a = (2 * A2 * n + B2 - B1) / (2 * (A1 + A2))
            return A1 * a * a + B1 * a + C1 + A2 * (n - a) ** 2 + B2 * (n - a) + C2

        h0, h1, h2 = h(0), h(1), h(2)
        A = (h2 - 2 * h1 + h0) / 2
        return Growth(A, h1 - h0 - A, h0)

    def int_min(self) -> Fraction:
        if self.A <= 0:
            raise ValueError("growth bound is not coercive")
        v = -self.B / (2 * self.A)
        return min(self(math.floor(v)), self(math.ceil(v)))

    def int_min_outside(self, lo, hi) -> Fraction:
        """Minimum over integers ``n < lo`` or ``n > hi`` (``INF`` if none)."""
        v = -self.B / (2 * self.A)
        best = INF
        if lo != -INF:
            cands = [lo - 1] + [c for c in (math.floor(v), math.ceil(v)) if c < lo]
            best = min(best, min(self(c) for c in cands))
        if hi != INF:
            cands = [hi + 1] + [c for c in (math.floor(v), math.ceil(v)) if c > hi]
            best = min(best, min(self(c) for c in cands))
        return best

    def support(self, order) -> Optional[tuple]:
        """Smallest integer interval containing every ``n`` with bound ``<= order``."""
        v = -self.B / (2 * self.A)
        n0 = math.floor(v)
        if self(n0) > order:
            n0 += 1
            if self(n0) > order:
                return None
        lo = hi = n0
        while self(hi + 1) <= order:
            hi += 1
        while self(lo - 1) <= order:
            lo -= 1
        return (lo, hi)


def _box_hull(terms, nvars):
    if not terms:
        return tuple((0, 0) for _ in range(nvars))
    return tuple((min(m[i] for m in terms), max(m[i] for m in terms)) for i in range(nvars))


def _inside(m, box) -> bool:
    return all(lo <= x <= hi for x, (lo, hi) in zip(m, box))


def _box_subset(inner, outer) -> bool:
    return all(o[0] <= i[0] and i[1] <= o[1] for i, o in zip(inner, outer))


def _as_box(window, nvars):
    if window is None:
        return tuple((-INF, INF) for _ in range(nvars))
    if isinstance(window, int):
        return tuple((-window, window) for _ in range(nvars))
    return tuple(tuple(w) for w in window)


class XYPoly:
    """Certified truncation of a Laurent series in one or two variables."""

    __slots__ = ("nvars", "den", "terms", "order", "window", "support", "floor", "growth")

    def __init__(self, nvars, den, terms, order, window=None, support="auto", floor="auto", growth=None):
        if nvars not in (1, 2):
            raise ValueError("only one or two variables are supported")
        box = _as_box(window, nvars)
        clean = {}
        for m, c in terms.items():
            m = tuple(int(x) for x in m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} does not have {nvars} exponents")
            if not _inside(m, box):
                continue
            if not isinstance(c, QSeries):
                c = QSeries.monomial(c, 0, den, order)
            c = c.lift(lcm(c.den, den)) if c.den != den else c
            if c.den != den:
                raise ValueError("coefficient denominator does not divide the polynomial denominator")
            c = c.truncate(order) if c.order > order else c
            if c.order < order:
                raise OrderExceeded(f"coefficient of {m} is only exact through key {c.order}")
            if c.coeffs:
                clean[m] = c
        exact_everywhere = all(lo == -INF and hi == INF for lo, hi in box)
        if support == "auto":
            support = _box_hull(clean, nvars) if exact_everywhere else None
        if floor == "auto":
            if exact_everywhere or support is not None and _box_subset(support, box):
                floor = min([c.val for c in clean.values()] + [order + 1])
            elif growth is not None:
                floor = math.floor(growth.int_min())
            else:
                floor = None
        self.nvars = nvars
        self.den = den
        self.terms = clean
        self.order = order
        self.window = box
        self.support = None if support is None else tuple(tuple(s) for s in support)
        self.floor = floor
        self.growth = growth

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, series: QSeries, nvars: int = 1) -> "XYPoly":
        return cls(nvars, series.den, {(0,) * nvars: series}, series.order)

    @classmethod
    def monomial(cls, c, exps, qexp: int = 0, den: int = 1, order: int = 0) -> "XYPoly":
        exps = tuple(exps)
        return cls(len(exps), den, {exps: QSeries.monomial(c, qexp, den, order)}, order)

    def _replace(self, **kw) -> "XYPoly":
        obj = object.__new__(XYPoly)
        for name in XYPoly.__slots__:
            setattr(obj, name, kw.get(name, getattr(self, name)))
        return obj

    # -- queries ----------------------------------------------------------

    @property
    def order_q(self) -> Fraction:
        return Fraction(self.order, self.den)

    @property
    def radius(self) -> float:
        """Largest W such that the box max|exp| <= W lies in the window."""
        return min(min(-lo, hi) for lo, hi in self.window)

    @property
    def support_radius(self):
        if self.support is None:
            return INF
        return max(max(-lo, hi) for lo, hi in self.support)

    def is_complete(self) -> bool:
        return self.support is not None and _box_subset(self.support, self.window)

    def coefficient(self, mon) -> QSeries:
        mon = tuple(mon)
        if not _inside(mon, self.window):
            raise WindowExceeded(f"monomial {mon} lies outside the certified window {self.window}")
        return self.terms.get(mon) or QSeries.zero(self.den, self.order)

    def coefficient_x(self, l: int) -> QSeries:
        if self.nvars != 1:
            raise ValueError("coefficient_x needs a one-variable polynomial")
        return self.coefficient((l,))

    def constant_term(self) -> QSeries:
        return self.coefficient((0,) * self.nvars)

    def __repr__(self):
        return (
            f"XYPoly(nvars={self.nvars}, den={self.den}, order={self.order}, "
            f"window={self.window}, terms={len(self.terms)})"
        )

    # -- precision management ---------------------------------------------

    def lift(self, den: int) -> "XYPoly":
        if den == self.den:
            return self
        k = den // self.den
        if den % self.den:
            raise ValueError(f"cannot lift denominator {self.den} to {den}")
        return self._replace(
            den=den,
            terms={m: c.lift(den) for m, c in self.terms.items()},
            order=self.order * k,
            floor=None if self.floor is None else self.floor * k,
            growth=None if self.growth is None else self.growth.scaled(k),
        )

    def truncate(self, order: int) -> "XYPoly":
        if order > self.order:
            raise OrderExceeded(f"cannot raise order {self.order} to {order}")
        terms = {}
        for m, c in self.terms.items():
            c = c.truncate(order)
            if c.coeffs:
                terms[m] = c
        support = self.support
        if support is not None and self.growth is not None:
            support = self.growth.support(order)
            support = ((support,) if support else ((0, -1),))
        return self._replace(terms=terms, order=order, support=support)

    def restrict(self, window) -> "XYPoly":
        box = _as_box(window, self.nvars)
        new = tuple((max(a[0], b[0]), min(a[1], b[1])) for a, b in zip(self.window, box))
        terms = {m: c for m, c in self.terms.items() if _inside(m, new)}
        return self._replace(terms=terms, window=new)

    # -- arithmetic -------------------------------------------------------

    def _common(self, other: "XYPoly"):
        if self.nvars != other.nvars:
            raise ValueError("variable counts differ")
        L = lcm(self.den, other.den)
        return self.lift(L), other.lift(L)

    def __neg__(self):
        return self._replace(terms={m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, XYPoly):
            return NotImplemented
        f, g = self._common(other)
        order = min(f.order, g.order)
        window = tuple((max(a[0], b[0]), min(a[1], b[1])) for a, b in zip(f.window, g.window))
        terms = {}
        for m in set(f.terms) | set(g.terms):
            if not _inside(m, window):
                continue
            c = f.coefficient(m).truncate(order) + g.coefficient(m).truncate(order)
            if c.coeffs:
                terms[m] = c
        support = None
        if f.support is not None and g.support is not None:
            support = tuple((min(a[0], b[0]), max(a[1], b[1])) for a, b in zip(f.support, g.support))
        floor = None if f.floor is None or g.floor is None else min(f.floor, g.floor)
        return f._replace(terms=terms, order=order, window=window, support=support, floor=floor, growth=None)

    def __sub__(self, other):
        if not isinstance(other, XYPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "XYPoly":
        """Multiply every coefficient by a q-series (or a ring constant)."""
        if not isinstance(s, QSeries):
            s = Eisenstein.coerce(s)
            return self._replace(terms={m: c.scale(s) for m, c in self.terms.items()} if s else {})
        L = lcm(self.den, s.den)
        f, s = self.lift(L), s.lift(L)
        if f.floor is None:
            raise WindowUnderflow("scaling needs a valuation floor")
        v = s.effective_val()
        order = min(f.order + v, s.order + f.floor)
        terms = {}
        for m, c in f.terms.items():
            p = c.mul_to(s, order)
            if p.coeffs:
                terms[m] = p
        # outside the support the true valuation exceeds f.order + v >= order
        support = f.support
        return f._replace(
            terms=terms,
            order=order,
            support=support,
            floor=f.floor + v,
            growth=None if f.growth is None else f.growth.plus(v),
        )

    def shift(self, exps, qexp: int = 0, c=1) -> "XYPoly":
        """Multiply by the exact monomial ``c * q^(qexp/den) * x^a [y^b]``."""
        exps = tuple(exps)
        c = Eisenstein.coerce(c)
        if c.norm() == 0:
            raise ValueError("zero monomial")
        terms = {}
        for m, s in self.terms.items():
            terms[tuple(x + a for x, a in zip(m, exps))] = s.scale(c).shift(qexp)
        window = tuple((lo + a, hi + a) for (lo, hi), a in zip(self.window, exps))
        support = None
        if self.support is not None:
            support = tuple((lo + a, hi + a) for (lo, hi), a in zip(self.support, exps))
        growth = None
        if self.growth is not None:
            growth = self.growth.shifted(exps[0]).plus(qexp)
        return self._replace(
            terms=terms,
            order=self.order + qexp,
            window=window,
            support=support,
            floor=None if self.floor is None else self.floor + qexp,
            growth=growth,
        )

    def __mul__(self, other):
        if isinstance(other, QSeries) or isinstance(other, (int, Eisenstein)):
            return self.scale(other)
        if not isinstance(other, XYPoly):
            return NotImplemented
        return mul_xy(self, other)

    __rmul__ = __mul__

    # -- substitutions ----------------------------------------------------

    def reflect(self, var: int = 0) -> "XYPoly":
        """x -> 1/x (or y -> 1/y)."""

        def flip(box):
            return tuple((-hi, -lo) if i == var else (lo, hi) for i, (lo, hi) in enumerate(box))

        terms = {tuple(-x if i == var else x for i, x in enumerate(m)): c for m, c in self.terms.items()}
        return self._replace(
            terms=terms,
            window=flip(self.window),
            support=None if self.support is None else flip(self.support),
            growth=None if self.growth is None else self.growth.reflected(),
        )

    def qshift(self, a, var: int = 0) -> "XYPoly":
        """x -> x q^a (or y -> y q^a) for a rational ``a``."""
        a = Fraction(a)
        f = self.lift(lcm(self.den, a.denominator))
        t = a.numerator * (f.den // a.denominator)
        if t == 0:
            return f
        order = _tilt_order(f, var, t, everywhere=False)
        terms = {}
        for m, c in f.terms.items():
            c = c.shift(m[var] * t)
            c = c.truncate(order) if c.order > order else c
            if c.coeffs:
                terms[m] = c
        growth = support = floor = None
        if f.growth is not None:
            growth = f.growth.tilted(t)
            floor = math.floor(growth.int_min())
            s = growth.support(order)
            support = (s,) if s else ((0, -1),)
        return f._replace(terms=terms, order=order, support=support, floor=floor, growth=growth)

    def times_y(self) -> "XYPoly":
        """x -> x y; a one-variable input becomes a two-variable result."""
        f = self
        if f.nvars == 1:
            f = XYPoly._embed2(f)
        (wx0, wx1), (wy0, wy1) = f.window
        # y' = x-exponent + y-exponent is certified when y' - i stays in the y window for every i
        lo = -INF if wy0 == -INF else wy0 + wx1
        hi = INF if wy1 == INF else wy1 + wx0
        window = ((wx0, wx1), (lo, hi))
        support = None
        if f.support is not None:
            (sx0, sx1), (sy0, sy1) = f.support
            support = ((sx0, sx1), (sx0 + sy0, sx1 + sy1))
        terms = {(i, i + j): c for (i, j), c in f.terms.items()}
        terms = {m: c for m, c in terms.items() if _inside(m, window)}
        return f._replace(terms=terms, window=window, support=support, growth=None)

    @staticmethod
    def _embed2(f: "XYPoly") -> "XYPoly":
        return f._replace(
            nvars=2,
            terms={(m[0], 0): c for m, c in f.terms.items()},
            window=(f.window[0], (-INF, INF)),
            support=None if f.support is None else (f.support[0], (0, 0)),
            growth=None,
        )

    def swap(self) -> "XYPoly":
        """Exchange x and y."""
        if self.nvars != 2:
            raise ValueError("swap needs two variables")
        return self._replace(
            terms={(j, i): c for (i, j), c in self.terms.items()},
            window=self.window[::-1],
            support=None if self.support is None else self.support[::-1],
        )

    def specialize(self, qexp, sign: int = 1, moment: int = 0) -> QSeries:
        """Evaluate a one-variable polynomial at ``x = sign * q^qexp``.

        With ``moment = k`` the coefficient of ``x^n`` is weighted by ``n^k``
        (``k = 1`` gives ``x F'(x)`` at that point).  Terms outside the window
        are controlled through ``growth``.
        """
        if self.nvars != 1:
            raise ValueError("specialize needs one variable")
        a = Fraction(qexp)
        f = self.lift(lcm(self.den, a.denominator))
        t = a.numerator * (f.den // a.denominator)
        order = _tilt_order(f, 0, t, everywhere=True)
        acc: dict = {}
        for (n,), c in f.terms.items():
            w = (sign if n % 2 else 1) * (n ** moment if moment else 1)
            if not w:
                continue
            c = c.shift(n * t)
            if c.order < order:
                raise OrderExceeded("internal: coefficient precision below the certified order")
            for e, v in c.coeffs.items():
                if e <= order:
                    acc[e] = acc.get(e, ZERO) + v * w
        return QSeries(acc, f.den, order)

    # -- text -------------------------------------------------------------

    def dump(self) -> str:
        lines = []
        for m in sorted(self.terms):
            lines.append(" ".join(str(x) for x in m) + " :\n")
            lines.append(self.terms[m].dump())
        return "".join(lines)


def _tilt_order(f: XYPoly, var: int, t: int, everywhere: bool) -> int:
    """Order certified after x -> x q^(t/den).

    The coefficient of x^n moves by n*t.  Inside the region where coefficients
    are known (window, cut down to the support when that is finite) the loss is
    ``min(n*t)``; elsewhere the growth bound has to take over.  With
    ``everywhere`` the monomials outside the window count as well (needed when
    the variable is specialised and all terms get summed).
    """
    lo, hi = f.window[var]
    if f.support is not None and f.nvars == 1:
        slo, shi = f.support[0]
        rlo, rhi = max(lo, slo), min(hi, shi)
    else:
        rlo, rhi = lo, hi
    if rlo > rhi:
        inside = INF
    else:
        inside = min(rlo * t, rhi * t) if t else 0
        if inside == -INF:
            raise WindowUnderflow("q-shift over an unbounded window cannot be certified")
        inside += f.order
    covers = rlo == -INF and rhi == INF
    needs_growth = not covers and (everywhere or (rlo, rhi) != (lo, hi))
    outside = INF
    if needs_growth:
        if f.growth is None:
            raise WindowUnderflow("substitution needs a growth bound beyond the known terms")
        bound = f.growth.tilted(t).int_min_outside(rlo, rhi)
        if bound != INF:
            outside = math.ceil(bound) - 1
    order = min(inside, outside)
    return f.order if order == INF else int(order)


def mul_xy(F: XYPoly, G: XYPoly) -> XYPoly:
    """Certified product.

    The coefficient of ``x^N`` gathers pairs ``(m, N - m)``.  Pairs with a
    factor outside its support are negligible through the output order, so
    ``N`` is certified as soon as every remaining pair lies in both windows.
    """
    F, G = F._common(G)
    if F.floor is None or G.floor is None:
        raise WindowUnderflow("product needs valuation floors on both factors")
    order = min(F.order + G.floor, G.order + F.floor)
    unb = ((-INF, INF),) * F.nvars
    SF = F.support or unb
    SG = G.support or unb
    window = []
    for i in range(F.nvars):
        (slF, shF), (wlF, whF) = SF[i], F.window[i]
        (slG, shG), (wlG, whG) = SG[i], G.window[i]
        lo, hi = -INF, INF
        if slF < wlF:
            lo = max(lo, wlF + shG)
        if shF > whF:
            hi = min(hi, whF + slG)
        if slG < wlG:
            lo = max(lo, wlG + shF)
        if shG > whG:
            hi = min(hi, whG + slF)
        if F.support is not None and G.support is not None:
            if lo <= slF + slG:
                lo = -INF
            if hi >= shF + shG:
                hi = INF
        if lo > hi:
            raise WindowUnderflow("no monomial of the product can be certified")
        window.append((lo, hi))
    window = tuple(window)
    support = None
    if F.support is not None and G.support is not None:
        support = tuple((a[0] + b[0], a[1] + b[1]) for a, b in zip(F.support, G.support))
    acc: dict = {}
    gitems = [(m, c, c.val) for m, c in G.terms.items()]
    for mf, cf in F.terms.items():
        vf = cf.val
        for mg, cg, vg in gitems:
            if vf + vg > order:
                continue
            N = tuple(a + b for a, b in zip(mf, mg))
            if not _inside(N, window):
                continue
            part = _mul_terms(cf.coeffs, cg.coeffs, order)
            slot = acc.setdefault(N, {})
            for e, c in part.items():
                s = slot.get(e, ZERO) + c
                if s:
                    slot[e] = s
                else:
                    slot.pop(e, None)
    terms = {N: QSeries._raw(t, F.den, order) for N, t in acc.items() if t}
    growth = None
    if F.nvars == 1 and F.growth is not None and G.growth is not None:
        growth = F.growth.inf_convolve(G.growth)
    return F._replace(
        terms=terms, order=order, window=window, support=support, floor=F.floor + G.floor, growth=growth
    )


def subst_x(F: XYPoly, rule) -> XYPoly:
    """Apply one substitution rule.

    ``rule`` is one of ``("inv", var)``, ``("qshift", var, a)`` or ``("xy",)``
    where ``var`` is ``"x"`` or ``"y"`` and ``a`` a rational q-exponent.
    """
    kind = rule[0]
    if kind == "xy":
        return F.times_y()
    var = {"x": 0, "y": 1}[rule[1]]
    if kind == "inv":
        return F.reflect(var)
    if kind == "qshift":
        return F.qshift(rule[2], var)
    raise ValueError(f"unknown substitution {rule!r}")


def first_mismatch_xy(F: XYPoly, G: XYPoly, window, order_q) -> Optional[FirstMismatch]:
    """Compare two polynomials on a window box through ``q^order_q``."""
    F, G = F._common(G)
    box = _as_box(window, F.nvars)
    if any(lo == -INF or hi == INF for lo, hi in box):
        raise WindowExceeded("comparison window must be finite")
    for name, P in (("left", F), ("right", G)):
        if not _box_subset(box, P.window):
            raise WindowExceeded(f"{name} side is certified on {P.window}, asked for {box}")
    limit = math.floor(Fraction(order_q) * F.den)
    for name, P in (("left", F), ("right", G)):
        if limit > P.order:
            raise OrderExceeded(f"{name} side is exact through q^{P.order_q}, asked for q^{order_q}")
    worst = None
    for m in set(F.terms) | set(G.terms):
        if not _inside(m, box):
            continue
        a = F.terms.get(m)
        b = G.terms.get(m)
        ac = a.coeffs if a else {}
        bc = b.coeffs if b else {}
        for e in sorted(set(ac) | set(bc)):
            if e > limit:
                break
            x, y = ac.get(e, ZERO), bc.get(e, ZERO)
            if x != y:
                key = (e, m)
                if worst is None or key < worst[0]:
                    worst = (key, x, y)
                break
    if worst is None:
        return None
    (e, m), x, y = worst
    return FirstMismatch(e, F.den, x, y, monomial=m)
