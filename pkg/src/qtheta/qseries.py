"""Truncated Puiseux series in q with Eisenstein-integer coefficients.

A :class:`QSeries` stores integer keys ``e`` meaning ``q^(e/den)`` together
with a guarantee ``order``: every coefficient with key ``<= order`` is exact,
nothing beyond it is claimed.  Binary operations lift both operands to the lcm
of their denominators first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, floor
from typing import Iterable, Optional

from .errors import NonIntegerExponents, NotInvertible, OrderExceeded, ZeroSeries
from .exactnum import Eisenstein, ZERO, omega_pow

__all__ = ["QSeries", "FirstMismatch", "first_mismatch", "equal_through", "lcm"]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True)
class FirstMismatch:
    """Smallest exponent (over a common denominator) where two sides differ."""

    exponent_num: int
    exponent_den: int
    lhs: Eisenstein
    rhs: Eisenstein
    monomial: Optional[tuple] = None

    def __bool__(self):
        return False

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.exponent_num, self.exponent_den)


class QSeries:
    """Immutable truncated series ``sum c_e q^(e/den) + O(q^((order+1)/den))``."""

    __slots__ = ("den", "coeffs", "order")

    def __init__(self, coeffs=None, den: int = 1, order: int = 0):
        if den <= 0:
            raise ValueError("denominator must be positive")
        clean = {}
        for e, c in (coeffs or {}).items():
            e = int(e)
            if e > order:
                continue
            c = Eisenstein.coerce(c)
            if c:
                clean[e] = c
        object.__setattr__(self, "den", int(den))
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "order", int(order))

    @classmethod
    def _raw(cls, coeffs: dict, den: int, order: int) -> "QSeries":
        # caller guarantees: keys <= order, values nonzero Eisenstein
        obj = object.__new__(cls)
        object.__setattr__(obj, "den", den)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "order", order)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def monomial(cls, c, e: int, den: int = 1, order: int = 0) -> "QSeries":
        return cls({e: c}, den, order)

    @classmethod
    def zero(cls, den: int = 1, order: int = 0) -> "QSeries":
        return cls._raw({}, den, order)

    @classmethod
    def one(cls, den: int = 1, order: int = 0) -> "QSeries":
        return cls.monomial(1, 0, den, order)

    @classmethod
    def from_list(cls, values: Iterable, order: Optional[int] = None, den: int = 1) -> "QSeries":
        """Dense constructor: ``values[i]`` is the coefficient of ``q^(i/den)``."""
        values = list(values)
        if order is None:
            order = len(values) - 1
        return cls(dict(enumerate(values)), den, order)

    # -- basic queries ----------------------------------------------------

    def __repr__(self):
        return f"QSeries(den={self.den}, order={self.order}, {self.to_text()!r})"

    def __len__(self):
        return len(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order_q(self) -> Fraction:
        return Fraction(self.order, self.den)

    @property
    def val(self) -> Optional[int]:
        """Least key with a nonzero coefficient, ``None`` for the zero series."""
        return min(self.coeffs) if self.coeffs else None

    def effective_val(self) -> int:
        """Certified lower bound on the true valuation (``order + 1`` if zero)."""
        return min(self.coeffs) if self.coeffs else self.order + 1

    def is_rational(self) -> bool:
        return all(c.b == 0 for c in self.coeffs.values())

    def has_integer_exponents(self) -> bool:
        return all(e % self.den == 0 for e in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        L = lcm(self.den, other.den)
        a, b = self.lift(L), other.lift(L)
        return a.order == b.order and a.coeffs == b.coeffs

    __hash__ = None

    # -- denominators -----------------------------------------------------

    def lift(self, den: int) -> "QSeries":
        if den == self.den:
            return self
        if den % self.den:
            raise ValueError(f"cannot lift denominator {self.den} to {den}")
        k = den // self.den
        return QSeries._raw({e * k: c for e, c in self.coeffs.items()}, den, self.order * k)

    def reduced(self) -> "QSeries":
        """Same series over the smallest denominator that holds its exponents."""
        g = self.den
        for e in self.coeffs:
            g = gcd(g, e)
            if g == 1:
                return self
        if g == 1:
            return self
        return QSeries._raw({e // g: c for e, c in self.coeffs.items()}, self.den // g, self.order // g)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise OrderExceeded(f"cannot raise guarantee order {self.order} to {order}")
        if order == self.order:
            return self
        return QSeries._raw({e: c for e, c in self.coeffs.items() if e <= order}, self.den, order)

    def truncate_q(self, order_q) -> "QSeries":
        """Truncate to the largest key whose exponent is ``<= order_q``."""
        return self.truncate(floor(Fraction(order_q) * self.den))

    # -- ring operations --------------------------------------------------

    def _common(self, other: "QSeries"):
        L = lcm(self.den, other.den)
        return self.lift(L), other.lift(L)

    def __neg__(self):
        return QSeries._raw({e: -c for e, c in self.coeffs.items()}, self.den, self.order)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            try:
                other = QSeries.monomial(other, 0, self.den, self.order)
            except TypeError:
                return NotImplemented
        f, g = self._common(other)
        order = min(f.order, g.order)
        out = {e: c for e, c in f.coeffs.items() if e <= order}
        for e, c in g.coeffs.items():
            if e > order:
                continue
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return QSeries._raw(out, f.den, order)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            try:
                other = QSeries.monomial(other, 0, self.den, self.order)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = Eisenstein.coerce(c)
        if not c:
            return QSeries.zero(self.den, self.order)
        return QSeries._raw({e: v * c for e, v in self.coeffs.items()}, self.den, self.order)

    def shift(self, e: int) -> "QSeries":
        """Multiply by ``q^(e/den)`` (exact, so the order moves with it)."""
        return QSeries._raw({k + e: c for k, c in self.coeffs.items()}, self.den, self.order + e)

    def shift_q(self, exponent) -> "QSeries":
        """Multiply by ``q^exponent`` for a rational ``exponent``."""
        exponent = Fraction(exponent)
        f = self.lift(lcm(self.den, exponent.denominator))
        return f.shift(exponent.numerator * (f.den // exponent.denominator))

    def __mul__(self, other):
        if isinstance(other, (int, Eisenstein)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        f, g = self._common(other)
        order = min(f.order + g.effective_val(), g.order + f.effective_val())
        return QSeries._raw(_mul_terms(f.coeffs, g.coeffs, order), f.den, order)

    __rmul__ = __mul__

    def mul_to(self, other: "QSeries", order: int) -> "QSeries":
        """Product truncated at ``order`` (in the lifted denominator).

        No certification is attempted: callers use this when they have proved
        the bound themselves (e.g. the bivariate product rules).
        """
        f, g = self._common(other)
        return QSeries._raw(_mul_terms(f.coeffs, g.coeffs, order), f.den, order)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            return QSeries.one(self.den, self.order)
        base = self
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Multiplicative inverse by q-adic long division."""
        if not self.coeffs:
            raise ZeroSeries("cannot invert a series that is zero through its order")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        if lead.norm() != 1:
            raise NotInvertible(f"leading coefficient {lead} is not a unit of Z[w]")
        u_inv = lead.conj()  # unit: inverse equals conjugate
        n_max = self.order - v
        # normalised tail h with 1 + h = q^(-v) f / lead
        h = []
        for e, c in self.coeffs.items():
            k = e - v
            if 0 < k <= n_max:
                c = c * u_inv
                h.append((k, c.a, c.b))
        h.sort()
        ra = [0] * (n_max + 1)
        rb = [0] * (n_max + 1)
        ra[0] = 1
        for n in range(1, n_max + 1):
            sa = sb = 0
            for k, ha, hb in h:
                if k > n:
                    break
                xa, xb = ra[n - k], rb[n - k]
                if xa or xb:
                    bd = hb * xb
                    sa += ha * xa - bd
                    sb += ha * xb + hb * xa - bd
            ra[n], rb[n] = -sa, -sb
        out = {}
        for n in range(n_max + 1):
            if ra[n] or rb[n]:
                out[n - v] = Eisenstein(ra[n], rb[n]) * u_inv
        return QSeries._raw(out, self.den, self.order - 2 * v)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        if isinstance(other, (int, Eisenstein)):
            return self.div_scalar(other)
        return NotImplemented

    def div_scalar(self, c) -> "QSeries":
        """Divide every coefficient exactly by ``c`` in Z[w]."""
        from .exactnum import div_exact

        return QSeries._raw({e: div_exact(v, c) for e, v in self.coeffs.items()}, self.den, self.order)

    # -- substitutions ----------------------------------------------------

    def subst_power(self, k: int) -> "QSeries":
        """Substitute ``q -> q^k``."""
        if k <= 0:
            raise ValueError("substitution power must be positive")
        if k == 1:
            return self
        return QSeries._raw({e * k: c for e, c in self.coeffs.items()}, self.den, self.order * k)

    def twist(self, j: int) -> "QSeries":
        """Substitute ``q -> w^j q^(1/3)``; needs integer exponents."""
        if not self.has_integer_exponents():
            raise NonIntegerExponents("twist needs a series with integer exponents")
        d = self.den
        out = {}
        for e, c in self.coeffs.items():
            n = e // d
            out[n] = c * omega_pow(j * n)
        return QSeries._raw(out, 3, self.order // d)

    def conj(self) -> "QSeries":
        """Apply w -> w^2 to every coefficient."""
        return QSeries._raw({e: c.conj() for e, c in self.coeffs.items()}, self.den, self.order)

    # -- coefficient access -----------------------------------------------

    def coeff(self, e: int, den: int = 1) -> Eisenstein:
        L = lcm(self.den, den)
        key = e * (L // den)
        if key > self.order * (L // self.den):
            raise OrderExceeded(f"q^({e}/{den}) lies beyond the guaranteed order {self.order}/{self.den}")
        k = L // self.den
        if key % k:
            return ZERO
        return self.coeffs.get(key // k, ZERO)

    def __getitem__(self, e: int) -> Eisenstein:
        return self.coeff(e, self.den)

    # -- text -------------------------------------------------------------

    def dump(self, den: Optional[int] = None) -> str:
        """One ``e/D<TAB>a<TAB>b`` line per nonzero term, sorted by exponent."""
        f = self if den is None else self.lift(lcm(self.den, den))
        if den is not None and f.den != den:
            f = f.reduced()
            if den % f.den:
                raise ValueError(f"exponents need denominator {f.den}, not {den}")
            f = f.lift(den)
        return "".join(f"{e}/{f.den}\t{c.a}\t{c.b}\n" for e, c in f.items())

    @classmethod
    def parse_dump(cls, text: str, order: int) -> "QSeries":
        terms = {}
        den = None
        for line in text.splitlines():
            if not line.strip():
                continue
            exp, a, b = line.split("\t")
            num, d = exp.split("/")
            d = int(d)
            if den is None:
                den = d
            elif den != d:
                raise ValueError("mixed denominators in dump")
            terms[int(num)] = Eisenstein(int(a), int(b))
        return cls(terms, den or 1, order)

    def to_text(self, limit: int = 12) -> str:
        parts = []
        for e, c in self.items()[:limit]:
            x = Fraction(e, self.den)
            mono = "" if x == 0 else ("q" if x == 1 else f"q^{x}" if x.denominator == 1 else f"q^({x})")
            coef = str(c)
            if c.b and c.a:
                coef = f"({coef})"
            if mono and coef == "1":
                coef = ""
            elif mono and coef == "-1":
                coef = "-"
            parts.append(coef + ("*" if mono and coef not in ("", "-") else "") + mono)
        text = " + ".join(parts).replace("+ -", "- ") or "0"
        if len(self.coeffs) > limit:
            text += " + ..."
        tail = Fraction(self.order + 1, self.den)
        tail = str(tail) if tail.denominator == 1 else f"({tail})"
        return f"{text} + O(q^{tail})"


def _mul_terms(fc: dict, gc: dict, order: int) -> dict:
    if not fc or not gc:
        return {}
    fl = sorted((e, c.a, c.b) for e, c in fc.items())
    gl = sorted((e, c.a, c.b) for e, c in gc.items())
    gmin = gl[0][0]
    acc_a: dict = {}
    rational = all(t[2] == 0 for t in fl) and all(t[2] == 0 for t in gl)
    if rational:
        for e1, a1, _ in fl:
            if e1 + gmin > order:
                break
            for e2, a2, _ in gl:
                e = e1 + e2
                if e > order:
                    break
                acc_a[e] = acc_a.get(e, 0) + a1 * a2
        return {e: Eisenstein(a, 0) for e, a in acc_a.items() if a}
    acc_b: dict = {}
    for e1, a1, b1 in fl:
        if e1 + gmin > order:
            break
        for e2, a2, b2 in gl:
            e = e1 + e2
            if e > order:
                break
            bd = b1 * b2
            acc_a[e] = acc_a.get(e, 0) + a1 * a2 - bd
            acc_b[e] = acc_b.get(e, 0) + a1 * b2 + b1 * a2 - bd
    out = {}
    for e, a in acc_a.items():
        b = acc_b[e]
        if a or b:
            out[e] = Eisenstein(a, b)
    return out


def first_mismatch(f: QSeries, g: QSeries, order: int, den: int = 1) -> Optional[FirstMismatch]:
    """Compare ``f`` and ``g`` through ``q^(order/den)``.

    Returns ``None`` when they agree, otherwise the smallest differing exponent
    over the lifted common denominator.
    """
    L = lcm(f.den, g.den, den)
    f, g = f.lift(L), g.lift(L)
    limit = order * (L // den)
    for s, name in ((f, "left"), (g, "right")):
        if limit > s.order:
            raise OrderExceeded(
                f"{name} side is only guaranteed through q^{s.order_q}, asked for q^{Fraction(order, den)}"
            )
    keys = sorted(k for k in set(f.coeffs) | set(g.coeffs) if k <= limit)
    for k in keys:
        a, b = f.coeffs.get(k, ZERO), g.coeffs.get(k, ZERO)
        if a != b:
            return FirstMismatch(k, L, a, b)
    return None


def equal_through(f: QSeries, g: QSeries, order: int, den: int = 1):
    """``True`` if equal through ``q^(order/den)``, else the (falsy) mismatch."""
    m = first_mismatch(f, g, order, den)
    return True if m is None else m
