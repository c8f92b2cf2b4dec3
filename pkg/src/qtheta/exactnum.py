"""Exact arithmetic in the Eisenstein integers Z[w], w^2 + w + 1 = 0.

Python ints already give arbitrary precision, so the "big integer" layer is
the builtin ``int``.  An :class:`Eisenstein` value ``a + b*w`` is stored in the
basis {1, w}; multiplying by a power of w is then a cheap coefficient shuffle.
"""

from __future__ import annotations

from .errors import NotDivisible

__all__ = ["Eisenstein", "ZERO", "ONE", "OMEGA", "OMEGA2", "omega_pow", "div_exact", "is_rational_integer"]


class Eisenstein:
    """Immutable element ``a + b*w`` of Z[w]."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, name, value):
        raise AttributeError("Eisenstein is immutable")

    @classmethod
    def coerce(cls, value) -> "Eisenstein":
        if isinstance(value, Eisenstein):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(*value)
        raise TypeError(f"cannot interpret {value!r} as an Eisenstein integer")

    def __iter__(self):
        yield self.a
        yield self.b

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, Eisenstein):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"Eisenstein({self.a}, {self.b})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}w"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}w"

    def __add__(self, other):
        try:
            other = Eisenstein.coerce(other)
        except TypeError:
            return NotImplemented
        return Eisenstein(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, other):
        try:
            other = Eisenstein.coerce(other)
        except TypeError:
            return NotImplemented
        return Eisenstein(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return Eisenstein.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Eisenstein.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2,  w^2 = -1 - w
        bd = b * d
        return Eisenstein(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need div_exact")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "Eisenstein":
        """Image under the automorphism w -> w^2."""
        return Eisenstein(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational_integer(self) -> bool:
        return self.b == 0


ZERO = Eisenstein(0, 0)
ONE = Eisenstein(1, 0)
OMEGA = Eisenstein(0, 1)
OMEGA2 = Eisenstein(-1, -1)
_OMEGA_POWERS = (ONE, OMEGA, OMEGA2)


def omega_pow(n: int) -> Eisenstein:
    return _OMEGA_POWERS[n % 3]


def div_exact(u, v) -> Eisenstein:
    """Return ``w`` with ``v*w == u``; raise :class:`NotDivisible` otherwise."""
    u = Eisenstein.coerce(u)
    v = Eisenstein.coerce(v)
    n = v.norm()
    if n == 0:
        raise ZeroDivisionError("division by zero in Z[w]")
    t = u * v.conj()
    qa, ra = divmod(t.a, n)
    qb, rb = divmod(t.b, n)
    if ra or rb:
        raise NotDivisible(f"{u} is not divisible by {v} in Z[w]")
    return Eisenstein(qa, qb)


def is_rational_integer(u) -> bool:
    return Eisenstein.coerce(u).b == 0
