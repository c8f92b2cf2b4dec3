"""Small integer-valued weight functions used by the indefinite sums."""

from __future__ import annotations

__all__ = ["rho", "delta", "d", "chi3", "p"]


def rho(r: int, s: int) -> int:
    """+1 on the quadrant r,s >= 0, -1 on r,s < 0, 0 elsewhere."""
    if r >= 0 and s >= 0:
        return 1
    if r < 0 and s < 0:
        return -1
    return 0


def delta(r: int) -> int:
    """Indicator of r = 0 mod 3."""
    return 1 if r % 3 == 0 else 0


def d(n: int) -> int:
    """Indicator of n = 0."""
    return 1 if n == 0 else 0


def chi3(k: int) -> int:
    """Nontrivial character mod 3."""
    return (0, 1, -1)[k % 3]


_P_TABLE = {
    (0, 0): 1, (1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1,
    (0, 1): -1, (0, 2): -1,
    (1, 0): 0, (2, 0): 0,
}


def p(k: int, l: int) -> int:
    """Weight of q^((k^2+l^2)/3) in the product of the two twisted theta_0's."""
    return _P_TABLE[(k % 3, l % 3)]
