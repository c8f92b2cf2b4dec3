"""Exact q-series arithmetic and an identity verifier for tenth-order mock theta identities."""

from .errors import (
    Divergent,
    ExpressionSyntaxError,
    NonIntegerExponents,
    NotDivisible,
    NotInvertible,
    OrderExceeded,
    QThetaError,
    UnknownIdentity,
    WindowExceeded,
    WindowUnderflow,
    ZeroSeries,
)
from .exactnum import OMEGA, OMEGA2, Eisenstein, div_exact
from .qseries import FirstMismatch, QSeries, first_mismatch
from .laurent import XYPoly

__all__ = [
    "Divergent",
    "ExpressionSyntaxError",
    "NonIntegerExponents",
    "NotDivisible",
    "NotInvertible",
    "OrderExceeded",
    "QThetaError",
    "UnknownIdentity",
    "WindowExceeded",
    "WindowUnderflow",
    "ZeroSeries",
    "OMEGA",
    "OMEGA2",
    "Eisenstein",
    "div_exact",
    "FirstMismatch",
    "QSeries",
    "first_mismatch",
    "XYPoly",
]

__version__ = "0.1.0"
