"""Exception hierarchy shared by every layer of the engine."""


class QThetaError(Exception):
    """Base class for all engine errors."""


class NotDivisible(QThetaError, ArithmeticError):
    pass


class NotInvertible(QThetaError, ArithmeticError):
    pass


class ZeroSeries(NotInvertible):
    pass


class NonIntegerExponents(QThetaError, ValueError):
    pass


class OrderExceeded(QThetaError, ValueError):
    pass


class Divergent(QThetaError, ValueError):
    pass


class WindowExceeded(QThetaError, ValueError):
    pass


class WindowUnderflow(QThetaError, ValueError):
    pass


class UnknownIdentity(QThetaError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ExpressionSyntaxError(QThetaError, SyntaxError):
    """Parse failure in a series expression, with 1-based ``line``/``col``."""

    def __init__(self, message, line, col, expected=()):
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        text = f"{message} at line {line}, column {col}"
        if self.expected:
            text += "; expected one of: " + ", ".join(sorted(self.expected))
        super().__init__(text)
        self.lineno = line
        self.offset = col

    def __str__(self):
        return self.args[0]
