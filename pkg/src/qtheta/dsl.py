"""A small expression language for univariate q-series.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = "-" unary | power ;
    power    = postfix [ "^" exponent ] ;
    exponent = [ "-" ] INT | "(" [ "-" ] INT [ "/" INT ] ")" ;   (* a/b only on q *)
    postfix  = atom { "." ( "subq" | "twist" ) "(" INT ")" } ;
    atom     = INT | "q" | NAME [ "(" [ args ] ")" ] | "(" expr ")" ;
    args     = [ "-" ] INT { "," [ "-" ] INT } [ ";" NAME { "," NAME } ] ;

Named series: ``poch(a,b[,D]; neg)``, ``theta0``, ``theta1``,
``thetasum(A,B[,alt]; alt|noalt)``, ``trisum``, ``indef(A,B,C,a,b,c; alt)``,
``phi``, ``psi``, ``X``, ``chi``, ``phihyper``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import special as sp
from .catalog import VerificationReport
from .errors import ExpressionSyntaxError, OrderExceeded, QThetaError
from .qseries import QSeries, first_mismatch, lcm

__all__ = ["parse", "render", "evaluate", "eval", "check", "CALLS"]


# ---------------------------------------------------------------------------
# AST

Span = tuple  # (start, end) offsets into the source


@dataclass(frozen=True)
class Num:
    value: int
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Q:
    """q^(num/den)."""

    num: int
    den: int = 1
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple = ()
    flags: tuple = ()
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Div:
    left: "Node"
    right: "Node"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class SubQ:
    base: "Node"
    k: int
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Twist:
    base: "Node"
    j: int
    span: Span = field(default=(0, 0), compare=False, repr=False)


Node = Union[Num, Q, Call, Neg, Add, Sub, Mul, Div, Power, SubQ, Twist]

# name -> (allowed positional arities, allowed flags)
CALLS = {
    "poch": ((2, 3), ("neg",)),
    "theta0": ((0,), ()),
    "theta1": ((0,), ()),
    "thetasum": ((2, 3), ("alt", "noalt")),
    "trisum": ((0,), ()),
    "indef": ((6,), ("alt",)),
    "phi": ((0,), ()),
    "psi": ((0,), ()),
    "X": ((0,), ()),
    "chi": ((0,), ()),
    "phihyper": ((0,), ()),
}


# ---------------------------------------------------------------------------
# lexer


@dataclass
class _Tok:
    kind: str  # INT NAME OP EOF
    text: str
    pos: int


def _lex(src: str) -> list:
    toks = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            toks.append(_Tok("INT", src[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Tok("NAME", src[i:j], i))
            i = j
        elif ch in "+-*/^(),;.":
            toks.append(_Tok("OP", ch, i))
            i += 1
        else:
            line, col = _line_col(src, i)
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("EOF", "", len(src)))
    return toks


def _line_col(src: str, pos: int):
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _lex(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message, expected=()):
        line, col = _line_col(self.src, self.tok.pos)
        raise ExpressionSyntaxError(message, line, col, expected)

    def describe(self):
        return "end of input" if self.tok.kind == "EOF" else repr(self.tok.text)

    def at(self, text) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def take(self, text):
        if not self.at(text):
            self.error(f"unexpected {self.describe()}", [repr(text)])
        self.i += 1

    def end_pos(self):
        return self.toks[self.i - 1].pos + len(self.toks[self.i - 1].text)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "EOF":
            self.error(f"unexpected {self.describe()}", ["'+'", "'-'", "'*'", "'/'", "'^'", "'.'", "end of input"])
        return node

    def expr(self):
        start = self.tok.pos
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            right = self.term()
            node = (Add if op == "+" else Sub)(node, right, span=(start, self.end_pos()))
        return node

    def term(self):
        start = self.tok.pos
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            right = self.unary()
            node = (Mul if op == "*" else Div)(node, right, span=(start, self.end_pos()))
        return node

    def unary(self):
        if self.at("-"):
            start = self.tok.pos
            self.i += 1
            arg = self.unary()
            return Neg(arg, span=(start, self.end_pos()))
        return self.power()

    def power(self):
        start = self.tok.pos
        base = self.postfix()
        if not self.at("^"):
            return base
        self.i += 1
        at = self.i
        num, den = self.exponent()
        span = (start, self.end_pos())
        if isinstance(base, Q):
            x = Fraction(base.num, base.den) * Fraction(num, den)
            return Q(x.numerator, x.denominator, span=span)
        if den != 1:
            self.i = at
            self.error("fractional exponents are only allowed on q")
        return Power(base, num, span=span)

    def signed_int(self) -> int:
        neg = False
        if self.at("-"):
            neg = True
            self.i += 1
        if self.tok.kind != "INT":
            self.error(f"unexpected {self.describe()}", ["integer"])
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    def exponent(self):
        if self.at("("):
            self.i += 1
            num = self.signed_int()
            den = 1
            if self.at("/"):
                self.i += 1
                if self.tok.kind != "INT":
                    self.error(f"unexpected {self.describe()}", ["integer"])
                den = int(self.tok.text)
                self.i += 1
                if den == 0:
                    self.error("zero denominator in exponent")
            self.take(")")
            return num, den
        if self.tok.kind != "INT" and not self.at("-"):
            self.error(f"unexpected {self.describe()} after '^'", ["integer", "'('", "'-'"])
        return self.signed_int(), 1

    def postfix(self):
        start = self.tok.pos
        node = self.atom()
        while self.at("."):
            self.i += 1
            if self.tok.kind != "NAME" or self.tok.text not in ("subq", "twist"):
                self.error(f"unexpected {self.describe()} after '.'", ["subq", "twist"])
            kind = self.tok.text
            self.i += 1
            self.take("(")
            v = self.signed_int()
            self.take(")")
            span = (start, self.end_pos())
            node = SubQ(node, v, span=span) if kind == "subq" else Twist(node, v, span=span)
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "INT":
            self.i += 1
            return Num(int(tok.text), span=(tok.pos, tok.pos + len(tok.text)))
        if tok.kind == "NAME":
            self.i += 1
            if tok.text == "q":
                return Q(1, 1, span=(tok.pos, tok.pos + 1))
            if tok.text not in CALLS:
                self.i -= 1
                self.error(f"unknown name {tok.text!r}", ["q"] + sorted(CALLS))
            args, flags = (), ()
            if self.at("("):
                self.i += 1
                args, flags = self.arguments()
                self.take(")")
            arities, allowed = CALLS[tok.text]
            if len(args) not in arities:
                self.i -= 1
                self.error(f"{tok.text} takes {' or '.join(map(str, arities))} arguments, got {len(args)}")
            bad = [f for f in flags if f not in allowed]
            if bad:
                self.i -= 1
                self.error(f"{tok.text} does not accept flag {bad[0]!r}", [repr(a) for a in allowed])
            return Call(tok.text, args, flags, span=(tok.pos, self.end_pos()))
        if self.at("("):
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        self.error(f"unexpected {self.describe()}", ["integer", "q", "name", "'('", "'-'"])

    def arguments(self):
        args = []
        flags = []
        if not self.at(")") and not self.at(";"):
            args.append(self.signed_int())
            while self.at(","):
                self.i += 1
                args.append(self.signed_int())
        if self.at(";"):
            self.i += 1
            while True:
                if self.tok.kind != "NAME":
                    self.error(f"unexpected {self.describe()}", ["flag name"])
                flags.append(self.tok.text)
                self.i += 1
                if not self.at(","):
                    break
                self.i += 1
        return tuple(args), tuple(flags)


def parse(source: str) -> Node:
    """Parse an expression; raises ExpressionSyntaxError (a SyntaxError)."""
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# canonical rendering (fully parenthesised compound subterms)


def render(node: Node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Q):
        if node.den == 1 and node.num == 1:
            return "q"
        if node.den == 1 and node.num >= 0:
            return f"q^{node.num}"
        return f"q^({node.num}/{node.den})" if node.den != 1 else f"q^({node.num})"
    if isinstance(node, Call):
        if not node.args and not node.flags:
            return node.name
        inner = ",".join(map(str, node.args))
        if node.flags:
            inner += "; " + ",".join(node.flags)
        return f"{node.name}({inner})"
    if isinstance(node, Neg):
        return f"-{_wrap(node.arg)}"
    if isinstance(node, Power):
        e = str(node.exponent) if node.exponent >= 0 else f"({node.exponent})"
        return f"{_wrap(node.base)}^{e}"
    if isinstance(node, SubQ):
        return f"{_wrap(node.base)}.subq({node.k})"
    if isinstance(node, Twist):
        return f"{_wrap(node.base)}.twist({node.j})"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
    return f"{_wrap(node.left)} {op} {_wrap(node.right)}"


def _wrap(node: Node) -> str:
    text = render(node)
    if isinstance(node, (Call, Num)) or (isinstance(node, Q) and (node.num, node.den) == (1, 1)):
        return text
    return f"({text})"


# ---------------------------------------------------------------------------
# evaluation


def _ceil_keys(order, den) -> int:
    return math.ceil(Fraction(order) * den)


def _exact(c, num, den, order) -> QSeries:
    """The exact polynomial c*q^(num/den), stored through ``order``."""
    top = _ceil_keys(order, den)
    return QSeries({num: c} if num <= top and c else {}, den, top)


def _call(node: Call, order) -> QSeries:
    a = node.args
    name = node.name
    if name == "poch":
        D = a[2] if len(a) == 3 else 1
        if D <= 0:
            raise ValueError("poch denominator must be positive")
        return sp.pochhammer(a[0], a[1], D, order, negate="neg" in node.flags)
    if name == "thetasum":
        alt = bool(a[2]) if len(a) == 3 else True
        if "noalt" in node.flags:
            alt = False
        return sp.thetasum(a[0], a[1], order, alt=alt)
    if name == "indef":
        spec = sp.IndefThetaSpec(*a, alternating="alt" in node.flags)
        return sp.indefinite_theta(spec, order)
    table = {
        "theta0": sp.theta0,
        "theta1": sp.theta1,
        "trisum": sp.trisum,
        "phi": sp.mock_phi,
        "psi": sp.mock_psi,
        "X": sp.mock_X,
        "chi": sp.mock_chi,
        "phihyper": sp.mock_phi_hyper,
    }
    return table[name](order)


_PADS = (0, 2, 6, 14, 30, 62)


def _certified(build, order):
    for pad in _PADS:
        out = build(order + pad)
        if out.order_q >= order:
            return out
    raise OrderExceeded(f"could not certify q^{order} after padding by {_PADS[-1]}")


def _ev(node: Node, order) -> QSeries:
    try:
        return _ev_inner(node, order)
    except (QThetaError, ValueError) as exc:
        if getattr(exc, "span", None) is None:
            exc.span = node.span
        raise


def _ev_inner(node: Node, order) -> QSeries:
    if isinstance(node, Num):
        return _exact(node.value, 0, 1, order)
    if isinstance(node, Q):
        return _exact(1, node.num, node.den, order)
    if isinstance(node, Call):
        return _call(node, order)
    if isinstance(node, Neg):
        return -_ev(node.arg, order)
    if isinstance(node, Add):
        return _ev(node.left, order) + _ev(node.right, order)
    if isinstance(node, Sub):
        return _ev(node.left, order) - _ev(node.right, order)
    if isinstance(node, Mul):
        return _certified(lambda o: _ev(node.left, o) * _ev(node.right, o), order)
    if isinstance(node, Div):
        return _certified(lambda o: _ev(node.left, o) / _ev(node.right, o), order)
    if isinstance(node, Power):
        n = node.exponent
        if n == 0:
            return _exact(1, 0, 1, order)
        if n > 0:
            return _certified(lambda o: _ev(node.base, o) ** n, order)
        return _certified(lambda o: _ev(node.base, o).invert() ** (-n), order)
    if isinstance(node, SubQ):
        if node.k <= 0:
            raise ValueError("subq needs a positive integer")
        return _certified(lambda o: _ev(node.base, Fraction(o) / node.k).subst_power(node.k), order)
    if isinstance(node, Twist):
        return _certified(lambda o: _ev(node.base, 3 * Fraction(o)).twist(node.j), order)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(expr, order) -> QSeries:
    """Evaluate an AST or source text, certified through ``q^order``.

    Engine errors keep their type and gain a ``span`` attribute plus the
    offending subexpression in the message.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    src = expr if isinstance(expr, str) else None
    node = parse(expr) if src is not None else expr
    try:
        out = _ev(node, order)
    except (QThetaError, ValueError) as exc:
        span = getattr(exc, "span", None)
        if span is not None and not getattr(exc, "_located", False):
            piece = src[span[0]:span[1]] if src is not None else render(node)
            exc.args = (f"{exc} (in `{piece}` at offset {span[0]})",) + exc.args[1:]
            exc._located = True
        raise
    k = math.floor(Fraction(order) * out.den)
    return out.truncate(k) if out.order > k else out


eval = evaluate  # noqa: A001  (the operation is called eval in the docs)


def check(lhs_src: str, rhs_src: str, order) -> VerificationReport:
    """Evaluate both expressions and compare them exactly through ``q^order``."""
    import time

    t0 = time.perf_counter()
    L = evaluate(lhs_src, order)
    R = evaluate(rhs_src, order)
    den = lcm(L.den, R.den)
    mm = first_mismatch(L, R, math.floor(Fraction(order) * den), den)
    ms = (time.perf_counter() - t0) * 1000
    return VerificationReport(f"{lhs_src} = {rhs_src}", "pass" if mm is None else "fail", order, mm, ms)
