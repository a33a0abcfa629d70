"""Mini-language for the one-variable arbitrary functions of the solution
families (the zeta_i, F, G, H, K, P, Q slots).

Grammar (standard precedence, ^ binds tighter than unary minus):

    expr    :=  term (('+'|'-') term)*
    term    :=  unary (('*'|'/') unary)*
    unary   :=  '-' unary | power
    power   :=  atom ('^' unary)?            -- right associative
    atom    :=  NUMBER | 't' | FUNC '(' expr ')' | 'dn' '(' expr ',' NUMBER ')'
              | '(' expr ')'

The single variable is always named ``t``; solution families bind it to
xi, eta or tau as documented per slot.  ``dn(t, m)`` is the Jacobi dn
function with literal modulus m in [0, 1], evaluated by the descending
arithmetic-geometric-mean recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import EvalError, ParseError, UnsupportedNode

__all__ = ["Expr", "FuncSlot", "parse", "evaluate", "differentiate",
           "to_text", "jacobi_dn"]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass  # always the variable t


@dataclass(frozen=True)
class Unary:
    op: str  # '-'
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str  # sin cos tan exp ln sqrt atan
    arg: "Expr"


@dataclass(frozen=True)
class Dn:
    arg: "Expr"
    modulus: float


Expr = Union[Num, Var, Unary, Binary, Call, Dn]

_FUNCS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "atan")


# ---------------------------------------------------------------------------
# Jacobi dn by AGM
# ---------------------------------------------------------------------------

def jacobi_dn(u: float, m: float) -> float:
    """dn(u, m) with modulus m (the paper's rho), via the AGM recursion.

    Conventions: dn(u, 0) = 1, dn(u, 1) = sech u; for 0 <= m < 1 the value
    lies in [sqrt(1 - m^2), 1].
    """
    if not 0.0 <= m <= 1.0:
        raise EvalError(f"dn modulus {m} outside [0, 1]")
    if m == 0.0:
        return 1.0
    if m == 1.0:
        return 1.0 / math.cosh(u)
    a = [1.0]
    b = [math.sqrt(1.0 - m * m)]
    c = [m]
    while abs(c[-1]) > 1e-15:
        an = 0.5 * (a[-1] + b[-1])
        bn = math.sqrt(a[-1] * b[-1])
        cn = 0.5 * (a[-1] - b[-1])
        a.append(an)
        b.append(bn)
        c.append(cn)
        if len(a) > 64:
            break
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    phis = [phi]
    for i in range(n, 0, -1):
        s = c[i] / a[i] * math.sin(phis[-1])
        s = min(1.0, max(-1.0, s))
        phis.append(0.5 * (phis[-1] + math.asin(s)))
    phi0 = phis[-1]
    phi1 = phis[-2] if len(phis) >= 2 else phi0
    denom = math.cos(phi1 - phi0)
    if denom == 0.0:
        raise EvalError("dn AGM recursion degenerated")
    return math.cos(phi0) / denom


# ---------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# ---------------------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.take(ch):
            raise ParseError(f"unexpected {self.peek()!r}", self.pos, (ch,))

    def number(self) -> float:
        self.skip_ws()
        start = self.pos
        t = self.text
        while self.pos < len(t) and (t[self.pos].isdigit() or t[self.pos] == "."):
            self.pos += 1
        if self.pos < len(t) and t[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < len(t) and t[self.pos] in "+-":
                self.pos += 1
            if self.pos < len(t) and t[self.pos].isdigit():
                while self.pos < len(t) and t[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark  # not an exponent after all
        if self.pos == start:
            raise ParseError("expected number", start, ("number",))
        try:
            return float(t[start:self.pos])
        except ValueError:
            raise ParseError(f"bad number {t[start:self.pos]!r}", start, ("number",)) from None

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        t = self.text
        while self.pos < len(t) and (t[self.pos].isalnum() or t[self.pos] == "_"):
            self.pos += 1
        return t[start:self.pos]


def parse(text: str) -> Expr:
    sc = _Scanner(text)
    e = _expr(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError(f"trailing input {sc.text[sc.pos:]!r}", sc.pos, ("end of input",))
    return e


def _expr(sc: _Scanner) -> Expr:
    e = _term(sc)
    while True:
        ch = sc.peek()
        if ch and ch in "+-":
            sc.pos += 1
            e = Binary(ch, e, _term(sc))
        else:
            return e


def _term(sc: _Scanner) -> Expr:
    e = _unary(sc)
    while True:
        ch = sc.peek()
        if ch and ch in "*/":
            sc.pos += 1
            e = Binary(ch, e, _unary(sc))
        else:
            return e


def _unary(sc: _Scanner) -> Expr:
    if sc.take("-"):
        return Unary("-", _unary(sc))
    return _power(sc)


def _power(sc: _Scanner) -> Expr:
    base = _atom(sc)
    if sc.take("^"):
        return Binary("^", base, _unary(sc))  # right associative
    return base


def _atom(sc: _Scanner) -> Expr:
    ch = sc.peek()
    if ch == "(":
        sc.pos += 1
        e = _expr(sc)
        sc.expect(")")
        return e
    if ch.isdigit() or ch == ".":
        return Num(sc.number())
    if ch.isalpha():
        at = sc.pos
        name = sc.ident()
        if name == "t":
            return Var()
        if name == "pi":
            return Num(math.pi)
        if name == "e":
            return Num(math.e)
        if name == "dn":
            sc.expect("(")
            arg = _expr(sc)
            sc.expect(",")
            neg = sc.take("-")
            m = sc.number()
            sc.expect(")")
            return Dn(arg, -m if neg else m)
        if name in _FUNCS:
            sc.expect("(")
            arg = _expr(sc)
            sc.expect(")")
            return Call(name, arg)
        raise ParseError(f"unknown name {name!r}", at, _FUNCS + ("t", "dn"))
    raise ParseError(f"unexpected {ch!r}", sc.pos,
                     ("number", "t", "function", "(", "-"))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(e: Expr, t: float) -> float:
    v = _eval(e, t)
    if not math.isfinite(v):
        raise EvalError(f"expression evaluated to {v} at t={t}")
    return v


def _eval(e: Expr, t: float) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Unary):
        return -_eval(e.arg, t)
    if isinstance(e, Binary):
        a = _eval(e.left, t)
        b = _eval(e.right, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0.0:
                raise EvalError(f"division by zero at t={t}")
            return a / b
        if e.op == "^":
            if a < 0.0 and b != round(b):
                raise EvalError(f"negative base {a} with non-integer exponent {b}")
            if a == 0.0 and b < 0.0:
                raise EvalError("zero base with negative exponent")
            try:
                return a ** b
            except OverflowError:
                raise EvalError(f"overflow in {a}^{b}") from None
        raise AssertionError(e.op)
    if isinstance(e, Call):
        a = _eval(e.arg, t)
        if e.func == "ln":
            if a <= 0.0:
                raise EvalError(f"ln of non-positive value {a}")
            return math.log(a)
        if e.func == "sqrt":
            if a < 0.0:
                raise EvalError(f"sqrt of negative value {a}")
            return math.sqrt(a)
        if e.func == "exp":
            try:
                return math.exp(a)
            except OverflowError:
                raise EvalError(f"overflow in exp({a})") from None
        if e.func == "tan":
            return math.tan(a)
        return getattr(math, e.func)(a)
    if isinstance(e, Dn):
        return jacobi_dn(_eval(e.arg, t), e.modulus)
    raise AssertionError(type(e))


# ---------------------------------------------------------------------------
# Symbolic differentiation (dn excluded; callers fall back to FD)
# ---------------------------------------------------------------------------

def differentiate(e: Expr) -> Expr:
    return _fold(_diff(e))


def _diff(e: Expr) -> Expr:
    if isinstance(e, Num):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0)
    if isinstance(e, Unary):
        return Unary("-", _diff(e.arg))
    if isinstance(e, Binary):
        u, v = e.left, e.right
        du, dv = _diff(u), _diff(v)
        if e.op in "+-":
            return Binary(e.op, du, dv)
        if e.op == "*":
            return Binary("+", Binary("*", du, v), Binary("*", u, dv))
        if e.op == "/":
            num = Binary("-", Binary("*", du, v), Binary("*", u, dv))
            return Binary("/", num, Binary("^", v, Num(2.0)))
        if e.op == "^":
            if isinstance(v, Num):
                # d/dt u^c = c * u^(c-1) * u'
                return Binary("*", Binary("*", v, Binary("^", u, Num(v.value - 1.0))), du)
            # general: u^v * (v' ln u + v u'/u)
            term = Binary("+",
                          Binary("*", dv, Call("ln", u)),
                          Binary("/", Binary("*", v, du), u))
            return Binary("*", Binary("^", u, v), term)
        raise AssertionError(e.op)
    if isinstance(e, Call):
        inner = _diff(e.arg)
        a = e.arg
        if e.func == "sin":
            outer: Expr = Call("cos", a)
        elif e.func == "cos":
            outer = Unary("-", Call("sin", a))
        elif e.func == "tan":
            outer = Binary("/", Num(1.0), Binary("^", Call("cos", a), Num(2.0)))
        elif e.func == "exp":
            outer = Call("exp", a)
        elif e.func == "ln":
            outer = Binary("/", Num(1.0), a)
        elif e.func == "sqrt":
            outer = Binary("/", Num(0.5), Call("sqrt", a))
        elif e.func == "atan":
            outer = Binary("/", Num(1.0), Binary("+", Num(1.0), Binary("^", a, Num(2.0))))
        else:
            raise AssertionError(e.func)
        return Binary("*", outer, inner)
    if isinstance(e, Dn):
        raise UnsupportedNode("dn has no symbolic derivative here; use an FD fallback")
    raise AssertionError(type(e))


def _fold(e: Expr) -> Expr:
    """Constant-fold literal subtrees; keep everything else intact."""
    if isinstance(e, (Num, Var)):
        return e
    if isinstance(e, Unary):
        a = _fold(e.arg)
        if isinstance(a, Num):
            return Num(-a.value)
        return Unary(e.op, a)
    if isinstance(e, Binary):
        a, b = _fold(e.left), _fold(e.right)
        if isinstance(a, Num) and isinstance(b, Num):
            try:
                return Num(_eval(Binary(e.op, a, b), 0.0))
            except EvalError:
                return Binary(e.op, a, b)
        # Cheap identities that the product/chain rules generate constantly.
        if e.op == "*":
            if isinstance(a, Num):
                if a.value == 0.0:
                    return Num(0.0)
                if a.value == 1.0:
                    return b
            if isinstance(b, Num):
                if b.value == 0.0:
                    return Num(0.0)
                if b.value == 1.0:
                    return a
        if e.op == "+":
            if isinstance(a, Num) and a.value == 0.0:
                return b
            if isinstance(b, Num) and b.value == 0.0:
                return a
        if e.op == "-" and isinstance(b, Num) and b.value == 0.0:
            return a
        if e.op == "^" and isinstance(b, Num):
            if b.value == 1.0:
                return a
            if b.value == 0.0:
                return Num(1.0)
        if e.op == "/" and isinstance(b, Num) and b.value == 1.0:
            return a
        return Binary(e.op, a, b)
    if isinstance(e, Call):
        a = _fold(e.arg)
        if isinstance(a, Num):
            try:
                return Num(_eval(Call(e.func, a), 0.0))
            except EvalError:
                return Call(e.func, a)
        return Call(e.func, a)
    if isinstance(e, Dn):
        return Dn(_fold(e.arg), e.modulus)
    raise AssertionError(type(e))


# ---------------------------------------------------------------------------
# Pretty printer (round-trips through parse)
# ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(e: Expr) -> str:
    return _fmt(e, 0)


def _fmt(e: Expr, parent: int) -> str:
    if isinstance(e, Num):
        v = e.value
        s = repr(int(v)) if v == int(v) and abs(v) < 1e16 else repr(v)
        if v < 0:
            return f"({s})" if parent > 0 else s
        return s
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Unary):
        s = "-" + _fmt(e.arg, _PREC["neg"])
        return f"({s})" if parent > _PREC["neg"] else s
    if isinstance(e, Binary):
        p = _PREC[e.op]
        if e.op == "^":
            # Right associative: parenthesize an equal-precedence left child.
            left = _fmt(e.left, p + 1)
            right = _fmt(e.right, p)
        elif e.op in ("-", "/"):
            # Left associative, non-commutative: guard the right child.
            left = _fmt(e.left, p)
            right = _fmt(e.right, p + 1)
        else:
            left = _fmt(e.left, p)
            right = _fmt(e.right, p)
        s = f"{left} {e.op} {right}" if e.op in "+-" else f"{left}{e.op}{right}"
        return f"({s})" if parent > p else s
    if isinstance(e, Call):
        return f"{e.func}({_fmt(e.arg, 0)})"
    if isinstance(e, Dn):
        m = e.modulus
        ms = repr(int(m)) if m == int(m) else repr(m)
        return f"dn({_fmt(e.arg, 0)}, {ms})"
    raise AssertionError(type(e))


# ---------------------------------------------------------------------------
# Function slot with cached derivative
# ---------------------------------------------------------------------------

class FuncSlot:
    """A one-variable function bound into a solution family.

    Carries the parsed expression, its symbolic first and second
    derivatives when they exist, and central-difference fallbacks for
    dn-bearing expressions.
    """

    def __init__(self, text_or_expr: str | Expr):
        self.expr = parse(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
        self.text = to_text(self.expr)
        try:
            self.d1: Expr | None = differentiate(self.expr)
            self.d2: Expr | None = differentiate(self.d1)
        except UnsupportedNode:
            self.d1 = None
            self.d2 = None

    @classmethod
    def zero(cls) -> "FuncSlot":
        return cls(Num(0.0))

    @property
    def symbolic(self) -> bool:
        return self.d1 is not None

    def __call__(self, t: float) -> float:
        return evaluate(self.expr, t)

    def deriv(self, t: float) -> float:
        if self.d1 is not None:
            return evaluate(self.d1, t)
        # 4th-order stencil with a smooth step: the fallback value feeds
        # outer FD residual checks, so its error must vary smoothly in t.
        h = 1e-4 * math.sqrt(1.0 + t * t)
        f = lambda s: evaluate(self.expr, s)
        return (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h)
                - f(t + 2.0 * h)) / (12.0 * h)

    def deriv2(self, t: float) -> float:
        if self.d2 is not None:
            return evaluate(self.d2, t)
        h = 1e-3 * math.sqrt(1.0 + t * t)
        f = lambda s: evaluate(self.expr, s)
        return (-f(t + 2.0 * h) + 16.0 * f(t + h) - 30.0 * f(t)
                + 16.0 * f(t - h) - f(t - 2.0 * h)) / (12.0 * h * h)
