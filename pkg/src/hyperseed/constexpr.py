"""Closed-form constant expressions and their high-precision evaluation.

Expressions are immutable trees over rational literals, the named constants
``pi``, ``ln2`` and ``eulergamma``, ``Γ`` at positive rationals, square roots,
the four binary operations and integer powers. The canonical text form is
prefix notation::

    (div (mul 2 (sqrt 2)) 3)
    (sub (div 1 pi) (gamma 1/4))

Catalog files use the same syntax as *templates*: atoms may also be parameter
names, and two extra operators are folded away before a tree is built,
``(poch alpha s)`` for a Pochhammer symbol with rational index and
``(gamma q)`` with ``q`` a rational sub-expression. See :func:`build_const`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from . import special
from .bigfloat import BigFloat, digits_to_bits
from .errors import DomainError, EvaluationError
from .rational import format_rational, parse_rational

CONSTANT_NAMES = ("pi", "ln2", "eulergamma")
BINARY_OPS = ("add", "sub", "mul", "div")


class ConstExpr:
    __slots__ = ()

    def __str__(self):
        return self.to_text()

    # operator sugar for building trees in code
    def __add__(self, other):
        return BinOp("add", self, _lift(other))

    def __radd__(self, other):
        return BinOp("add", _lift(other), self)

    def __sub__(self, other):
        return BinOp("sub", self, _lift(other))

    def __rsub__(self, other):
        return BinOp("sub", _lift(other), self)

    def __mul__(self, other):
        return BinOp("mul", self, _lift(other))

    def __rmul__(self, other):
        return BinOp("mul", _lift(other), self)

    def __truediv__(self, other):
        return BinOp("div", self, _lift(other))

    def __rtruediv__(self, other):
        return BinOp("div", _lift(other), self)

    def __pow__(self, k):
        return Pow(self, k)


@dataclass(frozen=True, slots=True)
class Lit(ConstExpr):
    value: Fraction

    def __init__(self, value):
        object.__setattr__(self, "value", Fraction(value))

    def to_text(self):
        return format_rational(self.value)


@dataclass(frozen=True, slots=True)
class Const(ConstExpr):
    name: str

    def __post_init__(self):
        if self.name not in CONSTANT_NAMES:
            raise ValueError(f"unknown constant {self.name!r}")

    def to_text(self):
        return self.name


@dataclass(frozen=True, slots=True)
class GammaAt(ConstExpr):
    arg: Fraction

    def __init__(self, arg):
        arg = Fraction(arg)
        if arg <= 0:
            raise DomainError(f"GammaAt needs a positive rational, got {arg}")
        object.__setattr__(self, "arg", arg)

    def to_text(self):
        return f"(gamma {format_rational(self.arg)})"


@dataclass(frozen=True, slots=True)
class Sqrt(ConstExpr):
    arg: ConstExpr

    def to_text(self):
        return f"(sqrt {self.arg.to_text()})"


@dataclass(frozen=True, slots=True)
class BinOp(ConstExpr):
    op: str
    left: ConstExpr
    right: ConstExpr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown operator {self.op!r}")

    def to_text(self):
        return f"({self.op} {self.left.to_text()} {self.right.to_text()})"


@dataclass(frozen=True, slots=True)
class Pow(ConstExpr):
    base: ConstExpr
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise TypeError("Pow exponent must be an int")

    def to_text(self):
        return f"(pow {self.base.to_text()} {self.k})"


PI = Const("pi")
LN2 = Const("ln2")
EULER_GAMMA = Const("eulergamma")


def _lift(x) -> ConstExpr:
    if isinstance(x, ConstExpr):
        return x
    return Lit(Fraction(x))


def div(a, b) -> ConstExpr:
    return BinOp("div", _lift(a), _lift(b))


def as_rational(expr: ConstExpr) -> Fraction | None:
    """The value of a bare literal, else ``None``."""
    return expr.value if isinstance(expr, Lit) else None


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(expr: ConstExpr, prec: int) -> BigFloat:
    """Evaluate at ``prec`` bits of working precision."""
    if isinstance(expr, Lit):
        return BigFloat.from_fraction(expr.value, prec)
    if isinstance(expr, Const):
        return special.constant_bits(expr.name, prec)
    if isinstance(expr, GammaAt):
        return special.gamma_bits(expr.arg, prec)
    if isinstance(expr, Sqrt):
        v = evaluate(expr.arg, prec)
        if v.sign() < 0:
            raise EvaluationError(f"square root of a negative value in {expr}")
        return v.sqrt()
    if isinstance(expr, Pow):
        v = evaluate(expr.base, prec)
        if v.is_zero() and expr.k < 0:
            raise EvaluationError(f"zero raised to a negative power in {expr}")
        return v**expr.k
    if isinstance(expr, BinOp):
        a = evaluate(expr.left, prec)
        b = evaluate(expr.right, prec)
        if expr.op == "add":
            return a + b
        if expr.op == "sub":
            return a - b
        if expr.op == "mul":
            return a * b
        if b.is_zero():
            raise EvaluationError(f"division by zero in {expr}")
        return a / b
    raise TypeError(f"not a ConstExpr: {expr!r}")


def eval_const(expr: ConstExpr, digits: int) -> BigFloat:
    """Value of ``expr`` with error far below ``10**-digits``.

    Works at ``ceil(digits * 3.33) + 64`` bits, so the guard bits absorb any
    cancellation in the tree.
    """
    return evaluate(expr, digits_to_bits(digits))


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def read_sexpr(text: str):
    """Tokenise prefix notation into nested lists of atom strings."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise ValueError("empty expression")
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"unexpected end of expression: {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            out = []
            while pos < len(tokens) and tokens[pos] != ")":
                out.append(parse())
            if pos >= len(tokens):
                raise ValueError(f"unbalanced parentheses: {text!r}")
            pos += 1
            if not out:
                raise ValueError("empty list in expression")
            return out
        if tok == ")":
            raise ValueError(f"unbalanced parentheses: {text!r}")
        return tok

    tree = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in expression: {text!r}")
    return tree


def parse_const(text: str) -> ConstExpr:
    """Parse the canonical prefix form back into a tree (no parameters)."""
    node = build_const(text, {}, fold=False)
    return node


SExpr = Union[str, list]


def build_const(template: str | SExpr, params: Mapping[str, Fraction], fold: bool = True) -> ConstExpr:
    """Instantiate a prefix-notation template with rational parameters.

    With ``fold`` (the default) purely rational sub-expressions collapse to
    literals, ``poch`` and ``gamma`` apply their exact-or-Γ-ratio rules, and
    the result contains no variables. With ``fold=False`` the input must
    already be canonical and is reproduced node for node.
    """
    tree = read_sexpr(template) if isinstance(template, str) else template
    val = _build(tree, params, fold)
    return val if isinstance(val, ConstExpr) else Lit(val)


def _build(node, params, fold):
    if isinstance(node, str):
        if node in CONSTANT_NAMES:
            return Const(node)
        if node in params:
            return Fraction(params[node])
        try:
            q = parse_rational(node)
        except ValueError:
            raise ValueError(f"unknown symbol {node!r}") from None
        return q if fold else Lit(q)
    head, *args = node
    if not isinstance(head, str):
        raise ValueError(f"operator expected, got {head!r}")
    if head in BINARY_OPS:
        if len(args) != 2:
            raise ValueError(f"{head} takes two arguments")
        a, b = (_build(x, params, fold) for x in args)
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            if head == "div" and b == 0:
                raise EvaluationError("division by zero in template")
            return {"add": a + b, "sub": a - b, "mul": a * b}.get(head) if head != "div" else a / b
        return BinOp(head, _lift(a), _lift(b))
    if head == "sqrt":
        (a,) = _one(head, args, params, fold)
        return Sqrt(_lift(a))
    if head == "pow":
        if len(args) != 2:
            raise ValueError("pow takes two arguments")
        base = _build(args[0], params, fold)
        k = _build(args[1], params, True)
        k = k.value if isinstance(k, Lit) else k
        if not isinstance(k, Fraction) or k.denominator != 1:
            raise ValueError("pow exponent must be an integer")
        k = int(k)
        if isinstance(base, Fraction):
            if base == 0 and k < 0:
                raise EvaluationError("zero raised to a negative power")
            return base**k
        return Pow(base, k)
    if head == "gamma":
        (a,) = _one(head, args, params, fold)
        q = _rational_arg(a, head)
        if not fold:
            return GammaAt(q)
        return _unwrap(special.gamma_expr(q))
    if head == "poch":
        if len(args) != 2:
            raise ValueError("poch takes two arguments")
        alpha, s = (_rational_arg(_build(x, params, fold), head) for x in args)
        return _unwrap(special.pochhammer_expr(alpha, s))
    raise ValueError(f"unknown operator {head!r}")


def _unwrap(expr):
    return expr.value if isinstance(expr, Lit) else expr


def _one(head, args, params, fold):
    if len(args) != 1:
        raise ValueError(f"{head} takes one argument")
    return (_build(args[0], params, fold),)


def _rational_arg(a, head) -> Fraction:
    if isinstance(a, Lit):
        return a.value
    if isinstance(a, Fraction):
        return a
    raise ValueError(f"{head} needs a rational argument")
