"""Exact rationals at the boundaries: parsing, formatting, parameter templates.

Rationals are plain :class:`fractions.Fraction` values throughout the package.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Mapping

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``p/q`` or an integer string. Decimal input is rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"bad rational {text!r}: expected p/q or an integer")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"bad rational {text!r}: zero denominator")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction, always_slash: bool = False) -> str:
    if q.denominator == 1 and not always_slash:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div)


def eval_param_expr(text: str | int, env: Mapping[str, Fraction]) -> Fraction:
    """Evaluate a rational template such as ``"1+a/2"`` or ``"n+a+1"``.

    Only integer literals, names bound in ``env``, unary +/- and the four
    arithmetic operators are accepted; everything is exact.
    """
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad parameter expression {text!r}") from exc
    return _eval_node(tree.body, env, text)


def _eval_node(node, env, text) -> Fraction:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ValueError(f"unbound parameter {node.id!r} in {text!r}")
        return Fraction(env[node.id])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, env, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        lhs = _eval_node(node.left, env, text)
        rhs = _eval_node(node.right, env, text)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if rhs == 0:
            raise ZeroDivisionError(f"division by zero in {text!r}")
        return lhs / rhs
    raise ValueError(f"unsupported construct in parameter expression {text!r}")


def is_nonpositive_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q <= 0
