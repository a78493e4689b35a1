"""Mishev's sequence transform, its inverse, and the 4F3(-1) identity generator.

The forward transform of a sequence ``x`` with parameter ``a`` is::

    L_a(x)_n = sum_{k=0}^{n} (-n)_k (n+a)_k x_k

and ``x`` is recovered from ``y = L_a(x)`` by::

    x_n = 1/(n! (a+1)_n) * sum_{k=0}^{n} [a, 1+a/2, -n; 1, a/2, 1+a+n]_k * y_k

Plugging ``x_l = 1/((1)_l (beta)_l)`` into the inverse, the inner sums
``y_k`` have the closed form ``(-1)^k (1+a-beta)_k / (beta)_k`` (Gauss /
Chu–Vandermonde), and the outer sum becomes a terminating 4F3 at ``-1``.
:func:`derive_identity` packages that as a parametric identity record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .constexpr import ConstExpr, Lit, build_const
from .errors import DomainError, PoleError, UnsupportedFamilyError
from .rational import format_rational, is_nonpositive_integer, parse_rational
from .special import pochhammer

FAMILY_KINDS = (
    "inv-square-factorial",
    "shifted-factorial",
    "half-shift",
    "pochhammer-pair",
    "geometric-pochhammer",
    "explicit",
)


@dataclass(frozen=True)
class TransformParams:
    a: Fraction
    length: int

    def __post_init__(self):
        a = Fraction(self.a)
        object.__setattr__(self, "a", a)
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if a == 0:
            raise PoleError("a = 0 makes the (a/2)_k denominator vanish")
        if is_nonpositive_integer(a):
            raise DomainError(f"a must not be a nonpositive integer, got {a}")


def forward_L(params: TransformParams, x: Sequence[Fraction]) -> list[Fraction]:
    """``y_n = sum_k (-n)_k (n+a)_k x_k`` for ``n = 0 .. length``, exactly."""
    if len(x) < params.length + 1:
        raise ValueError(f"need {params.length + 1} input values, got {len(x)}")
    a = params.a
    out = []
    for n in range(params.length + 1):
        acc = Fraction(0)
        c = Fraction(1)  # (-n)_k (n+a)_k, built incrementally
        for k in range(n + 1):
            acc += c * x[k]
            c *= (k - n) * (n + a + k)
        out.append(acc)
    return out


def _bracket(a: Fraction, n: int, k: int) -> Fraction:
    # [a, 1+a/2, -n; 1, a/2, 1+a+n]_k with (1+a/2)_k/(a/2)_k = (a+2k)/a
    return pochhammer(a, k) * (a + 2 * k) / a * pochhammer(-n, k) / (math.factorial(k) * pochhammer(1 + a + n, k))


def inverse_reconstruct(params: TransformParams, y: Sequence[Fraction]) -> list[Fraction]:
    """Recover ``x`` from ``y = L_a(x)``, exactly."""
    if len(y) < params.length + 1:
        raise ValueError(f"need {params.length + 1} input values, got {len(y)}")
    a = params.a
    out = []
    for n in range(params.length + 1):
        acc = sum((_bracket(a, n, k) * y[k] for k in range(n + 1)), Fraction(0))
        out.append(acc / (math.factorial(n) * pochhammer(a + 1, n)))
    return out


def round_trip(params: TransformParams, x: Sequence[Fraction]) -> list[Fraction]:
    """``inverse_reconstruct(forward_L(x))``; equals ``x[:length+1]`` exactly."""
    return inverse_reconstruct(params, forward_L(params, x))


# ---------------------------------------------------------------------------
# sequence families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceFamily:
    """Input sequences fed to the transform.

    ``half-shift`` is ``1/(l! Γ(l+3/2))``; its values are stored as the
    rational part ``1/(l! (3/2)_l)`` with the constant unit ``1/Γ(3/2)``
    tracked separately in :attr:`unit`.
    """

    kind: str
    b: Fraction | None = None
    y: Fraction | None = None
    values: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown sequence family {self.kind!r}")
        if self.kind == "pochhammer-pair" and self.b is not None:
            b = Fraction(self.b)
            if is_nonpositive_integer(b):
                raise DomainError("b must not be a nonpositive integer")
            object.__setattr__(self, "b", b)

    @property
    def beta(self) -> Fraction | None:
        """The lower parameter ``beta`` with ``x_l = 1/((1)_l (beta)_l)``."""
        return {
            "inv-square-factorial": Fraction(1),
            "shifted-factorial": Fraction(2),
            "half-shift": Fraction(3, 2),
            "pochhammer-pair": self.b,
        }.get(self.kind)

    @property
    def unit(self) -> ConstExpr:
        if self.kind == "half-shift":
            return build_const("(div 2 (sqrt pi))", {})
        return Lit(1)

    def sequence(self, count: int) -> list[Fraction]:
        """Rational parts of ``x_0 .. x_{count-1}``."""
        if self.kind == "explicit":
            if len(self.values) < count:
                raise ValueError("explicit sequence too short")
            return list(self.values[:count])
        if self.kind == "geometric-pochhammer":
            y = Fraction(self.y)
            return [y**l / math.factorial(l) ** 2 for l in range(count)]
        beta = self.beta
        if beta is None:
            raise ValueError("pochhammer-pair needs a numeric b to produce values")
        return [1 / (math.factorial(l) * pochhammer(beta, l)) for l in range(count)]

    def inner_closed_form(self, a, k: int) -> Fraction:
        """Closed form of ``L_a(x)_k`` (rational part): ``(-1)^k (1+a-beta)_k/(beta)_k``."""
        if self.kind in ("explicit", "geometric-pochhammer"):
            raise UnsupportedFamilyError(f"no closed-form inner sum for {self.kind}")
        beta = self.beta
        a = Fraction(a)
        return (-1) ** k * pochhammer(1 + a - beta, k) / pochhammer(beta, k)


# ---------------------------------------------------------------------------
# identity derivation
# ---------------------------------------------------------------------------

_ANCHORS = {
    "inv-square-factorial": "x_l = 1/(l!)^2 in the inverse transform; terminating 4F3(-1) = (a+1)_n/n!",
    "shifted-factorial": "x_l = 1/(l!(l+1)!) in the inverse transform; 4F3(-1) = (a+1)_n/(n+1)!",
    "half-shift": "x_l = 1/(l! (l+1/2)!) in the inverse transform; 4F3(-1) = (a+1)_n sqrt(pi)/(2 (n+1/2)!)",
    "pochhammer-pair": "x_l = 1/((1)_l (b)_l) in the inverse transform; 4F3(-1) = [a+1; b]_n",
}

_RHS = {
    "inv-square-factorial": "(div (poch (add a 1) n) (gamma (add n 1)))",
    "shifted-factorial": "(div (poch (add a 1) n) (gamma (add n 2)))",
    "half-shift": "(div (mul (poch (add a 1) n) (sqrt pi)) (mul 2 (gamma (add n 3/2))))",
    "pochhammer-pair": "(div (poch (add a 1) n) (poch b n))",
}


def derive_identity(family: SequenceFamily, symbolic: bool = True, check_terms: int = 12):
    """Turn a closed-form sequence family into a parametric 4F3(-1) identity.

    The returned record has parameters ``a`` and ``n`` (plus ``b`` for a
    ``pochhammer-pair`` family without a fixed ``b``). With
    ``symbolic=False`` the closed-form inner sums and the inversion are first
    confirmed in exact arithmetic against :func:`forward_L` for
    ``k < check_terms`` at a few sample values of ``a``.
    """
    from .catalog import IdentityRecord

    if family.kind in ("explicit", "geometric-pochhammer"):
        raise UnsupportedFamilyError(
            f"family {family.kind!r} has no closed-form 4F3 evaluation"
        )
    beta = family.beta
    beta_t = "b" if beta is None else f"({format_rational(beta)})"
    names = ["a", "n"] if beta is not None else ["a", "b", "n"]

    if not symbolic:
        _confirm_family(family, check_terms)

    lhs = {
        "upper": ["a", "-n", "1+a/2", f"1+a-{beta_t}"],
        "lower": [beta_t, "a/2", "1+a+n"],
        "argument": "-1",
        "weight": "none",
    }
    rhs = _RHS[family.kind] if family.kind != "pochhammer-pair" or beta is None else (
        f"(div (poch (add a 1) n) (poch {format_rational(beta)} n))"
    )
    suffix = "" if family.kind != "pochhammer-pair" or beta is None else f"[b={format_rational(beta)}]"
    return IdentityRecord(
        id=f"derived-{family.kind}{suffix}",
        lhs=lhs,
        rhs=rhs,
        mode="auto",
        params=tuple(names),
        sweep=(),
        anchor=_ANCHORS[family.kind],
    )


def _confirm_family(family: SequenceFamily, check_terms: int) -> None:
    samples = [Fraction(1, 2), Fraction(2, 3), Fraction(5, 7)]
    fam = family if family.beta is not None else SequenceFamily("pochhammer-pair", b=Fraction(7, 3))
    x = fam.sequence(check_terms)
    for a in samples:
        params = TransformParams(a, check_terms - 1)
        y = forward_L(params, x)
        for k, yk in enumerate(y):
            if yk != fam.inner_closed_form(a, k):
                raise ArithmeticError(f"inner sum mismatch for {fam.kind} at a={a}, k={k}")
        if inverse_reconstruct(params, y) != x:
            raise ArithmeticError(f"inversion mismatch for {fam.kind} at a={a}")


# ---------------------------------------------------------------------------
# sequence files
# ---------------------------------------------------------------------------


def parse_sequence(lines: Iterable[str]) -> list[Fraction]:
    """One rational ``p/q`` (or integer) per line; ``#`` starts a comment."""
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_rational(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out


def read_sequence(path: str | Path) -> list[Fraction]:
    with open(path, encoding="utf-8") as fh:
        return parse_sequence(fh)


def format_sequence(values: Iterable[Fraction]) -> str:
    return "".join(format_rational(v, always_slash=True) + "\n" for v in values)
