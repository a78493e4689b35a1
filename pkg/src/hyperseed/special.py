"""Exact combinatorial sequences and high-precision transcendental building blocks.

Constants are computed from exact-rational series: π by a Machin formula, ln 2
by a three-term atanh formula (both with binary splitting), γ by
Euler–Maclaurin on ``H_N - ln N``. ln Γ and ψ at positive rationals shift the
argument upward exactly, then sum the Stirling series with its first-omitted
term as a rigorous remainder bound.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bigfloat import BigFloat, digits_to_bits
from .errors import DomainError

# ---------------------------------------------------------------------------
# exact sequences
# ---------------------------------------------------------------------------


def pochhammer(alpha, n: int) -> Fraction:
    """Rising factorial ``(alpha)_n = alpha (alpha+1) ... (alpha+n-1)``."""
    if n < 0:
        raise ValueError("pochhammer index must be nonnegative")
    alpha = Fraction(alpha)
    num, den = 1, 1
    p, q = alpha.numerator, alpha.denominator
    for j in range(n):
        num *= p + j * q
        if num == 0:
            return Fraction(0)
        den *= q
    return Fraction(num, den)


def central_binomial(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.comb(2 * n, n)


@dataclass(frozen=True)
class HarmonicTriple:
    h: Fraction  # H_n
    o: Fraction  # O_n = 1 + 1/3 + ... + 1/(2n-1)
    h_alt: Fraction  # H'_n = 1 - 1/2 + ... + (-1)^(n+1)/n


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


def odd_harmonic(n: int) -> Fraction:
    return sum((Fraction(1, 2 * j - 1) for j in range(1, n + 1)), Fraction(0))


def alternating_harmonic(n: int) -> Fraction:
    return sum((Fraction((-1) ** (j + 1), j) for j in range(1, n + 1)), Fraction(0))


def harmonic_triple(n: int) -> HarmonicTriple:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return HarmonicTriple(harmonic(n), odd_harmonic(n), alternating_harmonic(n))


_bernoulli_lock = threading.Lock()
_bernoulli_cache: list[Fraction] = [Fraction(1)]


def bernoulli(m: int) -> Fraction:
    """Bernoulli number ``B_m`` (convention ``B_1 = -1/2``)."""
    with _bernoulli_lock:
        cache = _bernoulli_cache
        while len(cache) <= m:
            k = len(cache)
            acc = sum(math.comb(k + 1, j) * cache[j] for j in range(k))
            cache.append(-acc / (k + 1))
        return cache[m]


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def _bsplit(n1, n2, q2, sign, b):
    # Returns (P, Q, B, T) over terms n1..n2-1 of sum sign^k / (b(k) q2^k).
    if n2 - n1 == 1:
        p = 1 if n1 == 0 else sign
        q = 1 if n1 == 0 else q2
        return p, q, b(n1), p
    m = (n1 + n2) // 2
    pl, ql, bl, tl = _bsplit(n1, m, q2, sign, b)
    pr, qr, br, tr = _bsplit(m, n2, q2, sign, b)
    return pl * pr, ql * qr, bl * br, br * qr * tl + bl * pl * tr


def _arc_inverse(x: int, bits: int, hyperbolic: bool) -> int:
    """Fixed-point ``atan(1/x)`` (or ``atanh(1/x)``) scaled by ``2**bits``."""
    terms = bits // (2 * max(1, int(math.log2(x)))) + 2
    _, q, b, t = _bsplit(0, terms, x * x, 1 if hyperbolic else -1, lambda k: 2 * k + 1)
    return (t << bits) // (b * q * x)


@lru_cache(maxsize=None)
def _pi_bits(prec: int) -> BigFloat:
    w = prec + 20
    fixed = 16 * _arc_inverse(5, w, False) - 4 * _arc_inverse(239, w, False)
    return BigFloat.from_man_exp(fixed, -w, prec)


@lru_cache(maxsize=None)
def _ln2_bits(prec: int) -> BigFloat:
    w = prec + 20
    fixed = (
        18 * _arc_inverse(26, w, True)
        - 2 * _arc_inverse(4801, w, True)
        + 8 * _arc_inverse(8749, w, True)
    )
    return BigFloat.from_man_exp(fixed, -w, prec)


def _pow2_at_least(n: int) -> int:
    return 1 << max(4, (n - 1).bit_length())


@lru_cache(maxsize=None)
def _euler_gamma_bits(prec: int) -> BigFloat:
    w = prec + 24
    big_n = _pow2_at_least(max(16, w // 4))
    log2_n = big_n.bit_length() - 1
    tol = Fraction(1, 2 ** (w + 4))
    acc = harmonic(big_n) - Fraction(1, 2 * big_n)
    prev = None
    k = 1
    while True:
        term = bernoulli(2 * k) / (2 * k * Fraction(big_n) ** (2 * k))
        if prev is not None and abs(term) > abs(prev):
            raise ArithmeticError("Euler-Maclaurin terms stopped decreasing")
        if abs(term) < tol:
            # |remainder| <= |first omitted term| < tol
            break
        acc += term
        prev = term
        k += 1
    val = BigFloat.from_fraction(acc, w) - log2_n * _ln2_bits(w)
    return val.with_prec(prec)


_CONSTANTS = {"pi": _pi_bits, "ln2": _ln2_bits, "eulergamma": _euler_gamma_bits}
_CONSTANT_ALIASES = {"pi": "pi", "ln2": "ln2", "eulergamma": "eulergamma", "euler": "eulergamma", "gamma_e": "eulergamma"}


def constant_bits(name: str, prec: int) -> BigFloat:
    try:
        key = _CONSTANT_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown constant {name!r}") from None
    return _CONSTANTS[key](prec)


def constant(name: str, digits: int) -> BigFloat:
    """One of ``Pi``, ``Ln2``, ``EulerGamma`` with absolute error below ``10**-digits``."""
    return constant_bits(name, digits_to_bits(digits))


# ---------------------------------------------------------------------------
# ln Γ, Γ, ψ at positive rationals
# ---------------------------------------------------------------------------


def _shift_threshold(prec: int) -> int:
    # argument >= max(10, 0.4 * digits); prec/4 exceeds 0.4*digits for any digits
    return max(10, -(-prec // 4))


def _shift(q: Fraction, prec: int) -> tuple[Fraction, int]:
    if q <= 0:
        raise DomainError(f"argument must be a positive rational, got {q}")
    s = max(0, math.ceil(_shift_threshold(prec) - q))
    return q + s, s


def _stirling_terms(x: Fraction, w: int, kind: str) -> Fraction:
    """Sum of the asymptotic correction terms, stopped at the first term below 2**-w."""
    tol = Fraction(1, 2**w)
    acc = Fraction(0)
    prev = None
    k = 1
    while True:
        b = bernoulli(2 * k)
        if kind == "lngamma":
            term = b / (2 * k * (2 * k - 1) * x ** (2 * k - 1))
        else:
            term = b / (2 * k * x ** (2 * k))
        if prev is not None and abs(term) >= abs(prev):
            raise ArithmeticError("Stirling series diverged before reaching the target")
        if abs(term) < tol:
            return acc
        acc += term
        prev = term
        k += 1


@lru_cache(maxsize=4096)
def _lngamma_bits(q: Fraction, prec: int) -> BigFloat:
    x, s = _shift(q, prec)
    mag = max(1, math.ceil(float(x) * math.log(float(x)))).bit_length()
    w = prec + 16 + mag
    prod = Fraction(1)
    for j in range(s):
        prod *= q + j
    xf = BigFloat.from_fraction(x, w)
    two_pi = 2 * _pi_bits(w)
    val = (xf - Fraction(1, 2)) * xf.log() - xf + two_pi.log() / 2
    val = val + BigFloat.from_fraction(_stirling_terms(x, w, "lngamma"), w)
    if s:
        val = val - BigFloat.from_fraction(prod, w).log()
    return val.with_prec(prec)


@lru_cache(maxsize=4096)
def _digamma_bits(q: Fraction, prec: int) -> BigFloat:
    x, s = _shift(q, prec)
    w = prec + 16 + max(1, math.ceil(math.log2(max(2.0, math.log(float(x))))))
    rational = -Fraction(1, 2) / x - _stirling_terms(x, w, "digamma")
    rational -= sum((1 / (q + j) for j in range(s)), Fraction(0))
    val = BigFloat.from_fraction(x, w).log() + BigFloat.from_fraction(rational, w)
    return val.with_prec(prec)


def _as_positive(q) -> Fraction:
    q = Fraction(q)
    if q <= 0:
        raise DomainError(f"argument must be a positive rational, got {q}")
    return q


def lngamma_bits(q, prec: int) -> BigFloat:
    return _lngamma_bits(_as_positive(q), prec)


def digamma_bits(q, prec: int) -> BigFloat:
    return _digamma_bits(_as_positive(q), prec)


@lru_cache(maxsize=4096)
def _gamma_bits(q: Fraction, prec: int) -> BigFloat:
    if q.denominator == 1:
        return BigFloat.from_int(math.factorial(q.numerator - 1), prec)
    w = prec + 16
    return _lngamma_bits(q, w).exp().with_prec(prec)


def gamma_bits(q, prec: int) -> BigFloat:
    return _gamma_bits(_as_positive(q), prec)


def lngamma_rational(q, digits: int) -> BigFloat:
    """``ln Γ(q)`` for rational ``q > 0`` with absolute error below ``10**-digits``."""
    return lngamma_bits(q, digits_to_bits(digits))


def gamma_rational(q, digits: int) -> BigFloat:
    """``Γ(q)`` for rational ``q > 0`` with relative error below ``10**-digits``."""
    return gamma_bits(q, digits_to_bits(digits))


def digamma_rational(q, digits: int) -> BigFloat:
    """``ψ(q)`` for rational ``q > 0`` with absolute error below ``10**-digits``."""
    return digamma_bits(q, digits_to_bits(digits))


# ---------------------------------------------------------------------------
# closed-form builders for Pochhammer symbols with rational index
# ---------------------------------------------------------------------------


def pochhammer_ratio_gamma(alpha, s):
    """``(alpha)_s = Γ(alpha+s)/Γ(alpha)`` as a closed-form expression.

    Both gamma arguments must be positive.
    """
    from .constexpr import GammaAt, Lit, div

    alpha, s = Fraction(alpha), Fraction(s)
    if alpha <= 0 or alpha + s <= 0:
        raise DomainError(f"gamma arguments must be positive: {alpha}, {alpha + s}")
    if s == 0:
        return Lit(1)
    return div(GammaAt(alpha + s), GammaAt(alpha))


def gamma_expr(q):
    """Closed form of ``Γ(q)`` for any rational that is not a pole.

    Positive integers fold to factorials; negative non-integers are shifted
    up with an exact Pochhammer factor so every ``GammaAt`` argument stays
    positive.
    """
    from .constexpr import GammaAt, Lit, div

    q = Fraction(q)
    if q.denominator == 1:
        if q <= 0:
            raise DomainError(f"Γ has a pole at {q}")
        return Lit(math.factorial(q.numerator - 1))
    if q > 0:
        return GammaAt(q)
    m = math.ceil(-q)
    return div(GammaAt(q + m), Lit(pochhammer(q, m)))


def pochhammer_expr(alpha, s):
    """``(alpha)_s`` for rational ``alpha`` and ``s``.

    Integer ``s`` gives an exact rational literal. Otherwise the Γ ratio is
    built with ``1/Γ(pole) = 0``; a pole in the numerator is a domain error.
    """
    from .constexpr import Lit, div

    alpha, s = Fraction(alpha), Fraction(s)
    if s.denominator == 1:
        if s >= 0:
            return Lit(pochhammer(alpha, int(s)))
        m = int(-s)
        denom = pochhammer(alpha - m, m)
        if denom == 0:
            raise DomainError(f"({alpha})_{s} has a pole")
        return Lit(1 / denom)
    top = alpha + s
    if top.denominator == 1 and top <= 0:
        raise DomainError(f"({alpha})_{s} has a pole: Γ({top})")
    if alpha.denominator == 1 and alpha <= 0:
        return Lit(0)
    return div(gamma_expr(top), gamma_expr(alpha))
