"""Hypergeometric and weighted series: exact terms, exact, direct and accelerated sums.

A :class:`SeriesSpec` describes ``sum_n t_n * w_n * s_n`` where ``t_n`` is the
generalized hypergeometric term ``prod (a_i)_n / prod (b_j)_n * x**n / n!``,
``w_n`` an optional harmonic-type weight and ``s_n`` an optional rational
function of ``n`` given as products of linear factors.

Conditionally convergent (and mildly divergent) alternating series are summed
with the Cohen–Rodriguez Villegas–Zagier Chebyshev scheme. Its error bound is
only proven for totally monotone magnitudes, so accelerated results carry an
empirical two-level error estimate and ``heuristic=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

from .bigfloat import BigFloat, agree_digits, digits_to_bits
from .errors import AccelerationUnreliable, PoleError, UsageError
from .rational import eval_param_expr, format_rational, is_nonpositive_integer, parse_rational
from .special import alternating_harmonic, harmonic, odd_harmonic, pochhammer

WEIGHT_KINDS = ("none", "H_n", "H_2n", "O_n", "Halt_n", "Halt_2n", "2O_n+H_n", "linear")


@dataclass(frozen=True)
class HyperSpec:
    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    argument: Fraction

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(Fraction(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(Fraction(b) for b in self.lower))
        object.__setattr__(self, "argument", Fraction(self.argument))

    def ratio(self, n: int) -> Fraction:
        """``t_{n+1} / t_n``; raises :class:`PoleError` on a vanishing lower shift."""
        den = Fraction(n + 1)
        for b in self.lower:
            den *= b + n
        if den == 0:
            raise PoleError(f"lower parameter shift vanishes at n={n}")
        num = self.argument
        for a in self.upper:
            num *= a + n
        return num / den

    def termination_index(self) -> int | None:
        """Index of the last possibly-nonzero term, or ``None`` if infinite."""
        ms = [int(-a) for a in self.upper if is_nonpositive_integer(a)]
        if self.argument == 0:
            ms.append(0)
        return min(ms) if ms else None

    def pole_index(self) -> int | None:
        ms = [int(-b) for b in self.lower if is_nonpositive_integer(b)]
        return min(ms) if ms else None


@dataclass(frozen=True)
class Weight:
    kind: str = "none"
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight {self.kind!r}")
        object.__setattr__(self, "c0", Fraction(self.c0))
        object.__setattr__(self, "c1", Fraction(self.c1))

    def at(self, n: int) -> Fraction:
        k = self.kind
        if k == "none":
            return Fraction(1)
        if k == "linear":
            return self.c0 + self.c1 * n
        if k == "H_n":
            return harmonic(n)
        if k == "H_2n":
            return harmonic(2 * n)
        if k == "O_n":
            return odd_harmonic(n)
        if k == "Halt_n":
            return alternating_harmonic(n)
        if k == "Halt_2n":
            return alternating_harmonic(2 * n)
        return 2 * odd_harmonic(n) + harmonic(n)

    def increment(self, n: int) -> Fraction:
        """``w_n - w_{n-1}`` for the harmonic kinds (``n >= 1``)."""
        k = self.kind
        if k == "H_n":
            return Fraction(1, n)
        if k == "H_2n":
            return Fraction(1, 2 * n - 1) + Fraction(1, 2 * n)
        if k == "O_n":
            return Fraction(1, 2 * n - 1)
        if k == "Halt_n":
            return Fraction((-1) ** (n + 1), n)
        if k == "Halt_2n":
            return Fraction(1, 2 * n - 1) - Fraction(1, 2 * n)
        if k == "2O_n+H_n":
            return Fraction(2, 2 * n - 1) + Fraction(1, n)
        raise ValueError(f"{k} weight has no harmonic increment")

    def to_json(self):
        if self.kind == "linear":
            return {"linear": [format_rational(self.c0), format_rational(self.c1)]}
        return self.kind


@dataclass(frozen=True)
class TermScale:
    """``const * prod(c0 + c1 n) / prod(d0 + d1 n)``."""

    const: Fraction = Fraction(1)
    num: tuple[tuple[Fraction, Fraction], ...] = ()
    den: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "const", Fraction(self.const))
        object.__setattr__(self, "num", tuple((Fraction(a), Fraction(b)) for a, b in self.num))
        object.__setattr__(self, "den", tuple((Fraction(a), Fraction(b)) for a, b in self.den))

    def at(self, n: int) -> Fraction:
        v = self.const
        for c0, c1 in self.num:
            v *= c0 + c1 * n
        d = Fraction(1)
        for c0, c1 in self.den:
            d *= c0 + c1 * n
        if d == 0:
            raise PoleError(f"term scale denominator vanishes at n={n}")
        return v / d

    def to_json(self):
        pair = lambda f: [format_rational(f[0]), format_rational(f[1])]  # noqa: E731
        out = {"const": format_rational(self.const)}
        if self.num:
            out["num"] = [pair(f) for f in self.num]
        if self.den:
            out["den"] = [pair(f) for f in self.den]
        return out


@dataclass(frozen=True)
class SeriesSpec:
    base: HyperSpec
    weight: Weight = field(default_factory=Weight)
    term_scale: TermScale | None = None

    def terminates(self) -> bool:
        return self.base.termination_index() is not None

    def to_json(self) -> dict:
        out = {
            "upper": [format_rational(a) for a in self.base.upper],
            "lower": [format_rational(b) for b in self.base.lower],
            "argument": format_rational(self.base.argument),
            "weight": self.weight.to_json(),
        }
        if self.term_scale is not None:
            out["term_scale"] = self.term_scale.to_json()
        return out


def hyper(upper, lower, argument, weight: Weight | str = "none", term_scale: TermScale | None = None) -> SeriesSpec:
    """Convenience constructor: ``hyper(["1/2", "1/2"], ["1"], "1/4")``."""
    if isinstance(weight, str):
        weight = Weight(weight)
    return SeriesSpec(
        HyperSpec(tuple(map(parse_rational, upper)), tuple(map(parse_rational, lower)), parse_rational(argument)),
        weight,
        term_scale,
    )


# ---------------------------------------------------------------------------
# JSON (and catalog templates)
# ---------------------------------------------------------------------------


def spec_from_json(obj: Mapping, params: Mapping[str, Fraction] | None = None) -> SeriesSpec:
    """Build a spec from its JSON form.

    With ``params``, every rational field may be an expression in the
    parameters (``"1+a/2"``) and ``term_scale`` factor lists may contain range
    entries ``{"c0": "1-2*j", "c1": "2", "for": ["j", "1", "k"]}``.
    """
    env = dict(params or {})
    val = (lambda s: eval_param_expr(s, env)) if params is not None else parse_rational
    try:
        base = HyperSpec(
            tuple(val(a) for a in obj["upper"]),
            tuple(val(b) for b in obj["lower"]),
            val(obj["argument"]),
        )
    except KeyError as exc:
        raise ValueError(f"series spec missing field {exc}") from None
    w = obj.get("weight", "none")
    if isinstance(w, Mapping):
        c0, c1 = w["linear"]
        weight = Weight("linear", val(c0), val(c1))
    else:
        weight = Weight(w)
    scale = None
    ts = obj.get("term_scale")
    if ts is not None:
        scale = TermScale(
            val(ts.get("const", "1")),
            tuple(_factor_list(ts.get("num", []), val, env)),
            tuple(_factor_list(ts.get("den", []), val, env)),
        )
    return SeriesSpec(base, weight, scale)


def _factor_list(items, val, env) -> Iterator[tuple[Fraction, Fraction]]:
    for item in items:
        if isinstance(item, Mapping):
            var, lo, hi = item["for"]
            lo_v, hi_v = eval_param_expr(lo, env), eval_param_expr(hi, env)
            if lo_v.denominator != 1 or hi_v.denominator != 1:
                raise ValueError("product range bounds must be integers")
            for j in range(int(lo_v), int(hi_v) + 1):
                inner = {**env, var: Fraction(j)}
                yield eval_param_expr(item["c0"], inner), eval_param_expr(item["c1"], inner)
        else:
            c0, c1 = item
            yield val(c0), val(c1)


# ---------------------------------------------------------------------------
# exact terms
# ---------------------------------------------------------------------------


def term_exact(spec: SeriesSpec, n: int) -> Fraction:
    """Exact ``n``-th term from the closed product formula."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    base = spec.base
    num = base.argument**n / math.factorial(n)
    for a in base.upper:
        num *= pochhammer(a, n)
    if num == 0:
        return Fraction(0)
    den = Fraction(1)
    for b in base.lower:
        den *= pochhammer(b, n)
    if den == 0:
        raise PoleError(f"lower parameter reaches zero before term {n}")
    t = num / den * spec.weight.at(n)
    if spec.term_scale is not None and t != 0:
        t *= spec.term_scale.at(n)
    return t


def iter_terms_exact(spec: SeriesSpec, count: int | None = None) -> Iterator[Fraction]:
    """Terms ``0, 1, ...`` via the hypergeometric ratio recurrence."""
    base, weight, scale = spec.base, spec.weight, spec.term_scale
    t = Fraction(1)
    w = weight.at(0)
    n = 0
    while count is None or n < count:
        if n > 0:
            if t != 0:
                # a vanishing numerator terminates before any lower pole
                killed = base.argument == 0 or any(a + n - 1 == 0 for a in base.upper)
                t = Fraction(0) if killed else t * base.ratio(n - 1)
            if weight.kind == "linear":
                w = weight.at(n)
            elif weight.kind != "none":
                w += weight.increment(n)
        v = t * w
        if scale is not None and v != 0:
            v *= scale.at(n)
        yield v
        n += 1


def terms_exact(spec: SeriesSpec, count: int) -> list[Fraction]:
    return list(iter_terms_exact(spec, count))


# ---------------------------------------------------------------------------
# sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SumResult:
    value: BigFloat
    error_bound: BigFloat
    terms_used: int
    method: str  # "exact" | "direct" | "accelerated"
    heuristic: bool = False
    budget_exceeded: bool = False
    exact: Fraction | None = None


def sum_terminating_exact(spec: SeriesSpec) -> Fraction:
    """Exact value of a terminating series."""
    m = spec.base.termination_index()
    if m is None:
        raise UsageError("series does not terminate: no upper parameter is a nonpositive integer")
    return sum(iter_terms_exact(spec, m + 1), Fraction(0))


def _exact_result(spec: SeriesSpec, prec: int) -> SumResult:
    m = spec.base.termination_index()
    v = sum_terminating_exact(spec)
    return SumResult(BigFloat.from_fraction(v, prec), BigFloat.zero(prec), m + 1, "exact", exact=v)


def _int_linear(c0: Fraction, c1: Fraction) -> tuple[int, int, int]:
    # c0 + c1 n == (u + v n) / w with integers
    w = c0.denominator * c1.denominator // math.gcd(c0.denominator, c1.denominator)
    return int(c0 * w), int(c1 * w), w


def _ratio_sup(base: HyperSpec, n: int) -> float | None:
    """Upper bound for ``|t_{m+1}/t_m|`` over all ``m >= n`` (``None`` if unbounded)."""
    lows = list(base.lower) + [Fraction(1)]
    ups = list(base.upper)
    if len(ups) > len(lows):
        return None
    if any(abs(float(c)) + 1 >= n for c in ups + lows):
        return None
    r = abs(float(base.argument))
    for i, b in enumerate(lows):
        if i < len(ups):
            r *= max(abs(float(ups[i] + n)) / float(b + n), 1.0)
        else:
            r /= float(b + n)
    return r


def _weight_growth(spec: SeriesSpec, n: int) -> float | None:
    """Bound on ``|w_{m+1} s_{m+1}| / |w_m s_m|`` over ``m >= n``."""
    g = 1.0
    k = spec.weight.kind
    if k in ("H_n", "O_n", "2O_n+H_n", "H_2n", "Halt_2n"):
        g *= 1 + 2.0 / (n + 1)
    elif k == "Halt_n":
        g *= 1 + 2.0 / (n + 1)
    elif k == "linear":
        c0, c1 = spec.weight.c0, spec.weight.c1
        base = abs(float(c0 + c1 * n))
        if c1 != 0 and (base == 0 or -c0 / c1 >= n):
            return None
        g *= 1 + abs(float(c1)) / base if base else 1
    if spec.term_scale is not None:
        for c0, c1 in spec.term_scale.num:
            base = abs(float(c0 + c1 * n))
            if c1 != 0 and (base == 0 or -c0 / c1 >= n):
                return None
            g *= 1 + abs(float(c1)) / base if base else 1
        for c0, c1 in spec.term_scale.den:
            if c1 != 0 and -c0 / c1 >= n:
                return None
    return g * 1.01


def sum_direct(spec: SeriesSpec, digits: int, max_terms: int = 10**6) -> SumResult:
    """Partial sums with a tail bound, in fixed-point integer arithmetic.

    Alternating tails are bounded by the first omitted term once 16
    consecutive sign alternations with decreasing magnitude have been seen;
    other tails use a geometric bound from the hypergeometric ratio. If the
    bound is not met within ``max_terms`` the partial sum is returned with
    ``budget_exceeded=True``.
    """
    prec = digits_to_bits(digits)
    if spec.terminates():
        return _exact_result(spec, prec)
    base, weight, scale = spec.base, spec.weight, spec.term_scale
    if (weight.kind == "linear" and weight.c0 == weight.c1 == 0) or (scale is not None and scale.const == 0):
        return SumResult(BigFloat.zero(prec), BigFloat.zero(prec), 0, "exact", exact=Fraction(0))
    if base.pole_index() is not None:
        raise PoleError("a lower parameter is a nonpositive integer")
    p = prec + 2 * max(1, max_terms).bit_length() + 8
    one = 1 << p
    tol = Fraction(1, 10**digits)

    ups = [_int_linear(a, Fraction(1)) for a in base.upper]
    lows = [_int_linear(b, Fraction(1)) for b in base.lower]
    an, ad = base.argument.numerator, base.argument.denominator
    fixed_num = an
    fixed_den = ad
    for _, _, w in lows:
        fixed_num *= w
    for _, _, w in ups:
        fixed_den *= w
    snum = [_int_linear(*f) for f in scale.num] if scale else []
    sden = [_int_linear(*f) for f in scale.den] if scale else []
    sconst = scale.const if scale else Fraction(1)

    t = one  # hypergeometric term, fixed point
    wfix = one if weight.kind in ("none", "linear") else 0
    total = 0
    prev = None
    streak = 0
    wmax = 1.0
    for n in range(max_terms + 1):
        if n > 0:
            num, den = fixed_num, fixed_den * n
            for u, v, _ in ups:
                num *= u + v * (n - 1)
            for u, v, _ in lows:
                den *= u + v * (n - 1)
            t = t * num // den
            if weight.kind not in ("none", "linear"):
                inc = weight.increment(n)
                wfix += (inc.numerator << p) // inc.denominator
        term = t * wfix >> p
        if weight.kind == "linear":
            term = term * weight.at(n)
        if scale is not None:
            sn, sd = sconst.numerator, sconst.denominator
            for u, v, w in snum:
                sn, sd = sn * (u + v * n), sd * w
            for u, v, w in sden:
                sn, sd = sn * w, sd * (u + v * n)
            if sd == 0:
                raise PoleError(f"term scale denominator vanishes at n={n}")
            term = term * sn // sd if sd > 0 else -term * sn // -sd
        if isinstance(term, Fraction):
            term = math.floor(term)
        wmax = max(wmax, abs(wfix) / one if weight.kind not in ("none", "linear") else 1.0)
        rounding = Fraction(8 * (n + 2) ** 2 * math.ceil(wmax), one)

        if prev is not None and term != 0 and prev != 0 and (term > 0) != (prev > 0) and abs(term) < abs(prev):
            streak += 1
        else:
            streak = 0
        mag = Fraction(abs(term), one)
        bound = None
        if streak >= 16:
            bound = mag + rounding
        elif n >= 16:
            r = _ratio_sup(base, n)
            g = _weight_growth(spec, n) if r is not None else None
            if r is not None and g is not None and r * g < 1:
                bound = mag / Fraction(1 - r * g) + rounding
        if bound is not None and bound < tol:
            return SumResult(
                BigFloat.from_man_exp(total, -p, prec),
                BigFloat.from_fraction(bound, 64),
                n,
                "direct",
            )
        if n == max_terms:
            break
        total += term
        prev = term
    est = Fraction(abs(prev or 0), one) + Fraction(8 * (max_terms + 2) ** 2, one)
    return SumResult(
        BigFloat.from_man_exp(total, -p, prec),
        BigFloat.from_fraction(est, 64),
        max_terms,
        "direct",
        budget_exceeded=True,
    )


# ---------------------------------------------------------------------------
# Cohen–Rodriguez Villegas–Zagier acceleration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def cvz_weights(n: int) -> tuple[tuple[Fraction, ...], int]:
    """Exact weights ``c_k`` and normaliser ``d = T_n(3)`` for ``n`` terms."""
    t_prev, d = 1, 3
    if n == 0:
        d = 1
    for _ in range(n - 1):
        t_prev, d = d, 6 * d - t_prev
    b = Fraction(-1)
    c = Fraction(-d)
    out = []
    for k in range(n):
        c = b - c
        out.append(c)
        b = b * (k + n) * (k - n) / ((k + Fraction(1, 2)) * (k + 1))
    return tuple(out), d


def cvz_accelerate(magnitudes: Sequence[BigFloat | Fraction], prec: int) -> BigFloat:
    """Estimate ``sum_k (-1)**k a_k`` from ``a_0 .. a_{n-1}``."""
    n = len(magnitudes)
    weights, d = cvz_weights(n)
    s = BigFloat.zero(prec)
    for c, a in zip(weights, magnitudes):
        if isinstance(a, Fraction):
            a = BigFloat.from_fraction(a, prec)
        s = s + BigFloat.from_fraction(c, prec) * a
    return s / d


def accelerated_terms_count(digits: int) -> int:
    return math.ceil(digits * 1.31) + 10


def acceleration_prec(digits: int, n: int) -> int:
    return math.ceil(digits * 3.33 + 10 * math.log2(max(2, n))) + 64


def accelerate(
    signed_terms: Callable[[int], Sequence[BigFloat | Fraction]],
    digits: int,
    max_terms: int | None = None,
    escalations: int = 3,
) -> SumResult:
    """Two-level CVZ summation of an alternating series.

    ``signed_terms(m)`` returns the first ``m`` terms with their signs. The
    runs with ``N`` and ``N + 8`` terms must agree to ``digits``; on
    disagreement ``N`` is doubled up to ``escalations`` times before
    :class:`AccelerationUnreliable` is raised.
    """
    n = accelerated_terms_count(digits)
    last = None
    for _ in range(escalations + 1):
        if max_terms is not None and n + 8 > max_terms:
            break
        terms = signed_terms(n + 8)
        mags = [t if k % 2 == 0 else -t for k, t in enumerate(terms)]
        prec = acceleration_prec(digits, n + 8)
        v1 = cvz_accelerate(mags[:n], prec)
        v2 = cvz_accelerate(mags, prec)
        err = abs(v2 - v1)
        last = SumResult(v2, err.with_prec(64), n + 8, "accelerated", heuristic=True)
        if agree_digits(v2, v1) >= digits:
            return last
        n *= 2
    raise AccelerationUnreliable(
        f"two-level acceleration runs disagree below {digits} digits", partial=last
    )


def sum_accelerated(spec: SeriesSpec, digits: int, max_terms: int | None = None) -> SumResult:
    """Sum an alternating series (negative argument) by CVZ acceleration.

    Terminating specs are summed exactly instead.
    """
    if spec.terminates():
        return _exact_result(spec, acceleration_prec(digits, 2))
    if spec.base.argument >= 0:
        raise UsageError("acceleration needs an alternating series (negative argument)")
    if spec.base.pole_index() is not None:
        raise PoleError("a lower parameter is a nonpositive integer")
    return accelerate(lambda m: terms_exact(spec, m), digits, max_terms)


def sum_series(spec: SeriesSpec, digits: int, max_terms: int = 10**6) -> SumResult:
    """Pick the right summation: exact, accelerated (with direct fallback) or direct."""
    if spec.terminates():
        return _exact_result(spec, digits_to_bits(digits))
    if spec.base.argument < 0:
        try:
            return sum_accelerated(spec, digits)
        except AccelerationUnreliable:
            return sum_direct(spec, digits, max_terms)
    return sum_direct(spec, digits, max_terms)
