"""The identity catalog and its verification driver.

Records live in ``data/catalog.json`` (override with ``HYPERSEED_CATALOG``).
Each record pairs a series template with a closed-form template; parametric
records list their parameter names and a default sweep. Two checks that are
procedures rather than series identities are built in: ``levrie-rewrite``
(the Pochhammer-quotient product form) and ``harmonic-derivative`` (the
parametric differentiation behind the ``H_2n`` series).
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .bigfloat import BigFloat, agree_digits, bits_to_digits
from .constexpr import ConstExpr, as_rational, build_const, eval_const, evaluate
from .errors import AccelerationUnreliable, UnknownIdentity, UsageError
from .rational import format_rational, parse_rational
from .series import (
    SeriesSpec,
    TermScale,
    accelerate,
    acceleration_prec,
    hyper,
    spec_from_json,
    sum_accelerated,
    sum_direct,
    sum_terminating_exact,
    terms_exact,
)
from .special import central_binomial, constant_bits, digamma_bits, harmonic, odd_harmonic, pochhammer

DEFAULT_DIGITS = 20
MODES = ("exact-terminating", "numeric", "auto")


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    lhs: Mapping[str, Any]
    rhs: str
    mode: str
    params: tuple[str, ...] = ()
    sweep: tuple[Mapping[str, str], ...] = ()
    anchor: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"{self.id}: unknown mode {self.mode!r}")

    @classmethod
    def from_json(cls, obj: Mapping) -> "IdentityRecord":
        schema = obj.get("params_schema", {}) or {}
        return cls(
            id=obj["id"],
            lhs=obj["lhs"],
            rhs=obj["rhs"],
            mode=obj.get("mode", "numeric"),
            params=tuple(schema.get("names", ())),
            sweep=tuple(schema.get("sweep", ())),
            anchor=obj.get("anchor", ""),
        )

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "mode": self.mode,
            "params_schema": {"names": list(self.params), "sweep": [dict(s) for s in self.sweep]},
            "anchor": self.anchor,
        }

    def resolve_params(self, given: Mapping[str, Any] | None = None) -> dict[str, Fraction]:
        given = dict(given or {})
        unknown = set(given) - set(self.params)
        if unknown:
            raise UsageError(f"{self.id}: unknown parameter(s) {', '.join(sorted(unknown))}")
        env = {k: parse_rational(v) for k, v in (self.sweep[0].items() if self.sweep else ())}
        env.update({k: parse_rational(v) for k, v in given.items()})
        missing = [p for p in self.params if p not in env]
        if missing:
            raise UsageError(f"{self.id}: missing parameter(s) {', '.join(missing)}")
        return env

    def instantiate(self, params: Mapping[str, Any] | None = None) -> tuple[SeriesSpec, ConstExpr]:
        env = self.resolve_params(params)
        return spec_from_json(self.lhs, env), build_const(self.rhs, env)


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def catalog_path() -> Path | None:
    env = os.environ.get("HYPERSEED_CATALOG")
    return Path(env) if env else None


@lru_cache(maxsize=8)
def _load(path: str | None) -> tuple[IdentityRecord, ...]:
    if path is None:
        text = resources.files("hyperseed").joinpath("data/catalog.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    records = tuple(IdentityRecord.from_json(obj) for obj in json.loads(text))
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate identity ids in catalog")
    return records


def catalog_entries() -> tuple[IdentityRecord, ...]:
    p = catalog_path()
    return _load(str(p) if p else None)


PROCEDURES = {
    "levrie-rewrite": (("b",), tuple({"b": str(b)} for b in range(1, 7)),
                       "(3/2-b)_i/(b)_i as a signed product of linear factors times C(2i,i)/4^i"),
    "harmonic-derivative": ((), ({},),
                         "d/db of the generalized Levrie sum at b = 1: psi route vs finite differences vs 4 ln 2/pi"),
}


def all_ids() -> list[str]:
    return [r.id for r in catalog_entries()] + list(PROCEDURES)


def get_record(identity: str) -> IdentityRecord:
    for r in catalog_entries():
        if r.id == identity:
            return r
    raise UnknownIdentity(f"unknown identity id {identity!r}")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    id: str
    params: dict[str, str]
    requested_digits: int | None
    achieved_digits: int | None
    lhs: str
    rhs: str
    method: str
    terms_used: int
    elapsed_seconds: float
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "params": self.params,
            "requested_digits": self.requested_digits,
            "achieved_digits": self.achieved_digits,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "method": self.method,
            "terms_used": self.terms_used,
            "elapsed_seconds": round(self.elapsed_seconds, 6),
            "pass": self.passed,
            "detail": self.detail,
        }


def _shown(x: BigFloat, digits: int) -> str:
    return x.to_fixed(digits + 2, truncate=True)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify(identity: str, params: Mapping[str, Any] | None = None, digits: int = DEFAULT_DIGITS,
           max_terms: int = 10**6) -> VerificationReport:
    """Check one catalog identity (or built-in procedure) at the given parameters.

    Terminating instances with a rational closed form are compared exactly;
    everything else is summed (acceleration first, direct summation as
    fallback) and compared with the closed form to ``digits`` digits.
    """
    if digits < 1:
        raise UsageError("digits must be positive")
    if identity in PROCEDURES:
        return _verify_procedure(identity, params, digits)
    return verify_record(get_record(identity), params, digits, max_terms)


def verify_record(rec: IdentityRecord, params: Mapping[str, Any] | None = None, digits: int = DEFAULT_DIGITS,
                  max_terms: int = 10**6) -> VerificationReport:
    """Like :func:`verify` for a record that need not be in the catalog."""
    if digits < 1:
        raise UsageError("digits must be positive")
    env = rec.resolve_params(params)
    shown_params = {k: format_rational(v) for k, v in sorted(env.items())}
    spec, rhs = rec.instantiate(env)
    start = time.perf_counter()

    if spec.terminates() and rec.mode in ("exact-terminating", "auto"):
        lhs_exact = sum_terminating_exact(spec)
        terms = spec.base.termination_index() + 1
        rhs_exact = as_rational(rhs)
        if rhs_exact is not None:
            return VerificationReport(
                rec.id, shown_params, None, None,
                format_rational(lhs_exact), format_rational(rhs_exact),
                "exact", terms, time.perf_counter() - start, lhs_exact == rhs_exact,
            )
        lhs_val = BigFloat.from_fraction(lhs_exact, eval_const(rhs, digits).prec)
        method = "exact"
    else:
        if rec.mode == "exact-terminating":
            raise UsageError(f"{rec.id}: instance does not terminate at {shown_params}")
        result = _numeric_sum(spec, digits, max_terms)
        lhs_val, method, terms = result.value, result.method, result.terms_used
    rhs_val = eval_const(rhs, digits)
    achieved = agree_digits(lhs_val, rhs_val)
    return VerificationReport(
        rec.id, shown_params, digits, achieved, _shown(lhs_val, digits), _shown(rhs_val, digits),
        method, terms, time.perf_counter() - start, achieved >= digits,
    )


def _numeric_sum(spec: SeriesSpec, digits: int, max_terms: int):
    if spec.base.argument < 0:
        try:
            return sum_accelerated(spec, digits)
        except AccelerationUnreliable:
            pass
    return sum_direct(spec, digits, max_terms)


def _verify_procedure(name: str, params, digits: int) -> VerificationReport:
    names, sweep, _ = PROCEDURES[name]
    given = dict(params or {})
    unknown = set(given) - set(names)
    if unknown:
        raise UsageError(f"{name}: unknown parameter(s) {', '.join(sorted(unknown))}")
    if name == "harmonic-derivative":
        return verify_harmonic_derivative(digits)
    env = {**sweep[0], **given}
    b = parse_rational(env["b"])
    if b.denominator != 1 or b < 1:
        raise UsageError("levrie-rewrite needs a positive integer b")
    start = time.perf_counter()
    i_max = 50
    ok = verify_levrie_rewrite(int(b), i_max)
    return VerificationReport(name, {"b": format_rational(b)}, None, None, "", "", "exact", i_max + 1,
                              time.perf_counter() - start, ok)


def verify_levrie_rewrite(b: int, i_max: int) -> bool:
    """Exact check of the product form of ``(3/2-b)_i/(b)_i`` for ``0 <= i <= i_max``.

    The product form is::

        (-1)^(b+1) ((2(b-1))!/2^(b-1)) / [(2i-1)(2i-3)...(2i-2(b-1)+1) (i+1)...(i+b-1)] * C(2i,i)/4^i

    with empty products equal to 1. A vanishing linear factor is reported as
    a mismatch.
    """
    if b < 1:
        raise UsageError("b must be a positive integer")
    sign = -1 if (b + 1) % 2 else 1
    const = Fraction(math.factorial(2 * (b - 1)), 2 ** (b - 1)) * sign
    for i in range(i_max + 1):
        lhs = pochhammer(Fraction(3, 2) - b, i) / pochhammer(b, i)
        den = 1
        for j in range(1, b):
            den *= (2 * i - (2 * j - 1)) * (i + j)
        if den == 0:
            return False
        rhs = const / den * Fraction(central_binomial(i), 4**i)
        if lhs != rhs:
            return False
    return True


def levrie_general_spec(b) -> SeriesSpec:
    b = Fraction(b)
    return hyper(["1/2", "1/2", "5/4", format_rational(Fraction(3, 2) - b)], ["1/4", "1", format_rational(b)], "-1")


def verify_harmonic_derivative(digits: int = 12, h_exponent: int = 15, fd_digits: int = 60) -> VerificationReport:
    """Differentiate the generalized Levrie sum in ``b`` at ``b = 1`` two ways.

    Analytic route: each summand's derivative uses
    ``d/db (c)_i = (c)_i (psi(c+i) - psi(c))``; the resulting terms are
    summed with acceleration. Finite-difference route: central difference of
    the sum at ``b = 1 +- 10**-h_exponent`` computed at ``fd_digits``. Both
    must match each other and ``4 ln 2/pi``. The report also records that the
    ``i = 0`` term vanishes and that the psi-form orientation (value
    ``+4 ln 2/pi``) is the exact negative of the binomial-form
    ``2 O_i + H_i`` sum (value ``-4 ln 2/pi``).
    """
    if digits < 5:
        raise UsageError("digits must be at least 5")
    start = time.perf_counter()
    work = digits + 5
    fd_digits = max(fd_digits, digits + h_exponent + 10)
    half = Fraction(1, 2)

    unit_spec = hyper(["1/2", "1/2", "1/2"], ["1", "1"], "-1", term_scale=TermScale(1, ((1, 4),)))
    base_terms: dict[int, list[Fraction]] = {}

    def base(m):
        # (-1)^i (1/2)_i^3/(i!)^3 (4i+1): the generalized Levrie summand at b = 1
        if m not in base_terms:
            base_terms[m] = terms_exact(unit_spec, m)
        return base_terms[m]

    def analytic_terms(m):
        prec = acceleration_prec(work, m) + 16
        psi_half, psi_one = digamma_bits(half, prec), digamma_bits(1, prec)
        out = []
        for i, t in enumerate(base(m)):
            # d/db of (3/2-b)_i/(b)_i at b = 1
            bracket = -(digamma_bits(i + half, prec) - psi_half) - (digamma_bits(i + 1, prec) - psi_one)
            out.append(BigFloat.from_fraction(t, prec) * bracket)
        return out

    analytic = accelerate(analytic_terms, work)

    h = Fraction(1, 10**h_exponent)
    f_plus = sum_accelerated(levrie_general_spec(1 + h), fd_digits).value
    f_minus = sum_accelerated(levrie_general_spec(1 - h), fd_digits).value
    fd = (f_plus - f_minus) / (2 * h)

    closed = eval_const(build_const("(div (mul 4 ln2) pi)", {}), work)

    # psi-expression of the proof, term by term
    prec = acceleration_prec(work, analytic.terms_used) + 16
    gamma_e, ln2 = constant_bits("eulergamma", prec), constant_bits("ln2", prec)
    n_check = analytic.terms_used
    psi_ok = True
    flip_ok = True
    derivative_terms = analytic_terms(n_check)
    for i, t in enumerate(base(n_check)):
        combo = digamma_bits(i + half, prec) + 2 * gamma_e + 2 * ln2 + digamma_bits(i + 1, prec)
        proof_term = BigFloat.from_fraction(-t, prec) * combo  # (-1)^(i+1)(4i+1)(1/2)_i^3/(i!)^3 (...)
        if agree_digits(proof_term, derivative_terms[i]) < work:
            psi_ok = False
        if agree_digits(combo, BigFloat.from_fraction(2 * odd_harmonic(i) + harmonic(i), prec)) < work:
            psi_ok = False
        psi_coefficient = -t
        binomial_coefficient = Fraction(-1, 64) ** i * central_binomial(i) ** 3 * (4 * i + 1)
        if psi_coefficient != -binomial_coefficient:
            flip_ok = False
    i0 = digamma_bits(half, prec) + 2 * gamma_e + 2 * ln2 + digamma_bits(1, prec)
    i0_vanishes = i0.is_zero() or agree_digits(i0, BigFloat.zero(prec)) >= work

    a_vs_closed = agree_digits(analytic.value, closed)
    fd_vs_analytic = agree_digits(fd, analytic.value)
    fd_vs_closed = agree_digits(fd, closed)
    achieved = min(a_vs_closed, fd_vs_analytic, fd_vs_closed)
    passed = achieved >= digits and i0_vanishes and psi_ok and flip_ok
    return VerificationReport(
        "harmonic-derivative", {}, digits, achieved,
        _shown(analytic.value, digits), _shown(closed, digits),
        "accelerated", analytic.terms_used, time.perf_counter() - start, passed,
        detail={
            "finite_difference": _shown(fd, digits),
            "h": f"1e-{h_exponent}",
            "fd_working_digits": fd_digits,
            "agree_analytic_closed": a_vs_closed,
            "agree_fd_analytic": fd_vs_analytic,
            "agree_fd_closed": fd_vs_closed,
            "i0_term": i0.to_fixed(work, truncate=True),
            "i0_vanishes": i0_vanishes,
            "psi_terms_match_harmonic_form": psi_ok,
            "psi_orientation_value": _shown(closed, digits),
            "binomial_orientation_value": _shown(-closed, digits),
            "orientation_sign_flip_exact": flip_ok,
        },
    )


def sweep_for(identity: str) -> list[dict[str, str]]:
    if identity in PROCEDURES:
        return [dict(s) for s in PROCEDURES[identity][1]]
    rec = get_record(identity)
    return [dict(s) for s in rec.sweep] or [{}]


def verify_all(digits: int = DEFAULT_DIGITS) -> list[VerificationReport]:
    """Every catalog id at every documented sweep point, in id order."""
    reports = []
    for identity in all_ids():
        for params in sweep_for(identity):
            reports.append(verify(identity, params, digits))
    return reports
