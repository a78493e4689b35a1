"""Arbitrary-precision verification of hypergeometric series identities.

Exact rational arithmetic drives terminating sums and the sequence
transform; everything else runs on :class:`BigFloat` with explicit
precision, compared against closed forms built from ``pi``, ``ln 2``,
Euler's constant, ``Γ`` at rationals and square roots.
"""

from .bigfloat import BigFloat, agree_digits, digits_to_bits
from .catalog import (
    IdentityRecord,
    VerificationReport,
    all_ids,
    catalog_entries,
    verify,
    verify_all,
    verify_levrie_rewrite,
    verify_record,
    verify_harmonic_derivative,
)
from .constexpr import ConstExpr, build_const, eval_const, parse_const
from .errors import (
    AccelerationUnreliable,
    DomainError,
    EvaluationError,
    HyperseedError,
    PoleError,
    UnknownIdentity,
    UnsupportedFamilyError,
    UsageError,
)
from .mishev import SequenceFamily, TransformParams, derive_identity, forward_L, inverse_reconstruct, round_trip
from .rational import format_rational, parse_rational
from .series import (
    HyperSpec,
    SeriesSpec,
    SumResult,
    TermScale,
    Weight,
    hyper,
    spec_from_json,
    sum_accelerated,
    sum_direct,
    sum_series,
    sum_terminating_exact,
    term_exact,
)
from .special import (
    central_binomial,
    constant,
    digamma_rational,
    gamma_rational,
    harmonic,
    harmonic_triple,
    lngamma_rational,
    odd_harmonic,
    alternating_harmonic,
    pochhammer,
    pochhammer_ratio_gamma,
)

__version__ = "0.1.0"
