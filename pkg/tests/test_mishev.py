from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperseed.bigfloat import agree_digits
from hyperseed.catalog import verify_record
from hyperseed.constexpr import build_const, eval_const
from hyperseed.errors import DomainError, PoleError, UnsupportedFamilyError
from hyperseed.mishev import (
    SequenceFamily,
    TransformParams,
    derive_identity,
    format_sequence,
    forward_L,
    inverse_reconstruct,
    parse_sequence,
    read_sequence,
    round_trip,
)
from hyperseed.series import sum_accelerated, sum_terminating_exact
from hyperseed.special import pochhammer

F = Fraction
A_VALUES = [F(1, 2), F(1, 3), F(5, 7), F(1), F(3, 2), F(2)]
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def brute_forward(a, x):
    return [sum(pochhammer(-n, k) * pochhammer(n + a, k) * x[k] for k in range(n + 1)) for n in range(len(x))]


def test_forward_examples():
    assert forward_L(TransformParams(F(3, 4), 5), [1, 0, 0, 0, 0, 0]) == [1] * 6
    assert forward_L(TransformParams(1, 1), [1, 1])[1] == -1
    x = [F(1, math.factorial(l) ** 2) for l in range(4)]
    assert forward_L(TransformParams(F(1, 2), 3), x)[3] == F(-5, 16)


def test_forward_matches_brute_force():
    x = [F(k * k - 3, k + 2) for k in range(9)]
    assert forward_L(TransformParams(F(2, 9), 8), x) == brute_forward(F(2, 9), x)


def test_round_trip_examples():
    assert round_trip(TransformParams(F(1, 2), 3), [1, 0, 0, 0]) == [1, 0, 0, 0]
    x = [F(1), F(1, 2), F(1, 3), F(1, 4), F(1, 5)]
    assert round_trip(TransformParams(F(5, 7), 4), x) == x


def test_inverse_recovers_inverse_square_factorials():
    x = [F(1, math.factorial(l) ** 2) for l in range(5)]
    y = forward_L(TransformParams(F(1, 3), 4), x)
    assert inverse_reconstruct(TransformParams(F(1, 3), 4), y)[4] == F(1, 576)


@settings(max_examples=200, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=13), st.sampled_from(A_VALUES))
def test_round_trip_property(x, a):
    params = TransformParams(a, len(x) - 1)
    assert round_trip(params, x) == x
    assert forward_L(params, inverse_reconstruct(params, x)) == x


@settings(max_examples=50, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=8), st.lists(rationals, min_size=2, max_size=8),
       rationals, st.sampled_from(A_VALUES))
def test_forward_is_linear(x, y, c, a):
    m = min(len(x), len(y))
    x, y = x[:m], y[:m]
    params = TransformParams(a, m - 1)
    lhs = forward_L(params, [xi + c * yi for xi, yi in zip(x, y)])
    rhs = [u + c * v for u, v in zip(forward_L(params, x), forward_L(params, y))]
    assert lhs == rhs


def test_transform_params_domain():
    with pytest.raises(PoleError):
        TransformParams(0, 3)
    with pytest.raises(DomainError):
        TransformParams(-2, 3)


@pytest.mark.parametrize("a", [F(1, 2), F(-7, 3), F(11, 5), F(1, 9)])
def test_gauss_inner_sum(a):
    x = [F(1, math.factorial(l) ** 2) for l in range(31)]
    y = forward_L(TransformParams(a, 30), x)
    for k, yk in enumerate(y):
        assert yk == (-1) ** k * pochhammer(a, k) / math.factorial(k)


@pytest.mark.parametrize("kind", ["inv-square-factorial", "shifted-factorial", "half-shift"])
def test_inner_closed_forms(kind):
    fam = SequenceFamily(kind)
    a = F(3, 5)
    assert forward_L(TransformParams(a, 15), fam.sequence(16)) == [fam.inner_closed_form(a, k) for k in range(16)]


def test_four_f_three_exact_for_integer_n():
    rec = derive_identity(SequenceFamily("inv-square-factorial"))
    for a in [F(2, 3), F(-5, 2), F(7, 11)]:
        for n in range(21):
            spec, rhs = rec.instantiate({"a": a, "n": n})
            assert sum_terminating_exact(spec) == pochhammer(a + 1, n) / math.factorial(n) == rhs.value


def test_three_parameter_family_exact():
    rec = derive_identity(SequenceFamily("pochhammer-pair"))
    for a, b in [(F(2, 3), F(7, 4)), (F(-1, 5), F(9, 2)), (F(5, 3), F(1, 3))]:
        for n in range(16):
            spec, rhs = rec.instantiate({"a": a, "b": b, "n": n})
            assert sum_terminating_exact(spec) == pochhammer(a + 1, n) / pochhammer(b, n) == rhs.value


def _params_of(rec, env):
    spec, rhs = rec.instantiate(env)
    return Counter(spec.base.upper), Counter(spec.base.lower), spec, rhs


def test_derive_ramanujan_record():
    up, low, spec, rhs = _params_of(derive_identity(SequenceFamily("inv-square-factorial")),
                                    {"a": "1/2", "n": "-1/2"})
    assert up == Counter([F(1, 2)] * 3 + [F(5, 4)])
    assert low == Counter([F(1, 4), F(1), F(1)])
    two_over_pi = eval_const(build_const("(div 2 pi)", {}), 25)
    assert agree_digits(eval_const(rhs, 25), two_over_pi) >= 25
    assert agree_digits(sum_accelerated(spec, 20).value, two_over_pi) >= 20


@pytest.mark.parametrize("b", ["7/3", "3/2", "5"])
def test_derive_generalized_levrie_record(b):
    rec = derive_identity(SequenceFamily("pochhammer-pair"))
    _, _, spec, rhs = _params_of(rec, {"a": "1/2", "n": "-1/2", "b": b})
    expected = build_const("(div (mul 2 (poch (sub b 1/2) 1/2)) (sqrt pi))", {"b": F(b)})
    assert agree_digits(eval_const(rhs, 20), eval_const(expected, 20)) >= 20
    assert agree_digits(sum_accelerated(spec, 15).value, eval_const(expected, 15)) >= 15


def test_derive_exotic_record():
    up, low, spec, rhs = _params_of(derive_identity(SequenceFamily("half-shift")), {"a": "1/4", "n": "1/4"})
    assert up == Counter([F(-1, 4), F(-1, 4), F(1, 4), F(9, 8)])
    assert low == Counter([F(1, 8), F(3, 2), F(3, 2)])
    target = eval_const(build_const("(div (mul 2 (sqrt 2)) 3)", {}), 20)
    assert agree_digits(eval_const(rhs, 20), target) >= 20


def test_derive_with_confirmation_and_verification():
    rec = derive_identity(SequenceFamily("shifted-factorial"), symbolic=False)
    report = verify_record(rec, {"a": "2/3", "n": "3"})
    assert report.passed and report.lhs == "55/81"
    report = verify_record(rec, {"a": "1/2", "n": "-1/2"}, digits=20)
    assert report.passed


@pytest.mark.parametrize("fam", [SequenceFamily("explicit", values=(F(1),)), SequenceFamily("geometric-pochhammer", y=F(2))])
def test_derive_rejects_families_without_closed_form(fam):
    with pytest.raises(UnsupportedFamilyError):
        derive_identity(fam)


def test_sequence_io(tmp_path):
    text = "# header\n1\n-3/4  # trailing comment\n\n22/7\n"
    assert parse_sequence(text.splitlines()) == [F(1), F(-3, 4), F(22, 7)]
    p = tmp_path / "seq.txt"
    p.write_text(format_sequence([F(1), F(-3, 4)]))
    assert p.read_text() == "1/1\n-3/4\n"
    assert read_sequence(p) == [F(1), F(-3, 4)]
    with pytest.raises(ValueError):
        parse_sequence(["0.25"])
