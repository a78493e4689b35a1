from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hyperseed.bigfloat import BigFloat, agree_digits
from hyperseed.constexpr import Lit, eval_const
from hyperseed.errors import DomainError
from hyperseed.special import (
    bernoulli,
    central_binomial,
    constant,
    digamma_rational,
    gamma_expr,
    gamma_rational,
    harmonic,
    harmonic_triple,
    lngamma_rational,
    odd_harmonic,
    pochhammer,
    pochhammer_expr,
    pochhammer_ratio_gamma,
)

from conftest import mp_fraction, oracle_ln2, oracle_pi


def close(x: BigFloat, q: Fraction, digits: int) -> bool:
    return abs(x.to_fraction() - q) <= Fraction(1, 10**digits) * max(1, abs(q))


def test_pochhammer_examples():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(-2, 3) == 0


def test_pochhammer_ratio_gamma_examples():
    assert pochhammer_ratio_gamma(Fraction(5, 3), 0) == Lit(1)
    v = eval_const(pochhammer_ratio_gamma(Fraction(1, 2), Fraction(1, 2)), 10)
    assert v.to_fixed(10) == "0.5641895835"
    assert eval_const(pochhammer_ratio_gamma(1, 3), 10).to_fraction() == 6


def test_pochhammer_expr_at_poles_and_integers():
    assert pochhammer_expr(Fraction(-3), Fraction(1, 2)) == Lit(0)
    assert pochhammer_expr(Fraction(1, 3), 4) == Lit(pochhammer(Fraction(1, 3), 4))
    assert pochhammer_expr(Fraction(1, 3), -2) == Lit(1 / (Fraction(-2, 3) * Fraction(-5, 3)))
    with pytest.raises(DomainError):
        pochhammer_expr(Fraction(1, 2), Fraction(-1, 2))


def test_gamma_expr_negative_non_integer():
    with mpmath.workdps(40):
        expected = mp_fraction(mpmath.gamma(mpmath.mpf(-7) / 3))
    assert close(eval_const(gamma_expr(Fraction(-7, 3)), 30), expected, 30)


def test_central_binomial():
    assert central_binomial(0) == 1
    assert central_binomial(3) == 20


def test_duplication_bridge_exact():
    for n in range(201):
        assert Fraction(central_binomial(n), 4**n) == pochhammer(Fraction(1, 2), n) / pochhammer(1, n)


def test_harmonic_triple_examples():
    t = harmonic_triple(0)
    assert (t.h, t.o, t.h_alt) == (0, 0, 0)
    t = harmonic_triple(3)
    assert (t.h, t.o, t.h_alt) == (Fraction(11, 6), Fraction(23, 15), Fraction(5, 6))
    assert harmonic_triple(4).o == harmonic(8) - harmonic(4) / 2


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=300))
def test_harmonic_relations(n):
    t = harmonic_triple(2 * n)
    assert harmonic(2 * n) == odd_harmonic(n) + harmonic(n) / 2
    assert t.h_alt == odd_harmonic(n) - harmonic(n) / 2


def test_bernoulli_against_mpmath():
    for m in range(0, 40):
        assert bernoulli(m) == Fraction(str(mpmath.bernfrac(m)[0])) / mpmath.bernfrac(m)[1]


def test_constants_ten_digits():
    assert constant("pi", 10).to_fixed(10) == "3.1415926536"
    assert constant("ln2", 10).to_fixed(10) == "0.6931471806"
    assert constant("eulergamma", 10).to_fixed(10) == "0.5772156649"


@pytest.mark.parametrize("digits", [30, 100, 400])
def test_constants_against_independent_oracles(digits):
    assert close(constant("pi", digits), oracle_pi(digits + 5), digits)
    assert close(constant("ln2", digits), oracle_ln2(digits + 5), digits)
    with mpmath.workdps(digits + 20):
        gamma_ref = mp_fraction(mpmath.euler)
    assert close(constant("eulergamma", digits), gamma_ref, digits)


def test_digamma_examples():
    assert digamma_rational(1, 10).to_fixed(10) == "-0.5772156649"
    assert digamma_rational(Fraction(1, 2), 10).to_fixed(10) == "-1.9635100260"
    assert digamma_rational(2, 10).to_fixed(10) == "0.4227843351"


def test_gamma_examples():
    assert gamma_rational(1, 25).to_fraction() == 1
    assert gamma_rational(Fraction(1, 2), 10).to_fixed(10) == "1.7724538509"
    prod = gamma_rational(Fraction(1, 4), 12) * gamma_rational(Fraction(3, 4), 12)
    assert prod.to_fixed(10) == "4.4428829382"


@pytest.mark.parametrize("q", [Fraction(1, 8), Fraction(3, 8), Fraction(1, 4), Fraction(3, 4), Fraction(1, 3),
                               Fraction(22, 7), Fraction(1, 1000), Fraction(250, 3), Fraction(5)])
@pytest.mark.parametrize("digits", [15, 50])
def test_gamma_family_against_mpmath(q, digits):
    with mpmath.workdps(digits + 20):
        x = mpmath.mpf(q.numerator) / q.denominator
        g, lg, psi = mp_fraction(mpmath.gamma(x)), mp_fraction(mpmath.loggamma(x)), mp_fraction(mpmath.digamma(x))
    assert close(gamma_rational(q, digits), g, digits)
    assert close(lngamma_rational(q, digits), lg, digits)
    assert close(digamma_rational(q, digits), psi, digits)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=40, max_denominator=50))
def test_lngamma_recurrence(q):
    lhs = lngamma_rational(q + 1, 30)
    rhs = lngamma_rational(q, 30) + BigFloat.from_fraction(q, lhs.prec).log()
    assert agree_digits(lhs, rhs) >= 28 or abs((lhs - rhs).to_fraction()) < Fraction(1, 10**29)


def test_digamma_half_integers_and_integers_30_digits():
    g = constant("eulergamma", 40)
    ln2 = constant("ln2", 40)
    for i in range(51):
        a = digamma_rational(Fraction(2 * i + 1, 2), 30)
        b = BigFloat.from_fraction(2 * odd_harmonic(i), a.prec) - g - 2 * ln2
        assert abs((a - b).to_fraction()) < Fraction(1, 10**30)
        c = digamma_rational(i + 1, 30)
        d = BigFloat.from_fraction(harmonic(i), c.prec) - g
        assert abs((c - d).to_fraction()) < Fraction(1, 10**30)


@pytest.mark.parametrize("bad", [0, -1, Fraction(-1, 2)])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        gamma_rational(bad, 10)
    with pytest.raises(DomainError):
        digamma_rational(bad, 10)
