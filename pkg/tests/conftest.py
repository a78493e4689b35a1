from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from hyperseed.series import TermScale, hyper


def ramanujan_spec(weight="none"):
    """sum (-1/64)^n C(2n,n)^3 (4n+1) w_n written as a 3F2 at -1."""
    return hyper(["1/2", "1/2", "1/2"], ["1", "1"], "-1", weight, TermScale(1, ((1, 4),)))


def fixed_arctan_inv(x: int, scale: int) -> int:
    # plain Taylor series in fixed point, no binary splitting
    total, term, k, sign = 0, scale // x, 1, 1
    x2 = x * x
    while term:
        total += sign * (term // k)
        term //= x2
        k += 2
        sign = -sign
    return total


def oracle_pi(digits: int) -> Fraction:
    scale = 10 ** (digits + 10)
    return Fraction(16 * fixed_arctan_inv(5, scale) - 4 * fixed_arctan_inv(239, scale), scale)


def oracle_ln2(digits: int) -> Fraction:
    # ln 2 = 2 atanh(1/3)
    scale = 10 ** (digits + 10)
    total, term, k = 0, scale // 3, 1
    while term:
        total += term // k
        term //= 9
        k += 2
    return Fraction(2 * total, scale)


def mp_fraction(x) -> Fraction:
    # read the raw tuple: man_exp drops the sign under the gmpy backend
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


@pytest.fixture
def mp50():
    with mpmath.workdps(60):
        yield
