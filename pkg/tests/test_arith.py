import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commgraph.arith import (
    GF,
    QQ,
    PrimeFieldElem,
    factorize,
    field_from_descriptor,
    field_inverse,
    format_rational,
    is_power_of,
    is_prime,
    parse_rational,
    reduce_mod_p,
    vp,
)
from commgraph.errors import InvalidArgument, NotPAdicInteger

PRIMES = [2, 3, 5, 7, 11, 13]


def naive_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_is_prime_matches_trial_division():
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if naive_prime(n)]


def test_is_prime_large_and_out_of_range():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    with pytest.raises(InvalidArgument):
        is_prime(2**64 + 13)


def test_factorize_and_powers():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert is_power_of(8, 2) and is_power_of(9, 3)
    assert not is_power_of(1, 2) and not is_power_of(12, 2)


def test_vp_examples():
    assert vp(12, 2) == 2
    assert vp(Fraction(3, 4), 2) == -2
    assert vp(0, 5) == math.inf


def test_reduce_mod_p_examples():
    assert reduce_mod_p(7, 5).value == 2
    assert reduce_mod_p(Fraction(1, 3), 2).value == 1
    with pytest.raises(NotPAdicInteger):
        reduce_mod_p(Fraction(1, 2), 2)


def test_field_inverse_examples():
    assert field_inverse(PrimeFieldElem(5, 2)).value == 3
    assert field_inverse(PrimeFieldElem(11, 1)).value == 1
    assert field_inverse(PrimeFieldElem(7, 6)).value == 6
    with pytest.raises(ZeroDivisionError):
        field_inverse(PrimeFieldElem(7, 0))


def test_rational_text_roundtrip():
    for x in (Fraction(-7, 3), Fraction(5), Fraction(0)):
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(-7, 3)) == "-7/3"


def test_field_descriptors():
    assert field_from_descriptor("Q") == QQ
    assert field_from_descriptor("Fp:7") == GF(7)
    assert GF(7) is GF(7)
    with pytest.raises(InvalidArgument):
        field_from_descriptor("Fp:8")


nonzero = st.fractions().filter(lambda x: x != 0)


@given(nonzero, nonzero, st.sampled_from(PRIMES))
def test_valuation_laws(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)
    if x + y != 0:
        assert vp(x + y, p) >= min(vp(x, p), vp(y, p))
        if vp(x, p) != vp(y, p):
            assert vp(x + y, p) == min(vp(x, p), vp(y, p))


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(-10**6, 10**6),
       st.integers(1, 10**6), st.sampled_from(PRIMES))
def test_reduction_is_ring_homomorphism(a, b, c, d, p):
    x, y = Fraction(a, b), Fraction(c, d)
    if vp(x, p) < 0 or vp(y, p) < 0:
        return
    rx, ry = reduce_mod_p(x, p), reduce_mod_p(y, p)
    assert reduce_mod_p(x + y, p) == rx + ry
    assert reduce_mod_p(x * y, p) == rx * ry
    assert reduce_mod_p(0, p).value == 0 and reduce_mod_p(1, p).value == 1


big = st.integers(-(2**256), 2**256)


@settings(max_examples=50)
@given(big, big.filter(bool), big, big.filter(bool))
def test_exact_rational_sum(a, b, c, d):
    s = Fraction(a, b) + Fraction(c, d)
    assert s * (b * d) == a * d + c * b
