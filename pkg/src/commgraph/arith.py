"""Exact scalars: rationals with p-adic valuation, prime-field residues, field descriptors.

Rationals are :class:`fractions.Fraction`; p-adic integers are rationals whose
valuation at p is non-negative, so no truncated power series type is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import InvalidArgument, NotPAdicInteger

Rational = Fraction
Valuation = Union[int, float]  # float only for math.inf

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_PRIME_LIMIT = 1 << 64


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n < 2**64."""
    n = int(n)
    if n >= _PRIME_LIMIT:
        raise InvalidArgument(f"primality only decided below 2**64, got {n}")
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int, name: str = "p") -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise InvalidArgument(f"{name} must be prime, got {p!r}")
    return p


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (inputs here are small)."""
    if n < 1:
        raise InvalidArgument(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_power_of(n: int, p: int) -> bool:
    """True iff n = p**k for some k >= 1."""
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidArgument("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise InvalidArgument(f"cannot interpret {x!r} as an exact rational")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            if int(den) == 0:
                raise InvalidArgument(f"zero denominator in {s!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except ValueError as exc:
        raise InvalidArgument(f"not a rational literal: {s!r}") from exc


def format_rational(x: Fraction) -> str:
    """'num/den', or 'num' when den == 1."""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _vp_int(m: int, p: int) -> int:
    m = abs(m)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


def vp(x, p: int) -> Valuation:
    """Exponent of p in the rational x; ``math.inf`` for zero."""
    require_prime(p)
    x = as_rational(x)
    if x == 0:
        return math.inf
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def reduce_mod_p(x, p: int) -> "PrimeFieldElem":
    """Residue class of a p-adic integer x in F_p."""
    x = as_rational(x)
    if vp(x, p) < 0:
        raise NotPAdicInteger(f"{format_rational(x)} has negative {p}-adic valuation")
    return PrimeFieldElem(p, x.numerator * pow(x.denominator, -1, p) % p)


@dataclass(frozen=True)
class PrimeFieldElem:
    """Residue class ``value`` mod the prime ``modulus``."""

    modulus: int
    value: int

    def __post_init__(self):
        require_prime(self.modulus, "modulus")
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElem):
            if other.modulus != self.modulus:
                raise InvalidArgument("mixed moduli")
            return other.value
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.modulus, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.modulus, self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.modulus, o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.modulus, self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElem(self.modulus, -self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * field_inverse(PrimeFieldElem(self.modulus, o))

    def __pow__(self, k: int):
        if k < 0:
            return field_inverse(self) ** (-k)
        return PrimeFieldElem(self.modulus, pow(self.value, k, self.modulus))

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElem):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.modulus, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def field_inverse(x: PrimeFieldElem) -> PrimeFieldElem:
    if x.value == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{x.modulus}")
    return PrimeFieldElem(x.modulus, pow(x.value, -1, x.modulus))


# ---------------------------------------------------------------------------
# field descriptors used by the matrix layer
#
# Matrix entries are stored as raw representatives: Fraction over Q, int in
# [0, p) over F_p.  The descriptor supplies the arithmetic.


class Field:
    descriptor: str
    characteristic: int

    zero: object
    one: object

    def __eq__(self, other):
        return isinstance(other, Field) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return self.descriptor


class RationalField(Field):
    descriptor = "Q"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, PrimeFieldElem):
            raise InvalidArgument("cannot lift a residue class to Q implicitly")
        return as_rational(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def fmt(self, a) -> str:
        return format_rational(a)

    def parse(self, s: str):
        return parse_rational(s)


class PrimeField(Field):
    def __init__(self, p: int):
        self.p = require_prime(p)
        self.characteristic = p
        self.descriptor = f"Fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def __call__(self, x) -> int:
        if isinstance(x, PrimeFieldElem):
            if x.modulus != self.p:
                raise InvalidArgument("mixed moduli")
            return x.value
        if isinstance(x, (Fraction, str)):
            return reduce_mod_p(as_rational(x), self.p).value
        if isinstance(x, bool) or not isinstance(x, int):
            # numpy integers land here
            try:
                return int(x) % self.p
            except (TypeError, ValueError) as exc:
                raise InvalidArgument(f"cannot interpret {x!r} in F_{self.p}") from exc
        return x % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return pow(a, -1, self.p)

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, s: str):
        return self(parse_rational(s))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_descriptor(desc: str) -> Field:
    if desc == "Q":
        return QQ
    if desc.startswith("Fp:"):
        try:
            p = int(desc[3:])
        except ValueError as exc:
            raise InvalidArgument(f"bad field descriptor {desc!r}") from exc
        return GF(p)
    raise InvalidArgument(f"bad field descriptor {desc!r}")
