"""Exact p-local arithmetic: valuations, factorial valuations and D_p membership.

Elements of Z_(p) are reduced fractions whose denominator is prime to p, so
every test here is decided exactly; no precision parameter is involved.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime
from sympy.ntheory import is_quad_residue, multiplicity
from sympy.ntheory.factor_ import multiplicity_in_factorial

from hpdegrees.errors import NotLocalError, ParseError

# The valuation of 0. Absorbing under +, maximal under comparison.
INFINITY = math.inf

Valuation = int | float

RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "a" or "a/b" into a reduced Fraction."""
    match = RATIONAL_RE.match(text)
    if not match:
        raise ParseError(f"not an integer or a/b rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def as_fraction(value: int | Fraction | str) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise ParseError(f"expected an integer or Fraction, got {type(value).__name__}")
    return Fraction(value)


def require_prime(p: int) -> int:
    if not isinstance(p, int) or not isprime(p):
        raise ParseError(f"not a prime: {p!r}")
    return p


@dataclass(frozen=True)
class LocalInt:
    """An exact rational lying in Z_(p)."""

    value: Fraction
    p: int

    def __post_init__(self) -> None:
        if self.value.denominator % self.p == 0:
            raise NotLocalError(f"{self.value} is not in Z_({self.p})")

    @classmethod
    def of(cls, value: int | Fraction | str, p: int) -> LocalInt:
        return cls(as_fraction(value), require_prime(p))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class ResidueClass:
    """A class r mod p^precision. Only the brute-force scanners use these."""

    p: int
    precision: int
    residue: int

    def __post_init__(self) -> None:
        if self.precision < 0:
            raise ValueError("precision must be non-negative")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} outside [0, {self.modulus})")

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def valuation(self) -> int:
        """Valuation of the class, capped at the precision (the zero class reports precision)."""
        return min(int_val(self.residue, self.p), self.precision)

    def in_d_p(self) -> bool:
        return d_p_class(self.residue, self.p, self.precision)


def int_val(x: int, p: int) -> Valuation:
    if x == 0:
        return INFINITY
    return multiplicity(p, abs(x))


def val_p(k: LocalInt) -> Valuation:
    """|k|_p; the denominator is a p-unit so only the numerator counts."""
    return int_val(k.numerator, k.p)


def legendre_factorial_val(m: int, p: int) -> int:
    """|m!|_p = sum_i floor(m / p^i)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return int(multiplicity_in_factorial(p, m))


def unit_residue(k: LocalInt, modulus: int) -> int:
    """The unit part k / p^{val} reduced modulo `modulus` (a power of p)."""
    v = val_p(k)
    num = k.numerator // k.p**v
    return num * pow(k.denominator, -1, modulus) % modulus


def in_D_p(k: LocalInt) -> bool:
    """k = 0 or k is a p-adic square (for p = 2 only unit squares, i.e. k = 1 mod 8)."""
    if k.value == 0:
        return True
    v = val_p(k)
    if k.p == 2:
        return v == 0 and unit_residue(k, 8) == 1
    if v % 2:
        return False
    # Euler's criterion decides the unit part; Hensel lifts a root mod p to Z_p.
    return is_quad_residue(unit_residue(k, k.p), k.p)


def d_p_class(r: int, p: int, c: int) -> bool:
    """True iff every element of the class r mod p^c lies in D_p.

    Classes with valuation >= c are left to the p^t branch and report False.
    """
    v = int_val(r, p)
    if v >= c:
        return False
    if p == 2:
        return v == 0 and c >= 3 and r % 8 == 1
    if v % 2:
        return False
    return is_quad_residue((r // p**v) % p, p)
