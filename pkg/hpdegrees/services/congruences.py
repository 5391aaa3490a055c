"""The congruence system C_1..C_n, its p-local closed form, and the exponent functions.

C_m:  prod_{i<m} (k - i^2) = 0  mod (2m)!   (m even)
                                mod (2m)!/2 (m odd)
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from functools import lru_cache

from sympy import primerange
from sympy.ntheory.primetest import is_square

from hpdegrees.errors import FormulaMismatch, NotLocalError, ScanGuardExceeded, UnsoundModulusError
from hpdegrees.models import CongruenceVerdict, ExponentRow, LevelEvidence, LocalVerdict, ProofStatus
from hpdegrees.services import scans
from hpdegrees.services.padic import (
    LocalInt,
    ResidueClass,
    Valuation,
    as_fraction,
    in_D_p,
    int_val,
    legendre_factorial_val,
    require_prime,
    val_p,
)

logger = logging.getLogger(__name__)


def _check_level(n: int) -> None:
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")


@lru_cache(maxsize=None)
def relevant_primes(n: int) -> tuple[int, ...]:
    """Primes p <= 2n-1; no other prime divides any modulus of C_1..C_n."""
    return tuple(primerange(2, 2 * n))


@lru_cache(maxsize=None)
def modulus_val(m: int, p: int) -> int:
    _check_level(m)
    v = legendre_factorial_val(2 * m, p)
    return v - 1 if (m % 2 and p == 2) else v


@lru_cache(maxsize=None)
def congruence_modulus(m: int) -> int:
    _check_level(m)
    full = math.factorial(2 * m)
    return full // 2 if m % 2 else full


def scan_precision(p: int, n: int) -> int:
    """c = max_{m<=n} modulus_val(m, p); C_1..C_n at p depend only on k mod p^c."""
    return max(modulus_val(m, p) for m in range(1, n + 1))


def _factor_val(k: LocalInt, i: int) -> Valuation:
    # k - i^2 = (num - i^2 den) / den and den is a p-unit.
    return int_val(k.numerator - i * i * k.denominator, k.p)


def satisfies_C(k: LocalInt, m: int) -> tuple[bool, Valuation]:
    total = sum((_factor_val(k, i) for i in range(m)), 0)
    return total >= modulus_val(m, k.p), total


def fg_local_direct(k: LocalInt, n: int) -> CongruenceVerdict:
    _check_level(n)
    per_level = []
    total: Valuation = 0
    for m in range(1, n + 1):
        total += _factor_val(k, m - 1)
        needed = modulus_val(m, k.p)
        per_level.append(
            LevelEvidence(m=m, product_valuation=total, modulus_valuation=needed, satisfied=total >= needed)
        )
    return CongruenceVerdict(
        k=k.value,
        n=n,
        p=k.p,
        per_level=per_level,
        overall=all(level.satisfied for level in per_level),
    )


@lru_cache(maxsize=None)
def e_exponent(p: int, n: int) -> int:
    _check_level(n)
    if n == 1:
        return 0
    if p == 2:
        return 1 + 2 * (n.bit_length() - 1)
    count = 0
    power = p
    while power <= n:
        count += 1
        power *= p
    shifted = (p + 1) // 2
    while shifted <= n:
        count += 1
        shifted *= p
    return count


@lru_cache(maxsize=None)
def f_exponent(p: int, n: int) -> int:
    _check_level(n)
    if n <= 5:
        return e_exponent(p, n)
    if p == 2:
        return 4 * (n // 2) - 3
    return -math.floor(1 - Fraction(2 * n - 2, p - 1))


def fg_local_closed(k: LocalInt, n: int) -> bool:
    return in_D_p(k) or val_p(k) >= e_exponent(k.p, n)


def constructed_range(k: LocalInt, n: int) -> bool:
    """k in D_p or |k|_p >= f(p, n): degrees for which self maps of the localization are built."""
    return in_D_p(k) or val_p(k) >= f_exponent(k.p, n)


def proven_status(p: int, n: int) -> ProofStatus:
    if n <= 5:
        return ProofStatus.PROVEN_N_LE_5
    if p != 2 and 2 * n < (2 * p + 1) * (p - 1):
        return ProofStatus.PROVEN_ODD_RANGE
    return ProofStatus.OPEN


def exponent_row(p: int, n: int) -> ExponentRow:
    return ExponentRow(p=p, n=n, e=e_exponent(p, n), f=f_exponent(p, n), status=proven_status(p, n))


def e_f_gaps(primes, nmax: int) -> list[ExponentRow]:
    """Cells where the constructed exponent f falls below the obstruction exponent e."""
    rows = (exponent_row(p, n) for p in sorted(primes) for n in range(1, nmax + 1))
    return [row for row in rows if row.f < row.e]


def e_f_sharp(primes, nmax: int) -> list[ExponentRow]:
    """Cells past n = 5 where the constructed exponent meets the obstruction exponent."""
    rows = (exponent_row(p, n) for p in sorted(primes) for n in range(6, nmax + 1))
    return [row for row in rows if row.f == row.e]


def local_verdict(k: LocalInt, n: int) -> LocalVerdict:
    """Both local routes for one prime; raises FormulaMismatch if they disagree."""
    direct = fg_local_direct(k, n)
    closed = fg_local_closed(k, n)
    if closed != direct.overall:
        raise FormulaMismatch(f"k={k} n={n} p={k.p}: closed form {closed}, congruences {direct.overall}")
    return LocalVerdict(
        k=direct.k,
        n=direct.n,
        p=direct.p,
        per_level=direct.per_level,
        overall=direct.overall,
        valuation=val_p(k),
        in_d_p=in_D_p(k),
        e=e_exponent(k.p, n),
        f=f_exponent(k.p, n),
        closed_form=closed,
        constructed_range=constructed_range(k, n),
        status=proven_status(k.p, n),
    )


def localize(k: int | Fraction | str, n: int) -> list[LocalInt]:
    """k viewed in Z_(p) for every relevant prime; rejects denominators meeting one."""
    value = as_fraction(k)
    bad = [p for p in relevant_primes(n) if value.denominator % p == 0]
    if bad:
        raise NotLocalError(f"{value} is not local at prime(s) {bad} relevant to level {n}")
    return [LocalInt(value, p) for p in relevant_primes(n)]


def direct_divisibility(k: int, n: int) -> bool:
    """prod_{i<m}(k - i^2) divisible by the C_m modulus for every m <= n (big-integer route)."""
    return fg_depth(k, n) == n


def fg_depth(k: int, nmax: int) -> int:
    """Largest n <= nmax with k in FG_n."""
    product = 1
    for m in range(1, nmax + 1):
        product *= k - (m - 1) ** 2
        if product % congruence_modulus(m):
            return m - 1
    return nmax


def fg_global(k: int | Fraction | str, n: int) -> bool:
    _check_level(n)
    local = all(fg_local_direct(lk, n).overall for lk in localize(k, n))
    value = as_fraction(k)
    if value.denominator == 1:
        direct = direct_divisibility(value.numerator, n)
        if direct != local:
            raise FormulaMismatch(f"k={value} n={n}: local route {local}, divisibility {direct}")
    return local


def fg_infinity(k: int | Fraction | str) -> bool:
    """Integers in every FG_n: zero and the odd squares."""
    value = as_fraction(k)
    if value.denominator != 1:
        return False
    x = value.numerator
    return x == 0 or (x > 0 and x % 2 == 1 and is_square(x))


def minimal_modulus(n: int) -> int:
    """Least modulus at which membership in FG_n is a residue-class property."""
    _check_level(n)
    return math.prod(p ** scan_precision(p, n) for p in relevant_primes(n))


def fg_residues(n: int, modulus: int, guard: int | None = None, jobs: int = 1) -> list[int]:
    _check_level(n)
    if modulus < 1:
        raise UnsoundModulusError(f"modulus must be >= 1, got {modulus}")
    missing = [p for p in relevant_primes(n) if modulus % p ** scan_precision(p, n)]
    if missing:
        raise UnsoundModulusError(
            f"modulus {modulus} does not resolve C_1..C_{n} at prime(s) {missing}; "
            f"it must be a multiple of {minimal_modulus(n)}"
        )
    if guard is not None and modulus > guard:
        raise ScanGuardExceeded(modulus, guard)
    moduli = [congruence_modulus(m) for m in range(1, n + 1)]
    return scans.residues_mod(moduli, modulus, jobs)


def e_exponent_bruteforce(p: int, n: int, guard: int = 2**24, jobs: int = 1) -> int:
    """Smallest t with every class of valuation >= t solving C_1..C_n, found by exhaustive scan.

    Also checks the full local description: the solution classes of valuation
    below t are exactly the classes lying in D_p.
    """
    require_prime(p)
    _check_level(n)
    c = scan_precision(p, n)
    size = p**c
    if size > guard:
        raise ScanGuardExceeded(size, guard)
    mods = [modulus_val(m, p) for m in range(1, n + 1)]
    solutions = scans.local_solution_classes(p, c, mods, jobs)
    if 0 not in solutions:
        raise FormulaMismatch(f"p={p} n={n}: zero class fails the congruences")

    classes = [ResidueClass(p, c, r) for r in range(size)]
    outside = [cls.valuation() for cls in classes if cls.residue not in solutions]
    t = max(outside) + 1 if outside else 0

    for cls in classes[1:]:
        r, in_d = cls.residue, cls.in_d_p()
        if r in solutions and cls.valuation() < t and not in_d:
            raise FormulaMismatch(f"p={p} n={n}: class {r} mod {p}^{c} solves but is neither in D_p nor deep")
        if in_d and r not in solutions:
            raise FormulaMismatch(f"p={p} n={n}: class {r} mod {p}^{c} lies in D_p but fails")
    logger.info("Scan p=%d n=%d: threshold %d over %d classes", p, n, t, size)
    return t
