"""K-theory of HP^n = Z[x]/x^{n+1}, its Adams operations, and the degree criterion.

A degree k passes the criterion at level n iff the unique rational ring
endomorphism phi with phi(x) = kx + ... commuting with every psi^l has integer
coefficients, even at even powers of x (the image of KSp).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_mul
from sympy.polys.rings import ring

from hpdegrees.errors import FormulaMismatch, LevelMismatchError, NonIntegralError
from hpdegrees.models import EndoVerdict
from hpdegrees.services.padic import as_fraction

logger = logging.getLogger(__name__)

EIGEN_GENERATOR = 2
COMMUTATION_WITNESSES = (2, 3)

_R, _x = ring("x", QQ)


@dataclass(frozen=True)
class TruncPoly:
    """sum_{j=1..level} coeffs[j-1] var^j in Q[var]/var^{level+1}."""

    level: int
    coeffs: tuple[Fraction, ...]
    var: str = "x"

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        if len(self.coeffs) != self.level:
            raise ValueError(f"expected {self.level} coefficients, got {len(self.coeffs)}")

    @classmethod
    def of(cls, coeffs, var: str = "x") -> TruncPoly:
        return cls(len(coeffs), tuple(Fraction(c) for c in coeffs), var)

    @classmethod
    def zero(cls, level: int, var: str = "x") -> TruncPoly:
        return cls(level, (Fraction(0),) * level, var)

    @classmethod
    def identity(cls, level: int, var: str = "x") -> TruncPoly:
        return cls(level, (Fraction(1),) + (Fraction(0),) * (level - 1), var)

    def coeff(self, j: int) -> Fraction:
        return self.coeffs[j - 1]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_ring(self):
        return _R.from_dict(
            {(j,): QQ(c.numerator, c.denominator) for j, c in enumerate(self.coeffs, start=1) if c}
        )

    @classmethod
    def from_ring(cls, element, level: int, var: str = "x") -> TruncPoly:
        coeffs = [Fraction(0)] * level
        for (exp,), c in element.terms():
            if exp == 0:
                raise ValueError("reduced K-theory classes have no constant term")
            if exp <= level:
                coeffs[exp - 1] = Fraction(int(c.numerator), int(c.denominator))
        return cls(level, tuple(coeffs), var)

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs, start=1):
            if not c:
                continue
            mono = self.var if j == 1 else f"{self.var}^{j}"
            if c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            elif c.denominator == 1:
                terms.append(f"{c}{mono}")
            else:
                terms.append(f"{c} {mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def _coeff_at_square(square: Fraction | int, j: int) -> Fraction:
    # 2 * prod_{i<j} (square - i^2) / (2j)!
    return Fraction(2 * math.prod(square - i * i for i in range(j)), math.factorial(2 * j))


def adams_coeff(l: int, j: int) -> Fraction:
    """Coefficient of x^j in psi^l(x)."""
    if j < 1:
        raise ValueError(f"index must be >= 1, got {j}")
    return _coeff_at_square(l * l, j)


@lru_cache(maxsize=None)
def psi(l: int, n: int) -> TruncPoly:
    return TruncPoly(n, tuple(adams_coeff(l, j) for j in range(1, n + 1)))


def powers(f: TruncPoly) -> list[TruncPoly]:
    """[f, f^2, ..., f^level], truncated."""
    base = f.to_ring()
    prec = f.level + 1
    out = []
    current = base
    for _ in range(f.level):
        out.append(TruncPoly.from_ring(current, f.level, f.var))
        current = rs_mul(current, base, _x, prec)
    return out


def substitute(g: TruncPoly, f: TruncPoly) -> TruncPoly:
    """g with x replaced by f: the ring endomorphism x -> f applied to g."""
    if g.level != f.level:
        raise LevelMismatchError(f"levels differ: {g.level} vs {f.level}")
    prec = f.level + 1
    base = f.to_ring()
    current = base
    total = _R.zero
    for c in g.coeffs:
        if c:
            total += current * QQ(c.numerator, c.denominator)
        current = rs_mul(current, base, _x, prec)
    return TruncPoly.from_ring(total, g.level, g.var)


@lru_cache(maxsize=None)
def eigenvector_v1(l: int, n: int) -> TruncPoly:
    """The v = x + a_2 x^2 + ... with psi^l(v) = l^2 v.

    psi^l is triangular on {x^j} with diagonal l^{2j}, so the a_j follow by
    back-substitution.
    """
    if l < 2:
        raise ValueError(f"eigenvalues of psi^{l} collide; need l >= 2")
    columns = powers(psi(l, n))
    lam = l * l
    v = [Fraction(1)]
    for j in range(2, n + 1):
        s = sum((v[i - 1] * columns[i - 1].coeff(j) for i in range(1, j)), Fraction(0))
        v.append(s / (lam - lam**j))
    return TruncPoly(n, tuple(v))


@lru_cache(maxsize=None)
def _eigenbasis(n: int) -> tuple[tuple[TruncPoly, ...], tuple[Fraction, ...]]:
    # v^1..v^n and the t_j with x = sum_j t_j v^j (v^j = x^j + higher terms).
    basis = powers(eigenvector_v1(EIGEN_GENERATOR, n))
    t = [Fraction(1)]
    for j in range(2, n + 1):
        t.append(-sum((t[i - 1] * basis[i - 1].coeff(j) for i in range(1, j)), Fraction(0)))
    return tuple(basis), tuple(t)


def phi_endomorphism(k: int | Fraction | str, n: int) -> TruncPoly:
    """phi(x) for the unique Adams-commuting endomorphism with phi(x) = kx + ..."""
    k = as_fraction(k)
    basis, t = _eigenbasis(n)
    coeffs = [Fraction(0)] * n
    scale = Fraction(1)
    for j in range(1, n + 1):
        scale *= k
        weight = t[j - 1] * scale
        if weight:
            for idx, c in enumerate(basis[j - 1].coeffs):
                coeffs[idx] += weight * c
    phi = TruncPoly(n, tuple(coeffs))

    if phi.coeff(1) != k:
        raise FormulaMismatch(f"phi({k}, {n}) has leading coefficient {phi.coeff(1)}")
    for l in COMMUTATION_WITNESSES:
        op = psi(l, n)
        if substitute(phi, op) != substitute(op, phi):
            raise FormulaMismatch(f"phi({k}, {n}) does not commute with psi^{l}")
    return phi


def phi_closed_form(k: int | Fraction | str, n: int) -> TruncPoly:
    """Coefficient j is 2 prod_{i<j}(k - i^2) / (2j)!, the Adams coefficient at l^2 = k."""
    k = as_fraction(k)
    return TruncPoly(n, tuple(_coeff_at_square(k, j) for j in range(1, n + 1)))


def symplectic_parity_ok(f: TruncPoly) -> bool:
    """Coefficients at even powers are even (image of the forgetful map from KSp)."""
    if not f.is_integral():
        raise NonIntegralError(f"non-integral class {f}")
    return all(f.coeff(j) % 2 == 0 for j in range(2, f.level + 1, 2))


def fg_ktheory(k: int | Fraction | str, n: int) -> EndoVerdict:
    k = as_fraction(k)
    phi = phi_endomorphism(k, n)
    integral = phi.is_integral()
    parity_ok = symplectic_parity_ok(phi) if integral else False
    return EndoVerdict(
        k=k,
        n=n,
        phi=list(phi.coeffs),
        integral=integral,
        parity_ok=parity_ok,
        in_fg=integral and parity_ok,
    )


def psi_ko(l: int, n: int) -> TruncPoly:
    """psi^l on KO in the generator y, transported along x -> 2y."""
    return TruncPoly(n, tuple(adams_coeff(l, j) * 2 ** (j - 1) for j in range(1, n + 1)), var="y")


def complexify(f: TruncPoly) -> TruncPoly:
    """x -> 2y on coefficients."""
    return TruncPoly(f.level, tuple(c * 2**j for j, c in enumerate(f.coeffs, start=1)), var="y")


def forget(g: TruncPoly) -> TruncPoly:
    """y z^k -> x^{2k+1}, z^k -> 2 x^{2k}, reading y^j through z = 4y^2."""
    coeffs = []
    for j, c in enumerate(g.coeffs, start=1):
        factor = Fraction(2 if j % 2 == 0 else 1, 4 ** (j // 2))
        coeffs.append(c * factor)
    return TruncPoly(g.level, tuple(coeffs), var="x")
