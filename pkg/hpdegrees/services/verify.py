"""Verification suites: closed forms against scans, and K-theory against congruences.

Each suite returns a VerifyOutcome; a guard-sized scan is skipped with a reason,
any other disagreement is a failure.
"""
from __future__ import annotations

import logging
import random
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Any, Callable

from hpdegrees.errors import FormulaMismatch, ScanGuardExceeded, UnsoundModulusError
from hpdegrees.models import ProofStatus, ReportConfig, Suite, SkippedCase, VerifyFailure, VerifyOutcome
from hpdegrees.services.congruences import (
    e_exponent,
    e_exponent_bruteforce,
    e_f_gaps,
    e_f_sharp,
    f_exponent,
    fg_depth,
    fg_global,
    fg_infinity,
    fg_local_closed,
    fg_local_direct,
    fg_residues,
    modulus_val,
    proven_status,
    relevant_primes,
    scan_precision,
)
from hpdegrees.services.ktheory import (
    adams_coeff,
    complexify,
    eigenvector_v1,
    fg_ktheory,
    forget,
    phi_closed_form,
    phi_endomorphism,
    psi,
    psi_ko,
    substitute,
)
from hpdegrees.services.padic import LocalInt, in_D_p, legendre_factorial_val, val_p

logger = logging.getLogger(__name__)

SEED = 20

# exponent suite
EXPONENT_GRID = [(2, n) for n in range(1, 11)] + [(p, n) for p in (3, 5, 7) for n in range(1, 13)]
E_VALUES = {
    (2, 1): 0, (2, 2): 3, (2, 3): 3, (2, 4): 5, (2, 5): 5, (2, 6): 5, (2, 7): 5, (2, 8): 7,
    (3, 6): 3, (3, 9): 4, (5, 2): 0, (7, 4): 1,
}
F_VALUES = {(2, 6): 9, (3, 6): 4, (5, 6): 2}
STATUS_VALUES = {
    (2, 5): ProofStatus.PROVEN_N_LE_5,
    (2, 6): ProofStatus.OPEN,
    (3, 6): ProofStatus.PROVEN_ODD_RANGE,
    (3, 7): ProofStatus.OPEN,
    (5, 6): ProofStatus.PROVEN_ODD_RANGE,
}
E_LE_F_PRIMES = (2, 3, 5)
GAP_REPORT_PRIMES = (7, 11, 13)
EXPONENT_LEVELS = 40
IDENTITY_RANGE = 200

# congruence suite
CONGRUENCE_LEVELS = 8
CONGRUENCE_SAMPLES = 10_000
SAMPLE_BOUND = 10**5
MONOTONE_RANGE = 100
RESIDUE_EXAMPLES = {(2, 24): [0, 1, 9, 16], (1, 1): [0], (2, 48): [0, 1, 9, 16, 24, 25, 33, 40]}
MEMBERSHIP_EXAMPLES = {(9, 10): True, (4, 2): False, (16, 2): True, (16, 3): True, (16, 4): False}

# ktheory suite
SEMIGROUP_RANGE = range(1, 6)
KTHEORY_LEVELS = 8
INTEGRALITY_RANGE = range(-20, 21)
INTEGRALITY_INDEX = 12
CROSS_ORACLE_RANGE = 2000
CROSS_ORACLE_LEVELS = 5
RATIONAL_DEGREES = (Fraction(2), Fraction(-3), Fraction(9), Fraction(1, 2), Fraction(-5, 7), Fraction(4, 3))


class _Recorder:
    def __init__(self, suite: Suite):
        self.outcome = VerifyOutcome(suite=suite.value)

    def expect(self, case: str, expected: Any, got: Any) -> bool:
        self.outcome.cases_run += 1
        if expected == got:
            return True
        self.outcome.failures.append(VerifyFailure(case=case, expected=str(expected), got=str(got)))
        logger.warning("Verification failure [%s] %s: expected %s, got %s", self.outcome.suite, case, expected, got)
        return False

    def attempt(self, case: str, expected: Any, compute: Callable[[], Any]) -> bool:
        try:
            got = compute()
        except ScanGuardExceeded as exc:
            self.skip(case, str(exc))
            return True
        except FormulaMismatch as exc:
            return self.expect(case, expected, f"FormulaMismatch: {exc}")
        return self.expect(case, expected, got)

    def skip(self, case: str, reason: str) -> None:
        self.outcome.skipped.append(SkippedCase(case=case, reason=reason))
        logger.warning("Skipped [%s] %s: %s", self.outcome.suite, case, reason)

    def note(self, text: str) -> None:
        self.outcome.notes.append(text)


# --- exponent ---

def exponent_suite(config: ReportConfig) -> VerifyOutcome:
    rec = _Recorder(Suite.exponent)

    for p, n in EXPONENT_GRID:
        rec.attempt(
            f"e_exponent_bruteforce(p={p}, n={n})",
            e_exponent(p, n),
            lambda: e_exponent_bruteforce(p, n, guard=config.scan_guard, jobs=config.jobs),
        )

    for (p, n), value in E_VALUES.items():
        rec.expect(f"e({p},{n})", value, e_exponent(p, n))
    for (p, n), value in F_VALUES.items():
        rec.expect(f"f({p},{n})", value, f_exponent(p, n))
    for (p, n), status in STATUS_VALUES.items():
        rec.expect(f"status({p},{n})", status, proven_status(p, n))

    for p in E_LE_F_PRIMES + GAP_REPORT_PRIMES:
        for n in range(1, EXPONENT_LEVELS + 1):
            if n <= 5:
                rec.expect(f"e({p},{n}) = f({p},{n})", e_exponent(p, n), f_exponent(p, n))
            elif p in E_LE_F_PRIMES:
                rec.expect(f"e({p},{n}) <= f({p},{n})", True, e_exponent(p, n) <= f_exponent(p, n))
            if n > 1:
                rec.expect(f"e({p},{n-1}) <= e({p},{n})", True, e_exponent(p, n - 1) <= e_exponent(p, n))
    for row in e_f_gaps(GAP_REPORT_PRIMES, EXPONENT_LEVELS):
        rec.note(f"f < e at p={row.p} n={row.n} (e={row.e}, f={row.f})")
    for row in e_f_sharp(E_LE_F_PRIMES + GAP_REPORT_PRIMES, EXPONENT_LEVELS):
        rec.note(f"e = f at p={row.p} n={row.n} (e=f={row.e})")

    for m in range(1, IDENTITY_RANGE + 1):
        rec.expect(
            f"|(4m)!|_2 = 2m + |(2m)!|_2 at m={m}",
            2 * m + legendre_factorial_val(2 * m, 2),
            legendre_factorial_val(4 * m, 2),
        )
        rec.expect(f"|(4m+2)!/2|_2 = |(4m)!|_2 at m={m}", modulus_val(2 * m, 2), modulus_val(2 * m + 1, 2))
    return rec.outcome


# --- congruence ---

def _route_consistency(rec: _Recorder, k: Fraction, nmax: int) -> None:
    prefix: dict[tuple[int, int], bool] = {}
    for p in relevant_primes(nmax):
        lk = LocalInt(k, p)
        levels = fg_local_direct(lk, nmax).per_level
        ok = True
        for n in range(1, nmax + 1):
            ok = ok and levels[n - 1].satisfied
            prefix[p, n] = ok
            if p <= 2 * n - 1:
                rec.expect(f"closed form k={k} p={p} n={n}", ok, fg_local_closed(lk, n))
    if k.denominator == 1:
        depth = fg_depth(k.numerator, nmax)
        for n in range(1, nmax + 1):
            local = all(prefix[p, n] for p in relevant_primes(n))
            rec.expect(f"divisibility k={k} n={n}", local, depth >= n)


def _congruence_samples(rng: random.Random) -> list[Fraction]:
    samples = [Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND)) for _ in range(CONGRUENCE_SAMPLES)]
    for p in relevant_primes(CONGRUENCE_LEVELS):
        for t in range(12):
            samples += [Fraction(p**t * u) for u in (1, -1, 2, 3, 5, 7) if u % p]
    # denominators prime to every relevant prime
    samples += [Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND), b) for b in (17, 19, 23) for _ in range(20)]
    return samples


def _residue_shape(config: ReportConfig) -> tuple[int, bool, bool]:
    # 48 classes mod 720; 288 fails at 5.
    residues = fg_residues(3, 720, config.scan_guard)
    return len(residues), {0, 1, 9, 25} <= set(residues), 288 in residues


def _rejects_unsound_modulus(n: int, modulus: int) -> bool:
    try:
        fg_residues(n, modulus)
    except UnsoundModulusError:
        return True
    return False


def congruence_suite(config: ReportConfig) -> VerifyOutcome:
    rec = _Recorder(Suite.congruence)
    rng = random.Random(SEED)

    for k in _congruence_samples(rng):
        _route_consistency(rec, k, CONGRUENCE_LEVELS)

    for k in range(-MONOTONE_RANGE, MONOTONE_RANGE + 1):
        members = [fg_global(k, n) for n in range(1, CONGRUENCE_LEVELS + 1)]
        for n in range(1, CONGRUENCE_LEVELS):
            rec.expect(f"FG_{n+1} within FG_{n} at k={k}", True, members[n - 1] or not members[n])

    for j in range(1, 102, 2):
        rec.expect(f"fg_infinity({j * j})", True, fg_infinity(j * j))
        for n in range(1, 13):
            rec.attempt(f"odd square {j * j} at n={n}", True, lambda: fg_global(j * j, n))
    for n in range(1, 41):
        rec.attempt(f"zero at n={n}", True, lambda: fg_global(0, n))
    for (k, n), member in MEMBERSHIP_EXAMPLES.items():
        rec.attempt(f"fg_global({k}, {n})", member, lambda: fg_global(k, n))

    rec.expect("in_D_p(17, 2)", True, in_D_p(LocalInt(Fraction(17), 2)))
    rec.expect("in_D_p(7, 3)", True, in_D_p(LocalInt(Fraction(7), 3)))
    rec.expect("in_D_p(18, 3)", False, in_D_p(LocalInt(Fraction(18), 3)))
    rec.expect("val_p(12/5, 2)", 2, val_p(LocalInt(Fraction(12, 5), 2)))

    for (n, modulus), residues in RESIDUE_EXAMPLES.items():
        rec.attempt(f"fg_residues({n}, {modulus})", residues, lambda: fg_residues(n, modulus, config.scan_guard))
    rec.attempt("fg_residues(3, 720) shape", (48, True, False), lambda: _residue_shape(config))
    rec.expect("fg_residues(2, 12) rejected", True, _rejects_unsound_modulus(2, 12))

    for p in (2, 3, 5, 7):
        for n in range(1, 7):
            size = p ** scan_precision(p, n)
            for _ in range(20):
                r, t = rng.randrange(size), rng.randint(-50, 50)
                rec.expect(
                    f"class {r} mod {p}^c at n={n} shifted by {t}",
                    fg_local_direct(LocalInt(Fraction(r), p), n).overall,
                    fg_local_direct(LocalInt(Fraction(r + size * t), p), n).overall,
                )
    return rec.outcome


# --- ktheory ---

def ktheory_suite(config: ReportConfig) -> VerifyOutcome:
    rec = _Recorder(Suite.ktheory)

    for n in range(1, KTHEORY_LEVELS + 1):
        for l, m in product(SEMIGROUP_RANGE, repeat=2):
            rec.expect(f"psi^{l} o psi^{m} = psi^{l * m} at n={n}", psi(l * m, n), substitute(psi(l, n), psi(m, n)))
        rec.expect(
            f"psi^2 psi^3 = psi^3 psi^2 at n={n}",
            substitute(psi(3, n), psi(2, n)),
            substitute(psi(2, n), psi(3, n)),
        )
        for l in (3, 5):
            rec.expect(f"v(psi^{l}) = v(psi^2) at n={n}", eigenvector_v1(2, n), eigenvector_v1(l, n))

    for l in INTEGRALITY_RANGE:
        for j in range(1, INTEGRALITY_INDEX + 1):
            rec.expect(f"adams_coeff({l}, {j}) integral", 1, adams_coeff(l, j).denominator)

    for n in range(1, 7):
        for l in range(0, 6):
            rec.attempt(f"phi({l * l}, {n}) = psi^{l}", psi(l, n), lambda: phi_endomorphism(l * l, n))
        for k in RATIONAL_DEGREES + tuple(Fraction(i) for i in range(-10, 11)):
            rec.attempt(f"phi({k}, {n}) closed form", phi_closed_form(k, n), lambda: phi_endomorphism(k, n))

    rec.expect("phi(9, 2)", (Fraction(9), Fraction(6)), phi_endomorphism(9, 2).coeffs)
    rec.expect("phi(2, 2)", (Fraction(2), Fraction(1, 6)), phi_endomorphism(2, 2).coeffs)

    for n in range(1, 6):
        for k, k2 in combinations_with_replacement(RATIONAL_DEGREES, 2):
            rec.expect(
                f"phi({k}) o phi({k2}) = phi({k * k2}) at n={n}",
                phi_endomorphism(k * k2, n),
                substitute(phi_endomorphism(k, n), phi_endomorphism(k2, n)),
            )

    for n in range(1, CROSS_ORACLE_LEVELS + 1):
        for k in range(-CROSS_ORACLE_RANGE, CROSS_ORACLE_RANGE + 1):
            rec.attempt(f"K-theory vs congruences k={k} n={n}", fg_global(k, n), lambda: fg_ktheory(k, n).in_fg)

    for n in range(1, 7):
        for l in range(1, 11):
            ko = psi_ko(l, n)
            rec.expect(f"psi_ko({l}, {n}) integral", True, ko.is_integral())
            rec.expect(
                f"complexify(psi^{l}) = 2 psi_ko^{l} at n={n}",
                tuple(2 * c for c in ko.coeffs),
                complexify(psi(l, n)).coeffs,
            )
            rec.expect(
                f"forget o complexify = 2 on psi^{l} at n={n}",
                tuple(2 * c for c in psi(l, n).coeffs),
                forget(complexify(psi(l, n))).coeffs,
            )
    return rec.outcome


SUITES: dict[Suite, Callable[[ReportConfig], VerifyOutcome]] = {
    Suite.exponent: exponent_suite,
    Suite.congruence: congruence_suite,
    Suite.ktheory: ktheory_suite,
}


def cmd_verify(suite: Suite | str = Suite.all, config: ReportConfig | None = None) -> list[VerifyOutcome]:
    config = config or ReportConfig()
    suite = Suite(suite)
    chosen = list(SUITES) if suite == Suite.all else [suite]
    outcomes = []
    for name in chosen:
        outcome = SUITES[name](config)
        logger.info(
            "Suite %s: %d cases, %d failures, %d skipped",
            outcome.suite, outcome.cases_run, len(outcome.failures), len(outcome.skipped),
        )
        outcomes.append(outcome)
    return outcomes
