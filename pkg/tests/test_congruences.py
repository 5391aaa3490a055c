from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpdegrees.errors import NotLocalError, ScanGuardExceeded, UnsoundModulusError
from hpdegrees.models import ProofStatus
from hpdegrees.services.congruences import (
    congruence_modulus,
    constructed_range,
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
    local_verdict,
    localize,
    minimal_modulus,
    modulus_val,
    proven_status,
    relevant_primes,
    satisfies_C,
    scan_precision,
)
from hpdegrees.services.padic import LocalInt


def test_modulus_valuations():
    assert [modulus_val(m, 2) for m in (1, 2, 3, 4)] == [0, 3, 3, 7]
    assert modulus_val(2, 3) == 1
    assert modulus_val(3, 3) == 2
    assert modulus_val(3, 5) == 1
    assert [congruence_modulus(m) for m in (1, 2, 3)] == [1, 24, 360]


def test_relevant_primes():
    assert relevant_primes(1) == ()
    assert relevant_primes(2) == (2, 3)
    assert relevant_primes(4) == (2, 3, 5, 7)


def test_satisfies_C_reports_the_product_valuation():
    assert satisfies_C(LocalInt.of(16, 2), 4) == (False, 6)
    assert satisfies_C(LocalInt.of(16, 2), 3) == (True, 6)


@settings(max_examples=500)
@given(
    st.integers(min_value=-10**6, max_value=10**6),
    st.sampled_from([1, 17, 19, 23]),
    st.sampled_from([2, 3, 5, 7, 11]),
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=-10**4, max_value=10**4),
)
def test_level_verdict_depends_only_on_k_mod_the_modulus(a, b, p, m, t):
    k = Fraction(a, b)
    shifted = k + p ** modulus_val(m, p) * t
    assert satisfies_C(LocalInt(shifted, p), m)[0] == satisfies_C(LocalInt(k, p), m)[0]


def test_direct_verdict_names_the_failing_level():
    verdict = fg_local_direct(LocalInt.of(16, 2), 4)
    assert not verdict.overall
    assert verdict.failing_level() == 4
    assert [lvl.modulus_valuation for lvl in verdict.per_level] == [0, 3, 3, 7]


def test_e_exponent_table_values():
    assert [e_exponent(2, n) for n in range(1, 9)] == [0, 3, 3, 5, 5, 5, 5, 7]
    assert e_exponent(3, 6) == 3
    assert e_exponent(3, 9) == 4
    assert e_exponent(5, 2) == 0
    assert e_exponent(7, 4) == 1


def test_f_exponent_table_values():
    assert f_exponent(2, 6) == 9
    assert f_exponent(3, 6) == 4
    assert f_exponent(5, 6) == 2
    assert all(f_exponent(p, n) == e_exponent(p, n) for p in (2, 3, 5, 7) for n in range(1, 6))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_e_never_exceeds_f_for_small_primes(p):
    assert all(e_exponent(p, n) <= f_exponent(p, n) for n in range(1, 41))


def test_e_f_gaps_for_larger_primes():
    assert e_f_gaps((2, 3, 5), 40) == []
    cells = [(row.p, row.n) for row in e_f_gaps((13, 7, 11), 13)]
    assert cells == [(7, 7), (11, 6), (11, 11), (13, 7), (13, 13)]


def test_e_f_sharp_rows():
    cells = [(row.p, row.n) for row in e_f_sharp((2, 3, 5, 7, 13), 40)]
    assert {(5, 6), (5, 7), (7, 6), (13, 19)} <= set(cells)
    assert all(n > 5 for _, n in cells)
    assert all(p != 2 for p, _ in cells)


def test_proven_status():
    assert proven_status(2, 5) == ProofStatus.PROVEN_N_LE_5
    assert proven_status(2, 6) == ProofStatus.OPEN
    assert proven_status(3, 6) == ProofStatus.PROVEN_ODD_RANGE
    assert proven_status(3, 7) == ProofStatus.OPEN
    assert proven_status(5, 6) == ProofStatus.PROVEN_ODD_RANGE


@settings(max_examples=300)
@given(st.integers(min_value=-10**6, max_value=10**6), st.integers(min_value=1, max_value=8))
def test_closed_form_matches_congruences(k, n):
    for p in relevant_primes(n):
        lk = LocalInt.of(k, p)
        assert fg_local_closed(lk, n) == fg_local_direct(lk, n).overall


@given(
    st.sampled_from([2, 3, 5, 7]),
    st.integers(min_value=0, max_value=10),
    st.sampled_from([1, -1, 3, 5, 7, 11]),
    st.integers(min_value=1, max_value=8),
)
def test_closed_form_matches_congruences_on_prime_powers(p, t, u, n):
    lk = LocalInt.of(p**t * u, p)
    assert fg_local_closed(lk, n) == fg_local_direct(lk, n).overall


@settings(max_examples=100)
@given(st.integers(min_value=-10**5, max_value=10**5), st.integers(min_value=1, max_value=7))
def test_membership_is_monotone_in_n(k, n):
    if fg_global(k, n + 1):
        assert fg_global(k, n)


@pytest.mark.parametrize(
    "k, n, expected",
    [(9, 10, True), (4, 2, False), (16, 2, True), (16, 3, True), (16, 4, False), (0, 12, True)],
)
def test_fg_global_examples(k, n, expected):
    assert fg_global(k, n) is expected


@pytest.mark.parametrize("j", range(1, 102, 2))
def test_odd_squares_pass_every_level(j):
    assert all(fg_global(j * j, n) for n in range(1, 13))
    assert fg_infinity(j * j)


def test_fg_global_rejects_denominators_at_relevant_primes():
    with pytest.raises(NotLocalError):
        fg_global(Fraction(1, 3), 2)
    assert fg_global("1/3", 1)


def test_fg_infinity():
    assert fg_infinity(0)
    assert not fg_infinity(4)
    assert not fg_infinity(-9)
    assert not fg_infinity(2)
    assert not fg_infinity("1/9")


def test_fg_depth():
    assert fg_depth(16, 12) == 3
    assert fg_depth(9, 12) == 12
    assert fg_depth(4, 12) == 1
    assert fg_depth(0, 20) == 20


def test_localize():
    assert [lk.p for lk in localize("1/7", 3)] == [2, 3, 5]
    with pytest.raises(NotLocalError):
        localize("1/7", 4)


def test_local_verdict_carries_both_routes():
    verdict = local_verdict(LocalInt.of(16, 2), 4)
    assert not verdict.overall
    assert not verdict.closed_form
    assert verdict.valuation == 4
    assert not verdict.in_d_p
    assert (verdict.e, verdict.f) == (5, 5)
    assert verdict.status == ProofStatus.PROVEN_N_LE_5


def test_constructed_range():
    assert constructed_range(LocalInt.of(17, 2), 8)
    assert constructed_range(LocalInt.of(2**13, 2), 8)
    assert not constructed_range(LocalInt.of(2**8, 2), 8)


def test_minimal_modulus():
    assert minimal_modulus(1) == 1
    assert minimal_modulus(2) == 24
    assert minimal_modulus(3) == 360
    assert scan_precision(2, 3) == 3


def test_fg_residues_examples():
    assert fg_residues(2, 24) == [0, 1, 9, 16]
    assert fg_residues(1, 1) == [0]
    assert fg_residues(2, 48) == [0, 1, 9, 16, 24, 25, 33, 40]


def test_fg_residues_mod_720():
    residues = fg_residues(3, 720)
    assert len(residues) == 48
    assert {0, 1, 9, 25} <= set(residues)
    assert 288 not in residues
    assert len(fg_residues(3, 360)) == 24


def test_fg_residues_is_independent_of_worker_count():
    assert fg_residues(3, 720, jobs=2) == fg_residues(3, 720, jobs=1)


def test_fg_residues_rejects_unsound_or_oversized_moduli():
    with pytest.raises(UnsoundModulusError):
        fg_residues(2, 12)
    with pytest.raises(UnsoundModulusError):
        fg_residues(2, 0)
    with pytest.raises(ScanGuardExceeded):
        fg_residues(2, 48, guard=24)


@pytest.mark.parametrize(
    "p, n", [(2, n) for n in range(1, 11)] + [(p, n) for p in (3, 5, 7) for n in range(1, 13)]
)
def test_bruteforce_threshold_matches_closed_form(p, n):
    assert e_exponent_bruteforce(p, n) == e_exponent(p, n)


def test_bruteforce_examples_and_guard():
    assert e_exponent_bruteforce(2, 2) == 3
    assert e_exponent_bruteforce(3, 3) == 2
    assert e_exponent_bruteforce(7, 3) == 0
    with pytest.raises(ScanGuardExceeded):
        e_exponent_bruteforce(2, 10, guard=1000)
