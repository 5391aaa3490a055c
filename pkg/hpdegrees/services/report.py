"""Builds the records behind each command and renders them as text, JSON or CSV.

Rendering is deterministic: rows sorted by (p, n), residues ascending,
fractions in lowest terms with "/".
"""
from __future__ import annotations

import csv
import io
import logging
from fractions import Fraction

from pydantic import TypeAdapter
from sympy import primerange

from hpdegrees.errors import FormulaMismatch, ScanGuardExceeded
from hpdegrees.models import (
    EndoVerdict,
    Evidence,
    ExponentRow,
    FGVerdict,
    OutputFormat,
    ReportConfig,
    ResidueSet,
    VerifyOutcome,
)
from hpdegrees.services.congruences import (
    direct_divisibility,
    exponent_row,
    fg_depth,
    fg_infinity,
    fg_residues,
    local_verdict,
    localize,
    minimal_modulus,
)
from hpdegrees.services.ktheory import TruncPoly, fg_ktheory
from hpdegrees.services.padic import LocalInt, as_fraction

logger = logging.getLogger(__name__)

_rows_adapter = TypeAdapter(list[ExponentRow])
_outcomes_adapter = TypeAdapter(list[VerifyOutcome])


# --- Record builders ---

def cmd_check(k: int | Fraction | str, n: int, p: int | None = None, config: ReportConfig | None = None) -> FGVerdict:
    config = config or ReportConfig()
    value = as_fraction(k)
    logger.debug("Checking k=%s n=%d p=%s", value, n, p)
    if p is not None:
        verdict = local_verdict(LocalInt.of(value, p), n)
        return FGVerdict(k=value, n=n, member=verdict.overall, evidence=Evidence(primes=[verdict]))

    primes = [local_verdict(lk, n) for lk in localize(value, n)]
    member = all(v.overall for v in primes)
    evidence = Evidence(primes=primes)

    if value.denominator == 1:
        k_int = value.numerator
        evidence.direct_divisibility = direct_divisibility(k_int, n)
        if evidence.direct_divisibility != member:
            raise FormulaMismatch(f"k={k_int} n={n}: local route {member}, divisibility {evidence.direct_divisibility}")
        evidence.in_fg_infinity = fg_infinity(k_int)
        evidence.depth = fg_depth(k_int, max(n, config.nmax))
        if n <= config.ktheory_check_bound:
            evidence.ktheory = fg_ktheory(k_int, n)
            if evidence.ktheory.in_fg != member:
                raise FormulaMismatch(f"k={k_int} n={n}: congruences {member}, K-theory {evidence.ktheory.in_fg}")
    return FGVerdict(k=value, n=n, member=member, evidence=evidence)


def cmd_table(pmax: int, nmax: int) -> list[ExponentRow]:
    return [exponent_row(p, n) for p in primerange(2, pmax + 1) for n in range(1, nmax + 1)]


def cmd_phi(k: int | Fraction | str, n: int) -> EndoVerdict:
    return fg_ktheory(k, n)


def cmd_residues(n: int, modulus: int | None = None, config: ReportConfig | None = None) -> ResidueSet:
    config = config or ReportConfig()
    if modulus is None:
        modulus = minimal_modulus(n)
        if modulus > config.scan_guard:
            raise ScanGuardExceeded(modulus, config.scan_guard)
    residues = fg_residues(n, modulus, guard=config.scan_guard, jobs=config.jobs)
    return ResidueSet(n=n, modulus=modulus, residues=residues)


# --- Renderers ---

def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _yes(flag: bool | None) -> str:
    return "yes" if flag else "no"


def _describe_phi(v: EndoVerdict) -> str:
    phi = TruncPoly(v.n, tuple(v.phi))
    if not v.integral:
        return f"{phi}, not integral, not in FG"
    if not v.parity_ok:
        return f"{phi}, integral, parity fails, not in FG"
    return f"{phi}, integral, parity ok, in FG"


def render_verdict(verdict: FGVerdict, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.json:
        return verdict.model_dump_json(indent=2) + "\n"
    if fmt == OutputFormat.csv:
        rows = [
            [str(verdict.k), verdict.n, v.p, lvl.m, lvl.model_dump(mode="json")["product_valuation"],
             lvl.modulus_valuation, str(lvl.satisfied).lower()]
            for v in verdict.evidence.primes
            for lvl in v.per_level
        ]
        return _csv(["k", "n", "p", "m", "product_valuation", "modulus_valuation", "satisfied"], rows)

    ev = verdict.evidence
    lines = [f"k = {verdict.k}, n = {verdict.n}: member: {str(verdict.member).lower()}"]
    for v in ev.primes:
        failing = v.failing_level()
        if failing is None:
            head = "ok"
        else:
            lvl = v.per_level[failing - 1]
            got = lvl.model_dump(mode="json")["product_valuation"]
            head = f"fails at level {failing} (valuation {got} < {lvl.modulus_valuation})"
        lines.append(
            f"  p={v.p}: {head}; |k|_p={v.model_dump(mode='json')['valuation']} "
            f"D_p={_yes(v.in_d_p)} e={v.e} f={v.f} closed-form={_yes(v.closed_form)} "
            f"constructed={_yes(v.constructed_range)} status={v.status.value}"
        )
    if ev.direct_divisibility is not None:
        lines.append(f"  divisibility route: {str(ev.direct_divisibility).lower()}")
    if ev.ktheory is not None:
        lines.append(f"  K-theory: phi(x) = {_describe_phi(ev.ktheory)}")
    if ev.in_fg_infinity is not None:
        lines.append(f"  FG_infinity: {_yes(ev.in_fg_infinity)}; member through level {ev.depth}")
    return "\n".join(lines) + "\n"


def render_table(rows: list[ExponentRow], fmt: OutputFormat) -> str:
    rows = sorted(rows, key=lambda r: (r.p, r.n))
    if fmt == OutputFormat.json:
        return _rows_adapter.dump_json(rows, indent=2).decode() + "\n"
    if fmt == OutputFormat.csv:
        return _csv(["p", "n", "e", "f", "status"], [[r.p, r.n, r.e, r.f, r.status.value] for r in rows])
    lines = [f"{'p':>3} {'n':>3} {'e':>3} {'f':>3}  status"]
    lines += [f"{r.p:>3} {r.n:>3} {r.e:>3} {r.f:>3}  {r.status.value}" for r in rows]
    return "\n".join(lines) + "\n"


def render_endo(verdict: EndoVerdict, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.json:
        return verdict.model_dump_json(indent=2) + "\n"
    if fmt == OutputFormat.csv:
        return _csv(["j", "coefficient"], [[j, str(c)] for j, c in enumerate(verdict.phi, start=1)])
    return _describe_phi(verdict) + "\n"


def render_residues(result: ResidueSet, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.json:
        return result.model_dump_json(indent=2) + "\n"
    if fmt == OutputFormat.csv:
        return _csv(["n", "modulus", "residue"], [[result.n, result.modulus, r] for r in result.residues])
    shown = ", ".join(str(r) for r in result.residues)
    return f"n = {result.n}, modulus {result.modulus}: {len(result.residues)} residues\n[{shown}]\n"


def render_outcomes(outcomes: list[VerifyOutcome], fmt: OutputFormat) -> str:
    if fmt == OutputFormat.json:
        return _outcomes_adapter.dump_json(outcomes, indent=2).decode() + "\n"
    if fmt == OutputFormat.csv:
        rows = [[o.suite, f.case, f.expected, f.got] for o in outcomes for f in o.failures]
        return _csv(["suite", "case", "expected", "got"], rows)
    lines = []
    for o in outcomes:
        lines.append(
            f"{o.suite}: {o.cases_run} cases, {len(o.failures)} failures, {len(o.skipped)} skipped"
        )
        lines += [f"  FAIL {f.case}: expected {f.expected}, got {f.got}" for f in o.failures]
        lines += [f"  skip {s.case}: {s.reason}" for s in o.skipped]
        lines += [f"  note {note}" for note in o.notes]
    return "\n".join(lines) + "\n"
