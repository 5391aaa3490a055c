"""Chunked residue scans.

Workers receive plain integers and return sorted residue lists, so the merged
result never depends on the worker count.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from sympy.ntheory import multiplicity

logger = logging.getLogger(__name__)

CHUNKS_PER_WORKER = 4


def _capped_val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    return min(multiplicity(p, abs(x)), cap)


def _local_chunk(p: int, c: int, mods: Sequence[int], start: int, stop: int) -> list[int]:
    # mods[m-1] = modulus valuation of C_m at p.
    found = []
    for r in range(start, stop):
        total = 0
        for i, needed in enumerate(mods):
            total += _capped_val(r - i * i, p, c)
            if total < needed:
                break
        else:
            found.append(r)
    return found


def _residue_chunk(moduli: Sequence[int], start: int, stop: int) -> list[int]:
    # moduli[m-1] = (2m)! or (2m)!/2.
    found = []
    for r in range(start, stop):
        product = 1
        for i, modulus in enumerate(moduli):
            product *= r - i * i
            if product % modulus:
                break
        else:
            found.append(r)
    return found


def _bounds(size: int, jobs: int) -> list[tuple[int, int]]:
    pieces = max(1, min(size, jobs * CHUNKS_PER_WORKER))
    step = -(-size // pieces)
    return [(lo, min(lo + step, size)) for lo in range(0, size, step)]


def _run(fn: Callable[..., list[int]], head: tuple, size: int, jobs: int) -> list[int]:
    bounds = _bounds(size, jobs)
    if jobs <= 1 or len(bounds) == 1:
        out: list[int] = []
        for lo, hi in bounds:
            out.extend(fn(*head, lo, hi))
        return out
    logger.debug("Scanning %d classes in %d chunks on %d workers", size, len(bounds), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(fn, *zip(*[(*head, lo, hi) for lo, hi in bounds]))
        return [r for part in parts for r in part]


def local_solution_classes(p: int, c: int, mods: Sequence[int], jobs: int = 1) -> set[int]:
    """Residues r mod p^c satisfying C_1..C_len(mods) p-locally."""
    size = p**c
    logger.info("Local scan p=%d n=%d: %d classes", p, len(mods), size)
    return set(_run(_local_chunk, (p, c, tuple(mods)), size, jobs))


def residues_mod(moduli: Sequence[int], modulus: int, jobs: int = 1) -> list[int]:
    """Residues r mod `modulus` solving every congruence, ascending."""
    logger.info("Residue scan n=%d mod %d", len(moduli), modulus)
    return _run(_residue_chunk, (tuple(moduli),), modulus, jobs)
