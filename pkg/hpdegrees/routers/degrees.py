from __future__ import annotations

import logging
from typing import Optional

from fastapi import APIRouter, HTTPException

from hpdegrees.config import settings
from hpdegrees.models import EndoVerdict, ExponentRow, FGVerdict, ReportConfig, ResidueSet
from hpdegrees.services import report

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/fg", tags=["degrees"])


def _require_level(name: str, value: int) -> None:
    if value < 1 or value > settings.api_max_level:
        raise HTTPException(status_code=400, detail=f"{name} must be between 1 and {settings.api_max_level}")


def _config() -> ReportConfig:
    return ReportConfig(
        pmax=settings.pmax,
        nmax=settings.nmax,
        scan_guard=settings.scan_guard,
        jobs=1,
        ktheory_check_bound=settings.ktheory_check_bound,
    )


# Handlers are sync: the work is CPU-bound and FastAPI runs them in its threadpool.

@router.get("/check", response_model=FGVerdict)
def check(k: str, n: int, p: Optional[int] = None):
    _require_level("n", n)
    return report.cmd_check(k, n, p, _config())


@router.get("/table", response_model=list[ExponentRow])
def table(pmax: int = settings.pmax, nmax: int = settings.nmax):
    _require_level("nmax", nmax)
    if pmax < 1 or pmax > 2 * settings.api_max_level:
        raise HTTPException(status_code=400, detail=f"pmax must be between 1 and {2 * settings.api_max_level}")
    return report.cmd_table(pmax, nmax)


@router.get("/phi", response_model=EndoVerdict)
def phi(k: str, n: int):
    _require_level("n", n)
    return report.cmd_phi(k, n)


@router.get("/residues", response_model=ResidueSet)
def residues(n: int, modulus: Optional[int] = None):
    _require_level("n", n)
    logger.info("Residue request n=%d modulus=%s", n, modulus)
    return report.cmd_residues(n, modulus, _config())
