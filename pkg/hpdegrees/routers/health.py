from fastapi import APIRouter
from fastapi.responses import JSONResponse

from hpdegrees.config import validate_settings
from hpdegrees.services.congruences import fg_global
from hpdegrees.services.ktheory import fg_ktheory

router = APIRouter()


@router.get("/health")
async def health():
    return {"status": "ok"}


@router.get("/health/ready")
async def health_ready():
    """Readiness check: settings are valid and both routes agree on a known degree."""
    checks = {}

    try:
        validate_settings()
        checks["settings"] = "ok"
    except RuntimeError as e:
        checks["settings"] = f"fail: {e}"

    try:
        agree = fg_global(9, 4) and fg_ktheory(9, 4).in_fg and not fg_global(16, 4)
        checks["engine"] = "ok" if agree else "fail"
    except Exception as e:
        checks["engine"] = f"fail: {e}"

    all_ok = all(value == "ok" for value in checks.values())
    return JSONResponse(
        content={"status": "ready" if all_ok else "not_ready", "checks": checks},
        status_code=200 if all_ok else 503,
    )
