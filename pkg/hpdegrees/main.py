import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request, Response
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from slowapi import Limiter, _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
from slowapi.middleware import SlowAPIMiddleware
from slowapi.util import get_remote_address

from hpdegrees.config import configure_logging, settings, validate_settings
from hpdegrees.errors import FormulaMismatch, HPDegreesError, ScanGuardExceeded
from hpdegrees.routers import degrees, health

# Structured logging
configure_logging()
logger = logging.getLogger(__name__)

# Rate limiter
limiter = Limiter(key_func=get_remote_address, default_limits=[settings.rate_limit])


@asynccontextmanager
async def lifespan(app: FastAPI):
    validate_settings()
    logger.info("Application started")
    yield
    logger.info("Application shut down")


app = FastAPI(title="HP^n self-map degrees", lifespan=lifespan)
app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)
app.add_middleware(SlowAPIMiddleware)


@app.exception_handler(ScanGuardExceeded)
async def scan_guard_exceeded(request: Request, exc: ScanGuardExceeded):
    return JSONResponse(status_code=413, content={"detail": str(exc), "classes": exc.classes, "guard": exc.guard})


@app.exception_handler(FormulaMismatch)
async def formula_mismatch(request: Request, exc: FormulaMismatch):
    logger.error("Formula mismatch on %s: %s", request.url.path, exc)
    return JSONResponse(status_code=500, content={"detail": f"internal consistency failure: {exc}"})


@app.exception_handler(RequestValidationError)
async def bad_query(request: Request, exc: RequestValidationError):
    return JSONResponse(status_code=400, content={"detail": jsonable_encoder(exc.errors())})


@app.exception_handler(HPDegreesError)
async def input_error(request: Request, exc: HPDegreesError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


# Security headers middleware
@app.middleware("http")
async def security_headers(request: Request, call_next):
    response: Response = await call_next(request)
    response.headers["X-Content-Type-Options"] = "nosniff"
    response.headers["X-Frame-Options"] = "DENY"
    response.headers["Cache-Control"] = "no-store"
    return response

# Register routers
app.include_router(health.router)
app.include_router(degrees.router)
