import logging

from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("human", "json", "csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

LOG_FORMAT = '{"time":"%(asctime)s","level":"%(levelname)s","logger":"%(name)s","message":"%(message)s"}'


class Settings(BaseSettings):
    # Output
    output_format: str = "human"

    # Table / verification bounds
    pmax: int = 13
    nmax: int = 12
    ktheory_check_bound: int = 8  # run the K-theory verdict inside `check` up to this level

    # Residue scans
    scan_guard: int = 2**24  # max residue classes per oracle scan
    jobs: int = 1

    # Logging
    log_level: str = "WARNING"

    # HTTP surface
    rate_limit: str = "60/minute"
    api_max_level: int = 64

    model_config = {"env_file": ".env", "env_prefix": "HPDEGREES_", "extra": "ignore"}


settings = Settings()


def validate_settings() -> None:
    """Fail fast if any bound or format is unusable."""
    bad = []
    for name in ("pmax", "nmax", "ktheory_check_bound", "scan_guard", "jobs", "api_max_level"):
        if getattr(settings, name) < 1:
            bad.append(name.upper())
    if settings.output_format not in OUTPUT_FORMATS:
        bad.append("OUTPUT_FORMAT")
    if bad:
        raise RuntimeError(f"Invalid settings: {', '.join(bad)}")


def configure_logging(level: str | None = None) -> None:
    """Single-line JSON records on stderr."""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format=LOG_FORMAT,
        force=True,
    )
