"""CLI configuration settings."""

import os

from pydantic_settings import BaseSettings


def _default_threads() -> int:
    return min(os.cpu_count() or 1, 8)


class Settings(BaseSettings):
    """CLI settings."""

    # Parallelism
    FLATCURVE_THREADS: int = _default_threads()

    # Logging
    LOG_LEVEL: str = "WARNING"

    # Geometric tolerances
    EPS_LEN: float = 1e-9
    EPS_ANG: float = 1e-9

    # Enumeration budget (polygon copies developed per starting ray)
    MAX_COPIES: int = 2_000_000

    # Search
    RATIO_TOLERANCE: float = 1e-9
    DEFAULT_LMAX: float = 6.0

    # Reports
    REPORT_FLOAT_DIGITS: int = 12

    class Config:
        """Pydantic configuration."""

        env_file = ".env"
        case_sensitive = True


settings = Settings()
