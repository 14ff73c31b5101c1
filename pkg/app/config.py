from fractions import Fraction
from typing import Literal

from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    # App
    APP_NAME: str = "adelic-polytopes"
    APP_VERSION: str = "0.1.0"
    ENVIRONMENT: str = "development"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Exact arithmetic
    EMBED_WIDTH: str = "1/1000000000000"
    COMPARISON_WIDTH_EXPONENT: int = 30
    ALLOW_UNVERIFIED_IRREDUCIBILITY: bool = False

    # Geometry
    MAX_HULL_DIMENSION: int = 3
    CANDIDATE_CAP: int = 2_000_000
    DEFAULT_CONVENTION: Literal["proof", "discriminant"] = "proof"  # instances without "convention"

    # Experiments
    GROWTH_FIT_TAIL: float = 0.5  # fit the exponent on k >= tail * k_max
    WITNESS_GRID_STEP: str = "1/8"
    WITNESS_GRID_FINEST: str = "1/64"

    # Figure export
    SVG_WINDOW: float = 4.5

    # Monitoring
    SENTRY_DSN: str = ""
    SLOW_COMPUTATION_SECONDS: float = 1.0

    # Celery
    CELERY_BROKER_URL: str = "memory://"
    CELERY_RESULT_BACKEND: str = "cache+memory://"
    CELERY_TASK_ALWAYS_EAGER: bool = True

    @property
    def embed_width(self) -> Fraction:
        return Fraction(self.EMBED_WIDTH)

    @property
    def report_digits(self) -> int:
        # decimal digits printed for interval endpoints, from the embedding width
        width = self.embed_width
        digits = 1
        while digits < 40 and Fraction(1, 10 ** (digits + 1)) >= width:
            digits += 1
        return digits

    @property
    def comparison_width(self) -> Fraction:
        return Fraction(1, 10 ** self.COMPARISON_WIDTH_EXPONENT)

    class Config:
        env_file = ".env"
        case_sensitive = True

settings = Settings()
