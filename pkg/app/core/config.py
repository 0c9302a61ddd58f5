from pathlib import Path
from pydantic_settings import BaseSettings
from functools import lru_cache

_DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class Settings(BaseSettings):
    """Engine settings with environment variable support"""

    # Obstruction scan
    KMAX: int = 50
    MODP_PRIMES_PER_K: int = 2
    PRIME_SEARCH_CAP: int = 100_000  # values of t tried in the scan over 2k*t + 1

    # Skein engine
    CROSSING_CAP: int = 20
    SKEIN_CACHE_ENABLED: bool = True
    SKEIN_CACHE_MAX_ENTRIES: int = 200_000

    # Knot table
    KNOT_TABLE_PATH: str = str(_DATA_DIR / "knots.jsonl")

    # Verification suites
    VERIFY_SAMPLES: int = 50
    VERIFY_SEED: int = 20240229

    # App settings
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"
    APP_NAME: str = "Twist Obstruction Engine"

    class Config:
        env_file = ".env"


@lru_cache()
def get_settings() -> Settings:
    """Cached accessor for the process-wide settings"""
    return Settings()
