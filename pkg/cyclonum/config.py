"""Configuration management using environment variables."""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables."""

    # Logging
    LOG_LEVEL: str = "INFO"

    # Resource bounds
    MEMORY_CAP: int = 2**24
    FACTOR_INPUT_CAP: int = 2**63 - 1

    # Vanishing-sum enumeration bounds
    SUBSUM_MAX_LENGTH: int = 12
    SIMILARITY_MAX_LENGTH: int = 8
    SIMILARITY_MAX_ORDER: int = 10_000
    SQUAREFREE_MAX_ORDER: int = 10_000

    # Fermat check
    FERMAT_EXHAUSTIVE_LIMIT: int = 2000
    FERMAT_SAMPLES: int = 200_000

    # Harness
    RANDOM_SEED: int = 1301
    DEFAULT_JOBS: int = 1

    class Config:
        env_prefix = "CYCLONUM_"
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


# Global settings instance
settings = Settings()
