from argparse import Namespace
from typing import Optional

from pydantic import BaseModel, ConfigDict, field_validator

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class Settings(BaseModel):
    """Параметры запуска; берутся только из флагов командной строки"""

    model_config = ConfigDict(frozen=True)

    log_level: str = "WARNING"
    porcelain: bool = False
    default_horizon: int = 20
    default_word_len: int = 2
    default_depth: int = 3

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"Unknown log level {v}")
        return level

    @field_validator("default_horizon", "default_word_len", "default_depth")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("Must be at least 1")
        return v


def get_settings(namespace: Optional[Namespace] = None) -> Settings:
    if namespace is None:
        return Settings()
    verbose = getattr(namespace, "verbose", 0) or 0
    return Settings(
        log_level=("WARNING", "INFO")[verbose] if verbose < 2 else "DEBUG",
        porcelain=bool(getattr(namespace, "porcelain", False)),
    )
