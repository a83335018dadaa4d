"""
Runtime settings - tolerances and defaults, overridable from the environment.
A .env file in the working directory is honoured.
"""

import os
from enum import Enum
from functools import lru_cache
from typing import Optional, Type, TypeVar

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from src.core.errors import SettingsError
from src.core.types import RefreshMode, VertexAveraging

load_dotenv()

E = TypeVar("E", bound=Enum)


class Tolerances(BaseModel):
    """Numeric thresholds, all at the double precision noise floor by default"""
    uniform_rel: float = Field(1e-12, gt=0, description="K_max - K_min below this (relative) is a uniform field")
    normal_eps: float = Field(1e-12, gt=0, description="Averaged vertex normal shorter than this is degenerate")
    degenerate_area_rel: float = Field(1e-14, gt=0, description="Face area below this times bbox diagonal^2 is degenerate")


class Settings(BaseModel):
    """Process-wide configuration"""
    tolerances: Tolerances = Field(default_factory=Tolerances)
    vertex_averaging: VertexAveraging = VertexAveraging.UNIFORM
    refresh: RefreshMode = RefreshMode.PER_STEP
    default_c_rel: float = Field(0.001, gt=0)
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from MORPH_* environment variables"""
        tol = Tolerances(
            uniform_rel=_env_float("MORPH_EPS_UNIFORM", 1e-12),
            normal_eps=_env_float("MORPH_EPS_NORMAL", 1e-12),
            degenerate_area_rel=_env_float("MORPH_EPS_AREA", 1e-14),
        )
        return cls(
            tolerances=tol,
            vertex_averaging=_env_choice("MORPH_VERTEX_AVERAGING", VertexAveraging, VertexAveraging.UNIFORM),
            refresh=_env_choice("MORPH_REFRESH", RefreshMode, RefreshMode.PER_STEP),
            default_c_rel=_env_float("MORPH_C_REL", 0.001),
            log_level=os.getenv("MORPH_LOG_LEVEL", "INFO").upper(),
        )


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError as e:
        raise SettingsError(f"{name} must be a number, got {raw!r}") from e
    if not value > 0:
        raise SettingsError(f"{name} must be positive, got {value}")
    return value


def _env_choice(name: str, enum_type: Type[E], default: E) -> E:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return enum_type(raw.strip().lower())
    except ValueError as e:
        allowed = ", ".join(member.value for member in enum_type)
        raise SettingsError(f"{name} must be one of {allowed}, got {raw!r}") from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()


def resolve(settings: Optional[Settings]) -> Settings:
    """Fall back to the process-wide settings"""
    return settings if settings is not None else get_settings()
