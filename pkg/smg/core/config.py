# smg/core/config.py

from __future__ import annotations

import os
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from smg.core.logger import get_logger

load_dotenv()

logger = get_logger(__name__)

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"


# -------------------------------------------------------------------
# Settings models
# -------------------------------------------------------------------

class SearchSettings(BaseModel):
    """Phase A: multi-start max-min search over orbit seeds."""

    starts: int = Field(64, ge=1)
    seed: int = 0
    temperature_start: float = Field(0.1, gt=0)
    temperature_stop: float = Field(1e-4, gt=0)
    contact_slack: float = Field(1e-3, gt=0, lt=0.1)
    refine_window: float = Field(0.05, gt=0)

    @field_validator("temperature_stop")
    @classmethod
    def _stop_below_start(cls, v: float, info) -> float:
        start = info.data.get("temperature_start")
        if start is not None and v > start:
            raise ValueError("temperature_stop must not exceed temperature_start")
        return v

    def temperatures(self) -> list[float]:
        temps = []
        t = self.temperature_start
        while t >= self.temperature_stop * (1 - 1e-12):
            temps.append(t)
            t /= 2.0
        return temps


class PolishSettings(BaseModel):
    """Phase B: damped Gauss-Newton on the tangency residuals."""

    tol: float = Field(1e-12, gt=0)
    max_iter: int = Field(200, ge=1)
    fd_step: float = Field(1e-7, gt=0)
    condition_bound: float = Field(1e8, gt=1)
    jacobian_check_tol: float = Field(1e-5, gt=0)


class VerifierSettings(BaseModel):
    tol: float = Field(1e-9, gt=0)
    unit_tol: float = Field(1e-12, gt=0)
    dedup_tol: float = Field(1e-8, gt=0)


class Settings(BaseModel):
    search: SearchSettings = SearchSettings()
    polish: PolishSettings = PolishSettings()
    verifier: VerifierSettings = VerifierSettings()


# -------------------------------------------------------------------
# Loading
# -------------------------------------------------------------------

def _read_yaml(path: Path) -> dict[str, Any]:
    if not path.exists():
        logger.debug(f"Config file {path} not found, using defaults")
        return {}
    with path.open("r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    return data or {}


def config_dir() -> Path:
    env_dir = os.getenv("SMG_CONFIG_DIR")
    return Path(env_dir) if env_dir else DEFAULT_CONFIG_DIR


def load_settings(directory: str | Path | None = None) -> Settings:
    """Read construction.yml and verifier.yml into a Settings bundle."""
    base = Path(directory) if directory is not None else config_dir()

    construction = _read_yaml(base / "construction.yml")
    verifier = _read_yaml(base / "verifier.yml")

    return Settings(
        search=SearchSettings(**(construction.get("search") or {})),
        polish=PolishSettings(**(construction.get("polish") or {})),
        verifier=VerifierSettings(**verifier),
    )
