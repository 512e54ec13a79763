"""
Configuration Module - search bounds and per-run settings
"""

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Literal

import psutil
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

from quartic_iso.utils.logging_config import get_logger

logger = get_logger(__name__)

ENV_PREFIX = "QUARTIC_ISO_"
DEFAULT_CONFIG_PATH = Path(__file__).with_name("bounds.config.json")

Command = Literal["search", "iso", "certify", "verify-cert", "hypotheses", "sequence", "curves", "root-number"]
OutputFormat = Literal["json", "text"]


@dataclass
class BoundsConfig:
    """Default numeric bounds"""

    search_limit: int = 1000
    prime_bound: int = 10**8
    index_cap: int = 10**4
    terms: int = 25
    x_bound: int = 50
    trial_bound: int = 10**6
    rho_iterations: int = 200_000
    workers: int | None = None


def _parse_env_value(key: str, raw: str) -> int | None:
    if key == "workers" and raw.strip().lower() in ("", "auto", "none"):
        return None
    return int(raw)


def load_bounds_config(config_path: str | Path | None = None) -> BoundsConfig:
    """Load bounds from JSON, falling back to defaults per key, then apply QUARTIC_ISO_<KEY> overrides"""
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
    config = BoundsConfig()

    try:
        if path.exists():
            config_data = json.loads(path.read_text(encoding="utf-8"))
            config = BoundsConfig(
                search_limit=config_data.get("search_limit", 1000),
                prime_bound=config_data.get("prime_bound", 10**8),
                index_cap=config_data.get("index_cap", 10**4),
                terms=config_data.get("terms", 25),
                x_bound=config_data.get("x_bound", 50),
                trial_bound=config_data.get("trial_bound", 10**6),
                rho_iterations=config_data.get("rho_iterations", 200_000),
                workers=config_data.get("workers"),
            )
        else:
            logger.info(f"Bounds config file not found at {path}, using defaults")
    except (OSError, ValueError, AttributeError) as e:
        logger.error(f"Error loading bounds config: {e}, using defaults")
        config = BoundsConfig()

    load_dotenv()
    for item in fields(BoundsConfig):
        raw = os.getenv(f"{ENV_PREFIX}{item.name.upper()}")
        if raw is None:
            continue
        try:
            setattr(config, item.name, _parse_env_value(item.name, raw))
        except ValueError:
            logger.warning(f"Ignoring non-integer {ENV_PREFIX}{item.name.upper()}={raw!r}")

    return config


def resolve_workers(requested: int | None) -> int:
    """Requested worker count, or the number of physical cores"""
    if requested is not None and requested >= 1:
        return requested
    return psutil.cpu_count(logical=False) or 1


class RunConfig(BaseModel):
    """One CLI invocation"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    values: tuple[int, ...] = ()
    path: str | None = None

    search_limit: int = Field(default=1000, ge=2)
    prime_bound: int = Field(default=10**8, gt=0)
    index_cap: int = Field(default=10**4, gt=0)
    terms: int = Field(default=25, gt=0)
    x_bound: int = Field(default=50, gt=0)
    t_max: int = Field(default=64, gt=0)
    trial_bound: int = Field(default=10**6, gt=0)
    rho_iterations: int = Field(default=200_000, gt=0)
    d: int | None = Field(default=None, gt=0)

    out: str | None = None
    save_cert: str | None = None
    format: OutputFormat = "json"
    workers: int = Field(default=1, ge=1)
