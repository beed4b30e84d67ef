import json
import os
from pathlib import Path
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings

# Load environment variables from .env file
env_file = Path(__file__).parent.parent / ".env"
load_dotenv(env_file)

CONFIG_ENV_VAR = "PWGRAPH_CONFIG"


class ToleranceConfig(BaseSettings):
    eig_residual: float = Field(1e-9, gt=0)
    eps_eig: float = Field(1e-9, gt=0)
    recon_tol: float = Field(1e-8, gt=0)
    rank_tol: float = Field(1e-10, gt=0)
    guard: float = Field(1e-9, gt=0)
    sigma_floor: float = Field(1e-12, gt=0)

    model_config = {"env_prefix": "PWGRAPH_TOL_", "extra": "ignore"}


class LimitConfig(BaseSettings):
    cheeger_max_n: int = Field(20, gt=0)
    exhaustive_max_n: int = Field(12, gt=0)
    neumann_max_iter: int = Field(100000, gt=0)

    model_config = {"env_prefix": "PWGRAPH_LIMIT_", "extra": "ignore"}


class SamplingConfig(BaseSettings):
    frame_normalization: Literal["plain_delta", "degree_normalized"] = "plain_delta"
    check_samples: int = Field(20, gt=0)
    seed: int = 0

    model_config = {"env_prefix": "PWGRAPH_SAMPLING_", "extra": "ignore"}


class ObservabilityConfig(BaseSettings):
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    model_config = {"env_prefix": "PWGRAPH_", "extra": "ignore"}


class RunConfig(BaseSettings):
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    limits: LimitConfig = Field(default_factory=LimitConfig)
    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    observability: ObservabilityConfig = Field(default_factory=ObservabilityConfig)

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "extra": "ignore"}


def load_config(path: Optional[str] = None) -> RunConfig:
    """Build a RunConfig, overriding defaults from a JSON file.

    The file is taken from ``path`` or, when absent, from $PWGRAPH_CONFIG.
    Only the keys present in the file are overridden.
    """
    from pwgraph.services.error_handler import InvalidParameter

    path = path or os.getenv(CONFIG_ENV_VAR)
    if not path:
        return RunConfig()

    try:
        overrides = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParameter(f"cannot read config file {path}: {e}") from e

    base = RunConfig().model_dump()
    for section, values in overrides.items():
        if section not in base or not isinstance(values, dict):
            raise InvalidParameter(f"unknown config section '{section}' in {path}")
        base[section].update(values)

    try:
        return RunConfig(**base)
    except ValidationError as e:
        raise InvalidParameter(f"invalid configuration in {path}: {e}") from e


config = RunConfig()
