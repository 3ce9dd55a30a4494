"""
Run configuration.

Precedence, lowest first: field defaults, MINIMAX_<FIELD> environment
variables (a .env file is read first), a JSON config file, explicit overrides
from the command line.
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from domains import lambda_grid
from value_sets import Sampling

logger = logging.getLogger(__name__)

ENV_PREFIX = "MINIMAX_"


class ConfigError(ValueError):
    """Invalid configuration value or unreadable config file."""


class ToleranceConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    eps_cone: float = Field(1e-9, ge=0.0)
    eps_interior: float = Field(1e-9, gt=0.0)
    grid_resolution: int = Field(50, gt=0)
    value_resolution: int = Field(101, ge=2)
    lambda_steps: int = Field(21, ge=2)
    n_max: int = Field(3, gt=0)
    coeff_steps: int = Field(20, gt=0)
    seed: int = 0
    disc_angles: int = Field(32, ge=4)
    disc_radii: int = Field(16, ge=2)
    max_tuples: int = Field(2000, gt=0)
    selection_cap: int = Field(9, ge=2)

    def sampling(self) -> Sampling:
        return Sampling(
            interval_points=self.value_resolution,
            disc_angles=self.disc_angles,
            disc_radii=self.disc_radii,
            eps=self.eps_cone,
        )

    def lambdas(self, n: int, open_interior: bool = False):
        return lambda_grid(n, self.lambda_steps, open_interior=open_interior)

    def snapshot(self) -> Dict[str, Any]:
        return self.model_dump()

    def with_overrides(self, **overrides) -> "ToleranceConfig":
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return build_config(values)


def build_config(values: Dict[str, Any]) -> ToleranceConfig:
    try:
        return ToleranceConfig(**values)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def env_overrides(environ: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    environ = os.environ if environ is None else environ
    fields = ToleranceConfig.model_fields
    found = {}
    for key, value in environ.items():
        if key.startswith(ENV_PREFIX):
            name = key[len(ENV_PREFIX):].lower()
            if name in fields:
                found[name] = value
            else:
                logger.warning("ignoring unknown setting %s", key)
    return found


def read_config_file(path: str) -> Dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    # a fixture file may carry its tolerances under "config"
    return data.get("config", data)


def load_config(path: Optional[str] = None, use_env: bool = True, **overrides) -> ToleranceConfig:
    values: Dict[str, Any] = {}
    if use_env:
        load_dotenv()
        values.update(env_overrides())
    if path:
        values.update(read_config_file(path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = build_config(values)
    logger.debug("configuration: %s", cfg.model_dump_json())
    return cfg
