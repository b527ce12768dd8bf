import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Optional

from circmetric.errors import ConfigError, NonFinite
from circmetric.fields import FAMILIES
from circmetric.metric import ConformalParams

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("det", "posdef", "angles", "transform", "iterate", "check-fields", "sweep")
OUTPUT_FORMATS = ("csv", "json", "table")

_INT_FIELDS = ("steps", "samples", "workers")
_FLOAT_FIELDS = ("tolerance", "fd_step")
_STR_FIELDS = ("output_format", "field_family", "out")
_OPTIONAL_FIELDS = ("field_family", "point", "fd_step", "out")

_TUPLE_LENGTHS = {
    "metric": 3,
    "params": 2,
    "vector": 4,
    "point": 4,
    "sweep_alpha": 3,
    "sweep_beta": 3,
}


@dataclass
class RunConfig:
    metric: tuple[float, float, float] = (3.0, 1.0, 2.0)
    params: tuple[float, float] = (2.0, 1.0)
    vector: tuple[float, float, float, float] = (1.0, 0.0, 0.0, 0.0)
    steps: int = 40
    tolerance: float = 1e-9
    output_format: str = "table"
    field_family: Optional[str] = None
    point: Optional[tuple[float, float, float, float]] = None
    fd_step: Optional[float] = None
    renormalize: bool = False
    # check-fields: residuals maximised over this many random points
    samples: int = 0
    # sweep grids: (lo, hi, count)
    sweep_alpha: tuple[float, float, float] = (1.5, 4.0, 6)
    sweep_beta: tuple[float, float, float] = (0.25, 1.25, 5)
    workers: int = 4
    out: Optional[str] = None

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        values = {}
        for key, value in data.items():
            if value is None:
                if key not in _OPTIONAL_FIELDS:
                    raise ConfigError(f"{key} must not be null")
            elif key in _TUPLE_LENGTHS:
                value = _as_tuple(key, value)
            elif key in _INT_FIELDS:
                value = _as_int(key, value)
            elif key in _FLOAT_FIELDS:
                value = _as_float(key, value)
            elif key in _STR_FIELDS and not isinstance(value, str):
                raise ConfigError(f"{key} must be a string, got {value!r}")
            elif key == "renormalize" and not isinstance(value, bool):
                raise ConfigError(f"renormalize must be true or false, got {value!r}")
            values[key] = value
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        for key in _TUPLE_LENGTHS:
            if data[key] is not None:
                data[key] = list(data[key])
        return data

    @property
    def conformal(self) -> ConformalParams:
        return ConformalParams(*self.params)

    def validate(self, subcommand: str) -> "RunConfig":
        """Checks what `subcommand` consumes before anything is computed."""
        if subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand '{subcommand}'; choose from {list(SUBCOMMANDS)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format must be one of {list(OUTPUT_FORMATS)}, got '{self.output_format}'")
        _finite("metric", self.metric)
        if subcommand in ("angles", "transform", "iterate", "sweep"):
            _finite("vector", self.vector)
        if subcommand in ("transform", "iterate"):
            _finite("params", self.params)
            self.conformal.validate()
        if subcommand in ("iterate", "sweep"):
            if int(self.steps) != self.steps or self.steps < 0:
                raise ConfigError(f"steps must be a non-negative integer, got {self.steps}")
            if not self.tolerance > 0:
                raise ConfigError(f"tolerance must be > 0, got {self.tolerance}")
        if subcommand == "check-fields":
            self._validate_fields()
        if subcommand == "sweep":
            for key in ("sweep_alpha", "sweep_beta"):
                lo, hi, count = getattr(self, key)
                _finite(key, (lo, hi, count))
                if int(count) != count or count < 1:
                    raise ConfigError(f"{key} count must be a positive integer, got {count}")
            if self.workers < 1:
                raise ConfigError(f"workers must be >= 1, got {self.workers}")
        logger.debug(f"config valid for '{subcommand}': {self}")
        return self

    def _validate_fields(self) -> None:
        if self.field_family is None:
            raise ConfigError("check-fields needs a field family (--family)")
        if self.field_family not in FAMILIES:
            raise ConfigError(f"unknown field family '{self.field_family}'; choose from {sorted(FAMILIES)}")
        if self.point is None and self.samples <= 0:
            raise ConfigError("check-fields needs --point or --samples N")
        if self.point is not None:
            _finite("point", self.point)
        if self.fd_step is not None and not self.fd_step > 0:
            raise ConfigError(f"fd_step must be > 0, got {self.fd_step}")


def _as_tuple(key: str, value: Any) -> tuple:
    if isinstance(value, str):
        value = value.split(",")
    try:
        value = tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a list of numbers, got {value!r}") from None
    if len(value) != _TUPLE_LENGTHS[key]:
        raise ConfigError(f"{key} needs {_TUPLE_LENGTHS[key]} numbers, got {len(value)}")
    return value


def _as_int(key: str, value: Any) -> int:
    try:
        if isinstance(value, bool):
            raise TypeError
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if not number.is_integer():
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(number)


def _as_float(key: str, value: Any) -> float:
    try:
        if isinstance(value, bool):
            raise TypeError
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def _finite(key: str, values) -> None:
    if not all(math.isfinite(float(v)) for v in values):
        raise NonFinite(f"{key} contains NaN or Inf: {tuple(values)}")


def load_config(path: str) -> dict[str, Any]:
    """Reads a JSON document whose keys mirror RunConfig."""
    logger.info(f"Loading run config from {path}")
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as e:
        raise ConfigError(f"could not read config file {path}: {e}") from None
    except ValueError as e:
        raise ConfigError(f"could not decode JSON from {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be an object, got {type(data).__name__}")
    # validates keys and shapes; flags are merged on top by the caller
    RunConfig.from_dict(data)
    return data


def build_config(file_values: dict[str, Any], overrides: dict[str, Any]) -> RunConfig:
    merged = dict(file_values)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.from_dict(merged)


__all__ = [
    "OUTPUT_FORMATS",
    "SUBCOMMANDS",
    "RunConfig",
    "build_config",
    "load_config",
]
