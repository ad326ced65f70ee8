"""
Load run configurations from flat YAML files.

A configuration is one ``key: value`` pair per line; keys mirror the fields
of PhysicalParams, Kinematics and SolverSettings. Example::

    delta: 360
    Delta: 380
    g0: 27
    Omega0: 50
    w: 13
    laser_profile: constant   # or gaussian; w_tilde then defaults to 5·w
    v: 0.18
    ell: 0
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional

import yaml

from .errors import ConfigurationError, DomainError
from .log import get_logger
from .params import (
    DEFAULT_MARGIN,
    DEFAULT_WINDOW_SIGMA,
    Kinematics,
    LaserProfile,
    PhysicalParams,
    PropagationMethod,
    SolverSettings,
)

logger = get_logger(__name__)

# w_tilde is never given numerically, only "much larger" than w
DEFAULT_LASER_WAIST_FACTOR = 5.0

REQUIRED_KEYS = ("delta", "Delta", "g0", "Omega0", "w")


def _to_float(key: str, value: Any) -> float:
    if isinstance(value, bool):
        raise ConfigurationError(f"key '{key}': expected a number, got {value!r}", key=key)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"key '{key}': expected a number, got {value!r}", key=key) from None


def _to_int(key: str, value: Any) -> int:
    number = _to_float(key, value)
    if not number.is_integer():
        raise ConfigurationError(f"key '{key}': expected an integer, got {value!r}", key=key)
    return int(number)


def _to_bool(key: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ("true", "yes", "on", "1"):
        return True
    if isinstance(value, str) and value.strip().lower() in ("false", "no", "off", "0"):
        return False
    raise ConfigurationError(f"key '{key}': expected true or false, got {value!r}", key=key)


def _to_enum(enum_type) -> Callable[[str, Any], Any]:
    def convert(key: str, value: Any):
        try:
            return enum_type(str(value))
        except ValueError:
            allowed = ", ".join(member.value for member in enum_type)
            raise ConfigurationError(f"key '{key}': unsupported value {value!r} (allowed: {allowed})", key=key) from None
    return convert


KEY_TYPES: Dict[str, Callable[[str, Any], Any]] = {
    "delta": _to_float,
    "Delta": _to_float,
    "g0": _to_float,
    "Omega0": _to_float,
    "w": _to_float,
    "w_tilde": _to_float,
    "laser_profile": _to_enum(LaserProfile),
    "v": _to_float,
    "ell": _to_float,
    "z_mid": _to_float,
    "window_sigma": _to_float,
    "margin": _to_float,
    "method": _to_enum(PropagationMethod),
    "rtol": _to_float,
    "atol": _to_float,
    "norm_tol": _to_float,
    "step_fraction": _to_float,
    "samples": _to_int,
    "leakage_bound": _to_float,
    "dressed_start": _to_bool,
}

SOLVER_KEYS = ("method", "rtol", "atol", "norm_tol", "step_fraction", "samples", "leakage_bound", "dressed_start")


@dataclass
class RunConfig:
    """Resolved configuration of one command invocation."""
    params: PhysicalParams
    kinematics: Optional[Kinematics] = None
    solver: SolverSettings = field(default_factory=SolverSettings)
    margin: float = DEFAULT_MARGIN
    source: Optional[str] = None

    def require_kinematics(self) -> Kinematics:
        if self.kinematics is None:
            raise ConfigurationError("velocity 'v' is required for this command", key="v")
        return self.kinematics

    def echo(self) -> Dict[str, Any]:
        """Flat parameter echo for CSV headers and manifests."""
        data: Dict[str, Any] = dict(self.params.to_dict())
        if self.kinematics is not None:
            data.update(
                v=self.kinematics.v,
                ell=self.kinematics.ell,
                z_mid=self.kinematics.z_mid,
                window_sigma=self.kinematics.window_sigma,
            )
        data["margin"] = self.margin
        return data


def parse_config(raw: Mapping[str, Any], source: Optional[str] = None) -> RunConfig:
    """Validate a raw mapping and build the typed configuration."""
    if not isinstance(raw, Mapping):
        raise ConfigurationError("configuration must be a mapping of key: value pairs")

    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in KEY_TYPES:
            raise ConfigurationError(f"unknown configuration key '{key}'", key=str(key))
        if value is None:
            continue
        values[key] = KEY_TYPES[key](key, value)

    for key in REQUIRED_KEYS:
        if key not in values:
            raise ConfigurationError(f"missing required key '{key}'", key=key)

    profile = values.get("laser_profile", LaserProfile.CONSTANT)
    w_tilde = values.get("w_tilde")
    if profile is LaserProfile.GAUSSIAN and w_tilde is None:
        w_tilde = DEFAULT_LASER_WAIST_FACTOR * values["w"]
        logger.info("laser_waist_defaulted", w_tilde=w_tilde)

    try:
        params = PhysicalParams(
            delta=values["delta"],
            Delta=values["Delta"],
            g0=values["g0"],
            Omega0=values["Omega0"],
            w=values["w"],
            w_tilde=w_tilde,
            laser_profile=profile,
        )
    except DomainError as e:
        raise ConfigurationError(f"invalid physical parameters: {e}") from e

    kinematics = None
    if "v" in values:
        try:
            kinematics = Kinematics(
                v=values["v"],
                ell=values.get("ell", 0.0),
                z_mid=values.get("z_mid"),
                window_sigma=values.get("window_sigma", DEFAULT_WINDOW_SIGMA),
            )
        except DomainError as e:
            raise ConfigurationError(f"invalid kinematics: {e}") from e

    try:
        solver = SolverSettings(**{k: values[k] for k in SOLVER_KEYS if k in values})
    except DomainError as e:
        raise ConfigurationError(f"invalid solver settings: {e}") from e

    margin = values.get("margin", DEFAULT_MARGIN)
    if margin < 1:
        raise ConfigurationError(f"key 'margin': must be at least 1, got {margin}", key="margin")

    return RunConfig(params=params, kinematics=kinematics, solver=solver, margin=margin, source=source)


def load_config(path: str, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Read a YAML configuration file; ``overrides`` win over file values."""
    config_path = Path(path)
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise ConfigurationError(f"configuration file not found: {config_path}") from None
    except yaml.YAMLError as e:
        raise ConfigurationError(f"malformed configuration file {config_path}: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigurationError(f"configuration file {config_path} must contain key: value pairs")

    merged = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    config = parse_config(merged, source=str(config_path))
    logger.debug("config_loaded", path=str(config_path), keys=sorted(merged))
    return config
