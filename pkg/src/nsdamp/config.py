"""Experiment configuration: a flat text format with dotted section keys.

One ``section.key = value`` assignment per line, ``#`` starting a comment.
Example::

    # damped Taylor-Green benchmark
    grid.n_modes     = 32
    grid.box_length  = 6.283185307179586
    phys.alpha       = 1.0
    phys.beta        = 4.0
    time.dt          = 1e-3
    time.t_end       = 1.0
    ic.kind          = taylor-green

Every error names the offending key.  ``canonical_text`` echoes a config in
a normalized form that parses back to an equal config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any

from .dynamics import StepperConfig
from .spectral import GridSpec, PhysParams, make_grid

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "IC_KINDS",
    "parse_config",
    "load_config",
    "canonical_text",
    "config_from_mapping",
    "validate_for_experiment",
]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


IC_KINDS = ("taylor-green", "random-solenoidal", "checkpoint")


@dataclass(frozen=True)
class ExperimentConfig:
    n_modes: int
    box_length: float
    cutoff_fraction: float
    nu: float
    alpha: float
    beta: float
    dt: float
    t_end: float
    output_every: float | None
    ic_kind: str
    ic_seed: int
    ic_amplitude: float
    ic_path: str | None
    output_directory: str

    def grid(self) -> GridSpec:
        return make_grid(self.n_modes, self.box_length, self.cutoff_fraction)

    def phys(self) -> PhysParams:
        return PhysParams(nu=self.nu, alpha=self.alpha, beta=self.beta)

    def stepper(self) -> StepperConfig:
        return StepperConfig(dt=self.dt)

    def with_updates(self, **kwargs: Any) -> "ExperimentConfig":
        return replace(self, **kwargs)


# key -> (attribute, parser, required, default)
def _parse_int(v: str) -> int:
    return int(v)


def _parse_float(v: str) -> float:
    return float(v)


def _parse_str(v: str) -> str:
    return v


_KEYS: dict[str, tuple[str, Any, bool, Any]] = {
    "grid.n_modes": ("n_modes", _parse_int, True, None),
    "grid.box_length": ("box_length", _parse_float, True, None),
    "grid.cutoff_fraction": ("cutoff_fraction", _parse_float, False, 2.0 / 3.0),
    "phys.nu": ("nu", _parse_float, False, 1.0),
    "phys.alpha": ("alpha", _parse_float, True, None),
    "phys.beta": ("beta", _parse_float, True, None),
    "time.dt": ("dt", _parse_float, True, None),
    "time.t_end": ("t_end", _parse_float, True, None),
    "time.output_every": ("output_every", _parse_float, False, None),
    "ic.kind": ("ic_kind", _parse_str, True, None),
    "ic.seed": ("ic_seed", _parse_int, False, 0),
    "ic.amplitude": ("ic_amplitude", _parse_float, False, 1.0),
    "ic.path": ("ic_path", _parse_str, False, None),
    "output.directory": ("output_directory", _parse_str, False, "out"),
}

_ATTR_TO_KEY = {attr: key for key, (attr, _, _, _) in _KEYS.items()}


def config_from_mapping(values: dict[str, Any]) -> ExperimentConfig:
    """Build and validate a config from dotted-key -> raw value pairs.

    Values may already be typed (from tests) or strings (from the parser).
    """
    kwargs: dict[str, Any] = {}
    for key, raw in values.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}")
        attr, parse, _, _ = _KEYS[key]
        if isinstance(raw, str):
            try:
                raw = parse(raw)
            except ValueError:
                raise ConfigError(
                    f"{key}: expected {'an integer' if parse is _parse_int else 'a number'}, got {raw!r}"
                ) from None
        kwargs[attr] = raw
    for key, (attr, _, required, default) in _KEYS.items():
        if attr not in kwargs:
            if required:
                raise ConfigError(f"missing required key {key!r}")
            kwargs[attr] = default
    cfg = ExperimentConfig(**kwargs)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.n_modes < 4 or cfg.n_modes % 2 != 0:
        raise ConfigError(f"grid.n_modes must be an even integer >= 4, got {cfg.n_modes!r}")
    if not cfg.box_length > 0.0:
        raise ConfigError(f"grid.box_length must be positive, got {cfg.box_length!r}")
    if not 0.0 < cfg.cutoff_fraction <= 2.0 / 3.0 + 1e-12:
        raise ConfigError(
            f"grid.cutoff_fraction must lie in (0, 2/3], got {cfg.cutoff_fraction!r}"
        )
    if not cfg.nu > 0.0:
        raise ConfigError(f"phys.nu must be positive, got {cfg.nu!r}")
    if cfg.alpha < 0.0:
        raise ConfigError(f"phys.alpha must be nonnegative, got {cfg.alpha!r}")
    if not cfg.beta > 1.0:
        raise ConfigError(f"phys.beta must exceed 1, got {cfg.beta!r}")
    if not cfg.dt > 0.0:
        raise ConfigError(f"time.dt must be positive, got {cfg.dt!r}")
    if not cfg.t_end > 0.0:
        raise ConfigError(f"time.t_end must be positive, got {cfg.t_end!r}")
    if cfg.output_every is not None and not cfg.output_every > 0.0:
        raise ConfigError(f"time.output_every must be positive, got {cfg.output_every!r}")
    if cfg.ic_kind not in IC_KINDS:
        raise ConfigError(
            f"ic.kind must be one of {', '.join(IC_KINDS)}; got {cfg.ic_kind!r}"
        )
    if cfg.ic_kind == "checkpoint" and not cfg.ic_path:
        raise ConfigError("ic.path is required when ic.kind = checkpoint")
    if cfg.ic_kind != "checkpoint" and cfg.ic_path:
        raise ConfigError("ic.path only applies to ic.kind = checkpoint")
    if cfg.ic_amplitude <= 0.0:
        raise ConfigError(f"ic.amplitude must be positive, got {cfg.ic_amplitude!r}")
    # the grid/params constructors re-check their own invariants
    try:
        cfg.grid()
        cfg.phys()
        cfg.stepper()
    except ValueError as exc:  # pragma: no cover - belt and braces
        raise ConfigError(str(exc)) from None


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    return config_from_mapping(values)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    return parse_config(text)


def canonical_text(cfg: ExperimentConfig) -> str:
    """Normalized echo of a config; parses back to an equal config."""
    lines = []
    for key, (attr, _, _, default) in _KEYS.items():
        value = getattr(cfg, attr)
        if value is None:
            continue
        if isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def validate_for_experiment(cfg: ExperimentConfig, experiment: str) -> None:
    """Checks that only matter for a particular experiment driver."""
    if experiment in ("twin", "continuity") and not cfg.beta > 3.0:
        raise ConfigError("uniqueness requires beta > 3")
    if experiment == "decay":
        if cfg.beta < 10.0 / 3.0 - 1e-12:
            raise ConfigError("decay requires beta >= 10/3")
        if not cfg.box_length > 2.0 * math.pi:
            raise ConfigError(
                "decay requires box_length > 2*pi (otherwise no modes sit below |xi| = 1)"
            )
