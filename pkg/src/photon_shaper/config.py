"""Run configuration: a JSON document mapped onto nested dataclasses.

Unknown keys are rejected, and every section is validated against the same
rules the library objects enforce.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any, Optional, get_type_hints

__all__ = [
    "ConfigError",
    "GridConfig",
    "PulseConfig",
    "CavityConfig",
    "OracleSection",
    "ModulationConfig",
    "CodebookConfig",
    "OutputConfig",
    "RunConfig",
    "load_config",
    "apply_override",
]


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (CLI exit code 2)."""


@dataclass
class GridConfig:
    n: int = 16384
    delta_omega: float = 0.003


@dataclass
class PulseConfig:
    shape: str = "gaussian"
    sigma: float = 0.02
    center: float = 0.0  # arrival time t0 of the pulse centre
    file: Optional[str] = None


@dataclass
class CavityConfig:
    gamma: float = 1.0
    delta: float = 0.0


@dataclass
class OracleSection:
    dt: Optional[float] = None
    window: Optional[list] = None


@dataclass
class ModulationConfig:
    epsilon: float = 0.05
    big_omega: float = 0.3
    oracle: OracleSection = field(default_factory=OracleSection)


@dataclass
class CodebookConfig:
    kind: str = "timebin"
    K: int = 4
    bin_width: float = 50.0
    file: Optional[str] = None
    bits: Optional[str] = None
    threshold: float = 0.5


@dataclass
class OutputConfig:
    path: str = "out"
    format: str = "csv"


@dataclass
class RunConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    pulse: PulseConfig = field(default_factory=PulseConfig)
    cavity: CavityConfig = field(default_factory=CavityConfig)
    modulation: ModulationConfig = field(default_factory=ModulationConfig)
    codebook: CodebookConfig = field(default_factory=CodebookConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self) -> "RunConfig":
        g, pu, cv, md, cb, out = (
            self.grid, self.pulse, self.cavity, self.modulation, self.codebook, self.output,
        )
        _check(isinstance(g.n, int) and g.n >= 8, "grid.n must be an integer >= 8")
        _check(_pos(g.delta_omega), "grid.delta_omega must be > 0")
        _check(pu.shape in ("gaussian", "custom-file"), "pulse.shape must be gaussian or custom-file")
        if pu.shape == "gaussian":
            _check(_pos(pu.sigma), "pulse.sigma must be > 0")
        else:
            _check(bool(pu.file), "pulse.file is required for a custom-file pulse")
        _check(_finite(pu.center), "pulse.center must be finite")
        _check(_pos(cv.gamma), "cavity.gamma must be > 0")
        _check(_finite(cv.delta), "cavity.delta must be finite")
        _check(_finite(md.epsilon) and md.epsilon >= 0, "modulation.epsilon must be >= 0")
        _check(_pos(md.big_omega), "modulation.big_omega must be > 0")
        if md.oracle.dt is not None:
            _check(_pos(md.oracle.dt), "modulation.oracle.dt must be > 0")
        if md.oracle.window is not None:
            w = md.oracle.window
            _check(
                isinstance(w, list) and len(w) == 2 and all(_finite(x) for x in w) and w[0] < w[1],
                "modulation.oracle.window must be [t_start, t_end] with t_start < t_end",
            )
        _check(cb.kind in ("timebin", "file"), "codebook.kind must be timebin or file")
        if cb.kind == "timebin":
            _check(isinstance(cb.K, int) and cb.K >= 1, "codebook.K must be a positive integer")
            _check(_pos(cb.bin_width), "codebook.bin_width must be > 0")
        else:
            _check(bool(cb.file), "codebook.file is required for kind=file")
        if cb.bits is not None:
            _check(
                isinstance(cb.bits, str) and cb.bits and set(cb.bits) <= {"0", "1"},
                "codebook.bits must be a string of 0/1",
            )
        _check(0 < cb.threshold < 1, "codebook.threshold must lie in (0, 1)")
        _check(out.format in ("csv", "json"), "output.format must be csv or json")
        return self


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and x == x and abs(x) != float("inf")


def _pos(x) -> bool:
    return _finite(x) and x > 0


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _build(cls, data: Any, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'} must be an object")
    hints = get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where or 'config'}: {', '.join(unknown)}")
    kwargs = {}
    for name, value in data.items():
        typ = hints[name]
        key = f"{where}.{name}" if where else name
        if dataclasses.is_dataclass(typ):
            kwargs[name] = _build(typ, value, key)
        else:
            kwargs[name] = _coerce(typ, value, key)
    return cls(**kwargs)


def _coerce(typ, value, key):
    if value is None:
        return None
    if typ is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if typ is int and isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def load_config(path=None, overrides: Optional[dict] = None) -> RunConfig:
    """Read a JSON config (or defaults when ``path`` is None) and apply overrides."""
    data: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    for key, value in (overrides or {}).items():
        apply_override(data, key, value)
    return _build(RunConfig, data, "").validate()


def apply_override(data: dict, key: str, value: Any) -> None:
    """Set a dotted ``key`` such as ``cavity.gamma`` inside a raw config dict."""
    parts = key.split(".")
    node = data
    for part in parts[:-1]:
        nxt = node.setdefault(part, {})
        if not isinstance(nxt, dict):
            raise ConfigError(f"cannot override {key}: {part} is not a section")
        node = nxt
    node[parts[-1]] = value
