"""Experiment configuration: schema, TOML parsing, canonical emission.

The on-disk format is TOML with one table per configuration group; field
names in the file match the dataclass fields exactly. Emission is
canonical (fixed table order, fixed key order, 17 significant digits for
floats), so the emitted text doubles as the hashing base for provenance.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Tuple

import tomli

from .surfaces import (KernelSpec, SurfaceSpec, kernel_from_dict,
                       kernel_to_dict, surface_from_dict, surface_to_dict)

SAMPLER_MONTE_CARLO = "monte_carlo"
SAMPLER_GRID = "grid"

_FORMATS = ("json", "csv")


class ConfigError(ValueError):
    """Malformed configuration; message carries the offending field."""


@dataclass(frozen=True)
class EpsGridConfig:
    min: float = 1e-6
    max: float = 1e-2
    count: int = 24

    def __post_init__(self):
        if not 0.0 < self.min < self.max:
            raise ConfigError("eps_grid needs 0 < min < max")
        if self.count < 2:
            raise ConfigError("eps_grid.count must be at least 2")


@dataclass(frozen=True)
class TauBlocksConfig:
    min_exponent: int = 6
    max_exponent: int = 16
    samples_per_block: int = 8

    def __post_init__(self):
        if self.max_exponent < self.min_exponent:
            raise ConfigError("tau_blocks exponent range is empty")
        if self.samples_per_block < 1:
            raise ConfigError("tau_blocks.samples_per_block must be positive")


@dataclass(frozen=True)
class SamplerConfig:
    kind: str = SAMPLER_MONTE_CARLO
    seed: Optional[int] = None
    budget: int = 1_000_000

    def __post_init__(self):
        if self.kind not in (SAMPLER_MONTE_CARLO, SAMPLER_GRID):
            raise ConfigError(f"unknown sampler.kind {self.kind!r}")
        if self.kind == SAMPLER_MONTE_CARLO and self.seed is None:
            raise ConfigError("sampler.seed is required for monte_carlo")
        if self.budget <= 0:
            raise ConfigError("sampler.budget must be positive")


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    formats: Tuple[str, ...] = _FORMATS

    def __post_init__(self):
        object.__setattr__(self, "formats", tuple(self.formats))
        if not self.formats:
            raise ConfigError("output.formats must be nonempty")
        for f in self.formats:
            if f not in _FORMATS:
                raise ConfigError(f"unknown output format {f!r}")


@dataclass(frozen=True)
class TolerancesConfig:
    exponent: float = 0.05

    def __post_init__(self):
        if self.exponent <= 0.0:
            raise ConfigError("tolerances.exponent must be positive")


@dataclass(frozen=True)
class VdcConfig:
    phase_exponents: Tuple[float, ...]
    phase_coefficients: Tuple[float, ...]
    amplitude_b: float = 0.0
    delta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phase_exponents",
                           tuple(float(x) for x in self.phase_exponents))
        object.__setattr__(self, "phase_coefficients",
                           tuple(float(x) for x in self.phase_coefficients))
        if len(self.phase_exponents) != len(self.phase_coefficients):
            raise ConfigError("vdc exponent and coefficient lists must match")
        if not 0.0 <= self.amplitude_b < 1.0:
            raise ConfigError("vdc.amplitude_b must lie in [0, 1)")
        if not 0.0 < self.delta <= 1.0:
            raise ConfigError("vdc.delta must lie in (0, 1]")


@dataclass(frozen=True)
class ExperimentConfig:
    surface: SurfaceSpec
    kernel: KernelSpec
    eps_grid: EpsGridConfig = field(default_factory=EpsGridConfig)
    tau_blocks: TauBlocksConfig = field(default_factory=TauBlocksConfig)
    sampler: SamplerConfig = None
    output: OutputConfig = field(default_factory=OutputConfig)
    tolerances: TolerancesConfig = field(default_factory=TolerancesConfig)
    vdc: Optional[VdcConfig] = None

    def __post_init__(self):
        if self.kernel.m != self.surface.m:
            raise ConfigError(
                f"kernel has {self.kernel.m} weight exponents but the "
                f"surface domain is {self.surface.m}-dimensional")
        if self.sampler is None:
            object.__setattr__(self, "sampler", SamplerConfig(seed=0))


_TABLE_FIELDS = {
    "surface": ("class", "m", "n", "exponents", "coefficients"),
    "kernel": ("a", "r", "lower_bounded"),
    "eps_grid": ("min", "max", "count"),
    "tau_blocks": ("min_exponent", "max_exponent", "samples_per_block"),
    "sampler": ("kind", "seed", "budget"),
    "output": ("directory", "formats"),
    "tolerances": ("exponent",),
    "vdc": ("phase_exponents", "phase_coefficients", "amplitude_b", "delta"),
}


def _check_fields(table: str, doc: dict) -> None:
    allowed = _TABLE_FIELDS[table]
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"unknown field {table}.{key}")


def _build_section(cls, table: str, doc: dict):
    _check_fields(table, doc)
    try:
        return cls(**doc)
    except TypeError as exc:
        raise ConfigError(f"bad {table} table: {exc}") from None


def config_from_dict(doc: dict) -> ExperimentConfig:
    for key in doc:
        if key not in _TABLE_FIELDS:
            raise ConfigError(f"unknown table [{key}]")
    for table in ("surface", "kernel"):
        if table not in doc:
            raise ConfigError(f"missing required table [{table}]")
        if not isinstance(doc[table], dict):
            raise ConfigError(f"[{table}] must be a table")
    _check_fields("surface", doc["surface"])
    _check_fields("kernel", doc["kernel"])
    try:
        surface = surface_from_dict(doc["surface"])
    except ValueError as exc:
        raise ConfigError(f"surface: {exc}") from None
    try:
        kernel = kernel_from_dict(doc["kernel"])
    except ValueError as exc:
        raise ConfigError(f"kernel: {exc}") from None
    kwargs = {"surface": surface, "kernel": kernel}
    for table, cls in (("eps_grid", EpsGridConfig),
                       ("tau_blocks", TauBlocksConfig),
                       ("sampler", SamplerConfig),
                       ("output", OutputConfig),
                       ("tolerances", TolerancesConfig)):
        if table in doc:
            kwargs[table] = _build_section(cls, table, dict(doc[table]))
    if "vdc" in doc:
        kwargs["vdc"] = _build_section(VdcConfig, "vdc", dict(doc["vdc"]))
    return ExperimentConfig(**kwargs)


def parse_config(text: str) -> ExperimentConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from None
    return config_from_dict(doc)


def load_config(path) -> ExperimentConfig:
    with open(path, "rb") as handle:
        text = handle.read().decode("utf-8")
    return parse_config(text)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    doc = {
        "surface": surface_to_dict(cfg.surface),
        "kernel": kernel_to_dict(cfg.kernel),
        "eps_grid": {"min": cfg.eps_grid.min, "max": cfg.eps_grid.max,
                     "count": cfg.eps_grid.count},
        "tau_blocks": {"min_exponent": cfg.tau_blocks.min_exponent,
                       "max_exponent": cfg.tau_blocks.max_exponent,
                       "samples_per_block": cfg.tau_blocks.samples_per_block},
        "sampler": {"kind": cfg.sampler.kind,
                    **({"seed": cfg.sampler.seed}
                       if cfg.sampler.seed is not None else {}),
                    "budget": cfg.sampler.budget},
        "output": {"directory": cfg.output.directory,
                   "formats": list(cfg.output.formats)},
        "tolerances": {"exponent": cfg.tolerances.exponent},
    }
    if cfg.vdc is not None:
        doc["vdc"] = {
            "phase_exponents": list(cfg.vdc.phase_exponents),
            "phase_coefficients": list(cfg.vdc.phase_coefficients),
            "amplitude_b": cfg.vdc.amplitude_b,
            "delta": cfg.vdc.delta,
        }
    return doc


def format_float(x: float) -> str:
    """17-significant-digit TOML float literal."""
    out = format(float(x), ".17g")
    if not any(ch in out for ch in ".eE") or out.endswith("."):
        out += ".0"
    return out


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def emit_config(cfg: ExperimentConfig, include_output: bool = True) -> str:
    """Canonical TOML text; fixed ordering makes it hashable provenance."""
    doc = config_to_dict(cfg)
    lines = []
    for table in _TABLE_FIELDS:
        if table not in doc or (table == "output" and not include_output):
            continue
        if lines:
            lines.append("")
        lines.append(f"[{table}]")
        for key in _TABLE_FIELDS[table]:
            if key in doc[table]:
                lines.append(f"{key} = {_toml_value(doc[table][key])}")
    lines.append("")
    return "\n".join(lines)


def config_hash(cfg: ExperimentConfig) -> str:
    """Digest of the experiment content; the output table is excluded so
    relocating artifacts does not change identity."""
    text = emit_config(cfg, include_output=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
