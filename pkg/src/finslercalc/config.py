"""Run configuration for the identity-verification harness.

Configs are plain YAML; every field has an embedded default so the
harness runs with no file at all.  A fixed seed makes reports
byte-identical across runs (sampling uses numpy's PCG64 generator,
seeded per suite from the 64-bit run seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import yaml

SUITE_NAMES = ("euler", "frame", "brackets", "forms", "operators",
               "transitions", "poincare")

DEFAULT_METRICS = ("euclidean", "riemannian", "randers", "minkowski-quartic")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    dims: tuple = (2, 3, 4)
    metrics: tuple = DEFAULT_METRICS
    samples: int = 200               # random points per identity
    poincare_forms: int = 20         # d'-exact 1-form fields to reconstruct
    seed: int = 42
    tolerance_overrides: dict = field(default_factory=dict)
    output: str | None = None

    def __post_init__(self):
        for n in self.dims:
            if not 2 <= n <= 6:
                raise ConfigError(f"dimension {n} outside [2, 6]")
        for m in self.metrics:
            if m not in DEFAULT_METRICS:
                raise ConfigError(f"unknown metric name {m!r}")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        for k, v in self.tolerance_overrides.items():
            if not v > 0:
                raise ConfigError(f"tolerance override {k!r} must be > 0, got {v}")


def default_config() -> RunConfig:
    return RunConfig()


def load_config(path: str) -> RunConfig:
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a mapping")
    kwargs = {}
    for key in ("dims", "metrics"):
        if key in data:
            kwargs[key] = tuple(data.pop(key))
    for key in ("samples", "poincare_forms", "seed"):
        if key in data:
            kwargs[key] = int(data.pop(key))
    if "tolerance_overrides" in data:
        kwargs["tolerance_overrides"] = {
            str(k): float(v) for k, v in (data.pop("tolerance_overrides") or {}).items()
        }
    if "output" in data:
        kwargs["output"] = data.pop("output")
    if data:
        raise ConfigError(f"unknown config keys: {sorted(data)}")
    return RunConfig(**kwargs)


def with_overrides(cfg: RunConfig, **kwargs) -> RunConfig:
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return replace(cfg, **kwargs) if kwargs else cfg
