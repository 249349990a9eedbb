"""Pipeline configuration: every tunable named by the toolkit, one place.

Loadable from TOML or JSON ({"lift": {...}, "cost": {...}, "metric": {...},
"we": {...}, "et": {...}, "solver_step": ...}); unknown keys are rejected so
typos fail loudly.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .geodesic import MetricParams
from .width import ETParams, WEParams


@dataclass(frozen=True)
class LiftParams:
    n_theta: int = 32
    kernel_size: int = 15
    spline_order: int = 3
    spatial_sigma: float | None = None
    dc_cutoff: float = 0.01


@dataclass(frozen=True)
class CostParams:
    sigmas: tuple[float, ...] = (1.0, 2.0)
    beta: float = 50.0
    c_min: float = 0.03

    def __post_init__(self):
        object.__setattr__(self, "sigmas", tuple(self.sigmas))


@dataclass(frozen=True)
class PipelineConfig:
    lift: LiftParams = field(default_factory=LiftParams)
    cost: CostParams = field(default_factory=CostParams)
    metric: MetricParams = field(default_factory=MetricParams)
    we: WEParams = field(default_factory=WEParams)
    et: ETParams = field(default_factory=ETParams)
    solver_step: float = 0.25

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["cost"]["sigmas"] = list(d["cost"]["sigmas"])
        return d

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for name, sub_cls in (
            ("lift", LiftParams),
            ("cost", CostParams),
            ("metric", MetricParams),
            ("we", WEParams),
            ("et", ETParams),
        ):
            if name in raw:
                sub_known = {f.name for f in dataclasses.fields(sub_cls)}
                sub_unknown = set(raw[name]) - sub_known
                if sub_unknown:
                    raise ValueError(f"unknown {name} keys: {sorted(sub_unknown)}")
                kwargs[name] = sub_cls(**raw[name])
        if "solver_step" in raw:
            kwargs["solver_step"] = float(raw["solver_step"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        path = Path(path)
        text = path.read_bytes()
        if path.suffix.lower() == ".json":
            return cls.from_dict(json.loads(text))
        return cls.from_dict(tomllib.loads(text.decode()))
