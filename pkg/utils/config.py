# utils/config.py
"""Run configuration: one JSON file, overridable from the command line.

Example:

    {
      "mode": "ensemble",
      "data": "measurements.csv",
      "out": "results",
      "runs": 30,
      "seed": 1,
      "aco": {"population_size": 13, "q": 0.015, "xi": 0.4, "v_b": 0.0},
      "truth": {"k_bt": 1, "k_tp": 0.02, "k_pt": 0.02, "k_up": 0.08, "k_tb": 0.3, "k_pb": 0.3},
      "gamma": {"amplitude": 10, "t0": 0.2, "alpha": 2, "beta": 1.5},
      "noise_scale": 1000
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from aco.config import AcoConfig
from kinetics.errors import ConfigError
from kinetics.synth import DEFAULT_NOISE_SCALE, AcquisitionSchedule, GammaVariateParams
from kinetics.types import RATE_NAMES, RateConstants

MODES = ("simulate", "fit", "ensemble", "validate")

# Ground truth of the full-matrix synthetic experiment.
DEFAULT_TRUTH = RateConstants(k_bt=1.0, k_tp=0.02, k_pt=0.02, k_up=0.08, k_tb=0.3, k_pb=0.3)
# k_tp = 0: no flow back from pre-urine, lower-triangular matrix.
LOWER_TRIANGULAR_TRUTH = RateConstants(k_bt=0.8, k_tp=0.0, k_pt=0.02, k_up=0.08, k_tb=0.4, k_pb=0.2)


@dataclass(frozen=True)
class RunConfig:
    mode: str
    data: Optional[Path] = None
    out: Path = Path("results")
    aco: AcoConfig = field(default_factory=AcoConfig.synthetic)
    gamma: GammaVariateParams = field(default_factory=GammaVariateParams)
    schedule: AcquisitionSchedule = field(default_factory=AcquisitionSchedule.default)
    truth: RateConstants = DEFAULT_TRUTH
    noise_scale: float = DEFAULT_NOISE_SCALE
    blood_fraction: float = 0.0
    runs: int = 30
    seed: int = 0
    seeds: Optional[tuple] = None
    validate_cases: int = 20
    zero_tac: bool = False
    kidney_volume: Optional[float] = None
    bladder_volume: Optional[float] = None
    count_scale: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode in ("fit", "ensemble") and self.data is None:
            raise ConfigError(f"mode '{self.mode}' needs a measurement file (data)")
        if self.data is not None:
            object.__setattr__(self, "data", Path(self.data))
        object.__setattr__(self, "out", Path(self.out))
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.seeds is not None:
            seeds = tuple(int(s) for s in self.seeds)
            if len(set(seeds)) != len(seeds):
                raise ConfigError("seeds must be distinct")
            object.__setattr__(self, "seeds", seeds)
        if self.validate_cases < 1:
            raise ConfigError(f"validate_cases must be >= 1, got {self.validate_cases}")
        if (self.kidney_volume is None) != (self.bladder_volume is None):
            raise ConfigError("kidney_volume and bladder_volume go together")

    def run_seeds(self) -> tuple:
        """Explicit seeds, else `runs` consecutive seeds starting at `seed`."""
        if self.seeds is not None:
            return self.seeds
        return tuple(range(self.seed, self.seed + self.runs))

    @property
    def n_runs(self) -> int:
        return len(self.seeds) if self.seeds is not None else self.runs

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def _check_keys(cls, raw, section):
    if not isinstance(raw, dict):
        raise ConfigError(f"'{section}' must be an object")
    unknown = sorted(set(raw) - {f.name for f in fields(cls)})
    if unknown:
        raise ConfigError(f"unknown keys in '{section}': {unknown}")


def _build(cls, raw, section):
    _check_keys(cls, raw, section)
    try:
        return cls(**raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid '{section}': {e}") from e


def run_config_from_dict(raw: dict) -> RunConfig:
    raw = dict(raw)
    kwargs = {}
    if "aco" in raw:
        aco_raw = dict(raw.pop("aco"))
        preset = aco_raw.pop("preset", "synthetic")
        if preset not in ("synthetic", "real_data"):
            raise ConfigError(f"unknown aco preset {preset!r}")
        base = getattr(AcoConfig, preset)()
        _check_keys(AcoConfig, aco_raw, "aco")
        try:
            kwargs["aco"] = base.updated(**aco_raw)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid 'aco': {e}") from e
    if "gamma" in raw:
        kwargs["gamma"] = _build(GammaVariateParams, raw.pop("gamma"), "gamma")
    if "truth" in raw:
        truth = raw.pop("truth")
        if isinstance(truth, dict):
            missing = [n for n in RATE_NAMES if n not in truth]
            if missing:
                raise ConfigError(f"truth is missing {missing}")
            kwargs["truth"] = _build(RateConstants, truth, "truth")
        else:
            try:
                kwargs["truth"] = RateConstants.from_array(truth)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid 'truth': {e}") from e
    if "schedule" in raw:
        kwargs["schedule"] = AcquisitionSchedule(raw.pop("schedule"))
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    kwargs.update(raw)
    if "mode" not in kwargs:
        raise ConfigError("config needs a 'mode'")
    try:
        return RunConfig(**kwargs)
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e


def read_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return raw
