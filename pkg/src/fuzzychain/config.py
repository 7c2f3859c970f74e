"""Experiment configuration: defaults, file parsing, validation.

The whole harness is driven by one ExperimentConfig value; a run is a
pure function of (config, seed inside it). Parsing collects *all*
field-level problems before failing so a config file can be fixed in
one pass.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .ledger import CURVES, DEFAULT_CURVE

EXPERIMENTS = ("exp1", "exp2", "custom")
GRANULARITIES = ("per-label", "per-participant")

# defaults: 990 validators split VL-heavy, five labels on [0, 10]
DEFAULT_LABELS = ("VL", "L", "M", "H", "VH")
DEFAULT_POPULATION = {"VL": 500, "L": 300, "M": 150, "H": 30, "VH": 10}

DIST_PARAMS = {
    "lognormal": ("mu", "sigma"),
    "pareto": ("shape", "scale"),
    "uniform": ("lo", "hi"),
    "constant": ("value",),
}


class ConfigError(ValueError):
    """Invalid configuration; .errors lists every field-level problem."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid config: " + "; ".join(self.errors))


def sample_dist(spec: dict, n: int, rng) -> np.ndarray:
    """Draw n values from a distribution spec (see DIST_PARAMS for shapes)."""
    kind = spec["type"]
    if kind == "lognormal":
        return rng.lognormal(mean=spec["mu"], sigma=spec["sigma"], size=n)
    if kind == "pareto":
        return (rng.pareto(spec["shape"], size=n) + 1.0) * spec["scale"]
    if kind == "uniform":
        return rng.uniform(spec["lo"], spec["hi"], size=n)
    if kind == "constant":
        return np.full(n, float(spec["value"]))
    raise ConfigError([f"distribution type {kind!r} not one of {sorted(DIST_PARAMS)}"])


def _check_dist(name: str, spec, errors: list[str]) -> None:
    if not isinstance(spec, dict) or "type" not in spec:
        errors.append(f"{name}: expected an object with a 'type' key")
        return
    kind = spec["type"]
    if kind not in DIST_PARAMS:
        errors.append(f"{name}.type: {kind!r} not one of {sorted(DIST_PARAMS)}")
        return
    for p in DIST_PARAMS[kind]:
        if p not in spec:
            errors.append(f"{name}.{p}: required for type {kind!r}")
            return
        try:
            float(spec[p])
        except (TypeError, ValueError):
            errors.append(f"{name}.{p}: expected a number, got {spec[p]!r}")
            return
    if kind == "lognormal" and spec["sigma"] <= 0:
        errors.append(f"{name}.sigma: must be positive")
    if kind == "pareto" and (spec["shape"] <= 0 or spec["scale"] <= 0):
        errors.append(f"{name}: shape and scale must be positive")
    if kind == "uniform" and not spec["lo"] < spec["hi"]:
        errors.append(f"{name}: lo must be strictly below hi")
    if kind == "constant" and spec["value"] <= 0:
        errors.append(f"{name}.value: must be positive")


@dataclass(frozen=True)
class BaselineConfig:
    """PoW/PoS/DPoS population shapes for the comparison experiment."""

    participants: int = 100
    rounds: int = 100
    pow_power_dist: dict = field(
        default_factory=lambda: {"type": "lognormal", "mu": 0.0, "sigma": 2.0}
    )
    pos_stake_dist: dict = field(
        default_factory=lambda: {"type": "lognormal", "mu": 0.0, "sigma": 1.0}
    )
    dpos_stake_dist: dict = field(
        default_factory=lambda: {"type": "constant", "value": 1.0}
    )
    dpos_reputation_dist: dict = field(
        default_factory=lambda: {"type": "uniform", "lo": 0.5, "hi": 1.0}
    )


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "exp1"
    seed: int = 42
    universe_lo: float = 0.0
    universe_hi: float = 10.0
    labels: tuple = DEFAULT_LABELS
    population_per_label: dict = field(default_factory=lambda: dict(DEFAULT_POPULATION))
    rounds: tuple = (100,)
    repetitions: int = 20
    eta: float = 0.1
    l_divisor: float = 20.0
    epsilon: float = 0.25
    commission: float = 0.05
    byzantine_rate: float = 0.0
    invalid_block_rate: float = 0.0
    fuzzychain_rounds: int = 500  # rounds for the fuzzy side of the comparison run
    granularity: str = "per-label"
    curve: str = DEFAULT_CURVE
    baselines: BaselineConfig = field(default_factory=BaselineConfig)

    def validate(self) -> "ExperimentConfig":
        errors: list[str] = []
        if self.experiment not in EXPERIMENTS:
            errors.append(f"experiment: {self.experiment!r} not one of {EXPERIMENTS}")
        if not isinstance(self.seed, int) or self.seed < 0:
            errors.append(f"seed: expected a non-negative integer, got {self.seed!r}")
        if not self.universe_lo < self.universe_hi:
            errors.append("universe_lo: must be strictly below universe_hi")
        n = len(self.labels)
        if n < 3 or n % 2 == 0:
            errors.append(f"labels: odd count >= 3 required, got {n}")
        if len(set(self.labels)) != n:
            errors.append("labels: duplicates not allowed")
        extra = set(self.population_per_label) - set(self.labels)
        missing = set(self.labels) - set(self.population_per_label)
        if extra:
            errors.append(f"population_per_label: unknown labels {sorted(extra)}")
        if missing:
            errors.append(f"population_per_label: missing labels {sorted(missing)}")
        for k, v in self.population_per_label.items():
            if not isinstance(v, int) or v < 0:
                errors.append(f"population_per_label.{k}: expected an integer >= 0, got {v!r}")
        if not self.rounds:
            errors.append("rounds: at least one round count required")
        for r in self.rounds:
            if not isinstance(r, int) or r < 1:
                errors.append(f"rounds: every entry must be an integer >= 1, got {r!r}")
        if not isinstance(self.repetitions, int) or self.repetitions < 1:
            errors.append(f"repetitions: expected an integer >= 1, got {self.repetitions!r}")
        if not 0 < self.eta <= 1:
            errors.append(f"eta: must lie in (0, 1], got {self.eta}")
        if self.l_divisor <= 0:
            errors.append(f"l_divisor: must be positive, got {self.l_divisor}")
        if not 0 <= self.epsilon < 1:
            errors.append(f"epsilon: must lie in [0, 1), got {self.epsilon}")
        if self.commission < 0:
            errors.append(f"commission: must be non-negative, got {self.commission}")
        for rate_name in ("byzantine_rate", "invalid_block_rate"):
            rate = getattr(self, rate_name)
            if not 0 <= rate <= 1:
                errors.append(f"{rate_name}: must lie in [0, 1], got {rate}")
        if not isinstance(self.fuzzychain_rounds, int) or self.fuzzychain_rounds < 1:
            errors.append(f"fuzzychain_rounds: expected an integer >= 1, got {self.fuzzychain_rounds!r}")
        if self.granularity not in GRANULARITIES:
            errors.append(f"granularity: {self.granularity!r} not one of {GRANULARITIES}")
        if self.curve not in CURVES:
            errors.append(f"curve: {self.curve!r} not one of {sorted(CURVES)}")
        b = self.baselines
        if not isinstance(b.participants, int) or b.participants < 1:
            errors.append(f"baselines.participants: expected an integer >= 1, got {b.participants!r}")
        if not isinstance(b.rounds, int) or b.rounds < 1:
            errors.append(f"baselines.rounds: expected an integer >= 1, got {b.rounds!r}")
        for dist_name in ("pow_power_dist", "pos_stake_dist", "dpos_stake_dist",
                          "dpos_reputation_dist"):
            _check_dist(f"baselines.{dist_name}", getattr(b, dist_name), errors)
        if errors:
            raise ConfigError(errors)
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["labels"] = list(self.labels)
        d["rounds"] = list(self.rounds)
        return d


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build and validate a config from a parsed key-value document."""
    if not isinstance(data, dict):
        raise ConfigError(["top level: expected a key-value object"])
    errors: list[str] = []
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        errors.append(f"unknown keys: {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            continue
        if key == "labels":
            kwargs[key] = tuple(value)
        elif key == "rounds":
            kwargs[key] = tuple(value) if isinstance(value, (list, tuple)) else (value,)
        elif key == "baselines":
            if not isinstance(value, dict):
                errors.append("baselines: expected a key-value object")
                continue
            bknown = {f.name for f in fields(BaselineConfig)}
            bunknown = set(value) - bknown
            if bunknown:
                errors.append(f"baselines: unknown keys {sorted(bunknown)}")
                continue
            kwargs[key] = BaselineConfig(**value)
        else:
            kwargs[key] = value
    if errors:
        raise ConfigError(errors)
    try:
        cfg = ExperimentConfig(**kwargs)
    except TypeError as e:
        raise ConfigError([str(e)]) from None
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError([f"config file not found: {p}"])
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError([f"config file is not valid JSON: {e}"])
    return config_from_dict(data)


def exp1_config(**overrides) -> ExperimentConfig:
    return replace(ExperimentConfig(experiment="exp1"), **overrides).validate()


def exp2_config(**overrides) -> ExperimentConfig:
    return replace(ExperimentConfig(experiment="exp2"), **overrides).validate()
