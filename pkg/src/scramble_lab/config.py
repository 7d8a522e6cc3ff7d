"""Experiment configuration: key-value config files, precedence and validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .experiments import EXPERIMENTS, IntList, Param
from .rng import RngSeed, default_seed

RESERVED = {"experiment", "seed", "stream", "output", "format", "workers", "check"}
FORMATS = ("csv", "json")


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict = field(default_factory=dict)
    seed: RngSeed = field(default_factory=default_seed)
    output_path: str | None = None
    format: str = "json"
    workers: int = 1
    check: bool = False

    def to_dict(self) -> dict:
        params = {k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in self.parameters.items()}
        return {"experiment": self.experiment, "parameters": params,
                "seed": {"master": self.seed.master, "stream": self.seed.stream},
                "output_path": self.output_path, "format": self.format}


def parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def coerce(name: str, spec: Param, value):
    try:
        if spec.type is bool:
            return parse_bool(value)
        if spec.type is IntList:
            return IntList(value)
        return spec.type(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {name!r}: {value!r} ({exc})") from None


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def resolve(experiment: str | None, file_values: dict | None = None,
            flag_values: dict | None = None) -> ExperimentConfig:
    """Flags override config-file values, which override defaults.  Unknown keys are rejected."""
    file_values = dict(file_values or {})
    flag_values = {k: v for k, v in (flag_values or {}).items() if v is not None}
    experiment = experiment or file_values.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {sorted(EXPERIMENTS)}")
    if file_values.get("experiment", experiment) != experiment:
        raise ConfigError(f"config file is for {file_values['experiment']!r}, not {experiment!r}")
    schema = EXPERIMENTS[experiment][1]
    merged = {**file_values, **flag_values}
    unknown = set(merged) - set(schema) - RESERVED
    if unknown:
        raise ConfigError(f"unknown keys for {experiment}: {sorted(unknown)}")
    params = {name: coerce(name, spec, merged.get(name, spec.default)) for name, spec in schema.items()}
    base = default_seed()
    seed = RngSeed(int(merged.get("seed", base.master)), int(merged.get("stream", base.stream)))
    fmt = str(merged.get("format", "json"))
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    return ExperimentConfig(experiment, params, seed, merged.get("output"), fmt,
                            int(merged.get("workers", 1)), parse_bool(merged.get("check", False)))
