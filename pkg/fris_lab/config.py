import io
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from dotenv.parser import parse_stream
from pydantic import ValidationError

from models.experiment import ExperimentConfig
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

# Sweeping "grid" sets my and mz together.
GRID_SWEEP_KEY = "grid"


def parse_config_text(text: str) -> Dict[str, str]:
    """Parse flat ``key = value`` text with ``#`` comments.

    Values are taken literally: nothing is exported to the process environment and no
    ``${VAR}`` interpolation happens.

    Raises:
        ConfigError: If a line cannot be parsed, has no value, or repeats a key
    """
    values: Dict[str, str] = {}
    for binding in parse_stream(io.StringIO(text)):
        line = binding.original.line
        if binding.error:
            raise ConfigError(f"line {line}: cannot parse {binding.original.string.strip()!r}")
        if binding.key is None:
            continue
        if binding.value is None:
            raise ConfigError(f"line {line}: key {binding.key!r} has no '= value'")
        if binding.key in values:
            raise ConfigError(f"line {line}: key {binding.key!r} is set twice")
        values[binding.key] = binding.value
    return values


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    values = parse_config_text(text)
    logger.info("📂 Loaded %d settings from %s", len(values), path)
    return values


def parse_assignments(items: Sequence[str]) -> Dict[str, str]:
    """Turn repeated ``key=value`` command-line items into a mapping; later items win."""
    values: Dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"expected key=value, got {item!r}")
        values[key.strip()] = value.strip()
    return values


def _describe(error: ValidationError) -> str:
    parts = []
    for detail in error.errors():
        field = ".".join(str(loc) for loc in detail["loc"]) or "config"
        parts.append(f"{field}: {detail['msg']}")
    return "; ".join(parts)


def build_config(values: Mapping[str, Any]) -> ExperimentConfig:
    """Validate raw settings into an ExperimentConfig.

    Raises:
        ConfigError: If a key is unknown or a value fails validation
    """
    unknown = sorted(set(values) - set(ExperimentConfig.model_fields))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {_describe(e)}") from e


def load_experiment_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
    out_path: Optional[str] = None,
) -> ExperimentConfig:
    """File settings, then ``--set`` overrides, then ``--seed`` and ``--out``."""
    values: Dict[str, Any] = load_config_file(path) if path else {}
    values.update(parse_assignments(overrides))
    if seed is not None:
        values["master_seed"] = seed
    if out_path is not None:
        values["out_path"] = out_path
    config = build_config(values)
    logger.debug("Experiment configuration: %s", config.model_dump(mode="json"))
    return config


def with_overrides(config: ExperimentConfig, updates: Mapping[str, Any]) -> ExperimentConfig:
    return build_config({**config.model_dump(), **updates})


def parse_sweep(vary: str) -> Tuple[str, List[str]]:
    """Split ``key=v1,v2,...`` into the key and its values.

    Raises:
        ConfigError: If the key is unknown or no values are given
    """
    key, sep, raw = vary.partition("=")
    key = key.strip()
    values = [value.strip() for value in raw.split(",") if value.strip()]
    if not sep or not values:
        raise ConfigError(f"expected --vary key=v1,v2,..., got {vary!r}")
    if key != GRID_SWEEP_KEY and key not in ExperimentConfig.model_fields:
        raise ConfigError(f"cannot sweep unknown key {key!r}")
    return key, values


def sweep_configs(base: ExperimentConfig, key: str, values: Sequence[str]) -> List[ExperimentConfig]:
    configs = []
    for value in values:
        updates = {"my": value, "mz": value} if key == GRID_SWEEP_KEY else {key: value}
        configs.append(with_overrides(base, updates))
    return configs
