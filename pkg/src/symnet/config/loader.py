"""Configuration loader for training runs.

Config files are YAML or JSON (JSON parses as YAML). Values are merged over
the selected profile preset and CLI overrides are applied last.
"""

from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from symnet.config.defaults import CUSTOM_REQUIRED_KEYS, PROFILE_PRESETS
from symnet.config.settings import (
    ABLATABLE_LOSSES,
    Profile,
    SynthSpec,
    TrainConfig,
)
from symnet.errors import ConfigError, MissingFile, UnknownProfile
from symnet.logging_config import get_logger

logger = get_logger(__name__)


def _merge_dicts(base: dict, override: dict) -> dict:
    """Recursively merge override dict into base dict."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _merge_dicts(result[key], value)
        else:
            result[key] = value
    return result


def make_profile(name: str | Profile) -> TrainConfig:
    """Return the preset training config for a benchmark profile.

    Raises:
        UnknownProfile: name is not ``mit`` or ``ut``
    """
    try:
        profile = Profile(name)
    except ValueError:
        profile = None
    if profile is None or profile not in PROFILE_PRESETS:
        raise UnknownProfile(f"Unknown profile: {name}", profile=str(name))
    return PROFILE_PRESETS[profile].model_copy(deep=True)


def read_config_file(path: Path | str) -> dict[str, Any]:
    """Read a YAML/JSON mapping from disk."""
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"Config file not found: {path}", path=str(path))
    try:
        with path.open() as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        logger.error("config_yaml_error", path=str(path), error=str(e))
        raise ConfigError(f"Cannot parse config: {e}", path=str(path)) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("Config file must hold a mapping", path=str(path))
    return data


def load_train_config(
    path: Path | str | None = None,
    profile: str | Profile = Profile.MIT,
    overrides: dict[str, Any] | None = None,
) -> TrainConfig:
    """Resolve a training config from profile, file and overrides.

    Args:
        path: Optional config file mirroring TrainConfig field names
        profile: ``mit``, ``ut`` or ``custom``
        overrides: Values from CLI flags, applied last

    Returns:
        Validated TrainConfig
    """
    file_data = read_config_file(path) if path is not None else {}
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    explicit = _merge_dicts(file_data, overrides)
    if "profile" in explicit:
        profile = explicit["profile"]

    try:
        profile = Profile(profile)
    except ValueError as e:
        raise UnknownProfile(f"Unknown profile: {profile}", profile=str(profile)) from e

    if profile is Profile.CUSTOM:
        missing = [k for k in CUSTOM_REQUIRED_KEYS if k not in explicit]
        if missing:
            raise ConfigError(
                "Custom profile requires explicit values", missing=missing
            )
        base: dict[str, Any] = TrainConfig().model_dump(mode="json")
    else:
        base = make_profile(profile).model_dump(mode="json")

    merged = _merge_dicts(base, explicit)
    merged["profile"] = profile.value
    try:
        config = TrainConfig(**merged)
    except ValidationError as e:
        logger.error("config_validation_error", error=str(e))
        raise ConfigError(f"Invalid training config: {e}") from e

    logger.info(
        "config_loaded",
        path=str(path) if path else None,
        profile=config.profile.value,
        lr=config.lr,
        batch_size=config.batch_size,
        epochs=config.epochs,
    )
    return config


def load_synth_spec(path: Path | str | None = None, **overrides: Any) -> SynthSpec:
    """Read a SynthSpec file, falling back to defaults for absent keys."""
    data = read_config_file(path) if path is not None else {}
    data = _merge_dicts(data, {k: v for k, v in overrides.items() if v is not None})
    try:
        return SynthSpec(**data)
    except ValidationError as e:
        logger.error("synth_spec_validation_error", error=str(e))
        raise ConfigError(f"Invalid synthetic spec: {e}") from e


def dump_config(config: TrainConfig | SynthSpec) -> dict[str, Any]:
    """JSON-ready dict of a config."""
    return config.model_dump(mode="json")


def ablation_overrides(names: list[str]) -> dict[str, Any]:
    """Weight overrides that switch off the named loss terms.

    Raises:
        ConfigError: a name is not an ablatable loss
    """
    unknown = sorted(set(names) - set(ABLATABLE_LOSSES))
    if unknown:
        raise ConfigError(
            f"Unknown loss name(s): {', '.join(unknown)}",
            unknown=unknown,
            allowed=sorted(ABLATABLE_LOSSES),
        )
    fields = [field for name in names for field in ABLATABLE_LOSSES[name]]
    return {"weights": dict.fromkeys(fields, 0.0)} if fields else {}
