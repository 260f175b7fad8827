"""Configuration loading and saving."""

import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import load_dotenv

from src.domain.errors import ConfigError

from .schema import DEFAULTS, merge_config, validate_config

logger = logging.getLogger(__name__)

# Environment variables (also read from .env) that override config keys.
ENV_OVERRIDES = {
    "IDENT_LOG_LEVEL": ("logging", "level", str),
    "IDENT_LOG_DIR": ("logging", "dir", str),
    "IDENT_MAX_WORKERS": ("parallel", "max_workers", int),
}


def apply_env_overrides(config: Dict) -> Dict:
    load_dotenv()
    for var, (section, key, cast) in ENV_OVERRIDES.items():
        raw = os.getenv(var)
        if raw is None or raw == "":
            continue
        try:
            config.setdefault(section, {})[key] = cast(raw)
        except ValueError:
            raise ConfigError(f"environment variable {var}={raw!r} is not a valid {cast.__name__}")
        logger.debug("Config %s.%s overridden from %s", section, key, var)
    return config


def load_config(config_path: Optional[str] = "config.json", overrides: Optional[Dict] = None) -> Dict:
    """Load configuration: defaults, then the JSON file, then env vars, then overrides.

    An empty config_path skips the file. The result is validated.
    """
    config = merge_config(DEFAULTS, {})
    if config_path:
        path = Path(config_path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                config = merge_config(config, json.load(f))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path} is not valid JSON: {e}")
    config = apply_env_overrides(config)
    if overrides:
        config = merge_config(config, overrides)
    return validate_config(config)


def save_config(config: Dict, config_path: str = "config.json") -> bool:
    """Save configuration to JSON file."""
    try:
        Path(config_path).parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, "w", encoding="utf-8") as f:
            json.dump(config, f, ensure_ascii=False, indent=2)
        return True
    except OSError as e:
        logger.warning("Could not save config to %s: %s", config_path, e)
        return False
