"""Config and grid files.

Files are read with ``mmengine.Config.fromfile``, so JSON files and
mmengine-style Python configs (with ``_base_`` inheritance) are both
accepted. Summarizer fields may sit at the top level or under a
``summarizer`` dict; encoder options go under ``encoder``.
"""
import logging
from dataclasses import fields
from pathlib import Path

from mmengine.config import Config

from .encoder import EncoderSpec
from .exceptions import ConfigError, DataIOError
from .harness import GridSpec
from .summarizer import SummarizerConfig

logger = logging.getLogger(__name__)

ENCODER_FIELDS = tuple(f.name for f in fields(EncoderSpec))


def read_config_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise DataIOError(f"config file not found: {path}")
    try:
        cfg = Config.fromfile(str(path))
    except OSError as exc:
        raise DataIOError(f"cannot read config {path}: {exc}") from exc
    except (ValueError, TypeError, SyntaxError, KeyError) as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc
    return cfg.to_dict()


def split_config(values: dict):
    """Separate summarizer fields from encoder options; anything else is an error."""
    values = dict(values)
    summarizer = dict(values.pop('summarizer', None) or {})
    encoder = dict(values.pop('encoder', None) or {})
    unknown = sorted(set(values) - set(SummarizerConfig.field_names()))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    summarizer.update(values)
    unknown = sorted(set(encoder) - set(ENCODER_FIELDS))
    if unknown:
        raise ConfigError(f"unknown encoder keys: {', '.join(unknown)}")
    return summarizer, encoder


def _present(overrides):
    return {key: value for key, value in (overrides or {}).items() if value is not None}


def check_overrides(summarizer_overrides):
    """Validate command-line values on their own, before any config file is merged in."""
    SummarizerConfig.from_dict(_present(summarizer_overrides))


def resolve(config_path=None, summarizer_overrides=None, encoder_overrides=None):
    """Effective (SummarizerConfig, EncoderSpec): flag > config file > built-in default."""
    summarizer, encoder = {}, {}
    if config_path:
        summarizer, encoder = split_config(read_config_file(config_path))
        logger.info(f"Loaded config {config_path}")
    summarizer.update(_present(summarizer_overrides))
    encoder.update(_present(encoder_overrides))
    try:
        return SummarizerConfig.from_dict(summarizer), EncoderSpec(**encoder)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_grid(path) -> GridSpec:
    values = read_config_file(path)
    return GridSpec.from_dict(values)
