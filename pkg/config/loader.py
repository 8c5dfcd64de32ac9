"""Loading, overriding and fingerprinting experiment configs"""

import hashlib
import json
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from config.schema import ExperimentConfig
from utils.errors import ConfigError
from utils.logging import get_logger

logger = get_logger(__name__)


def _read_document(path: Path) -> dict:
    try:
        if path.suffix == ".toml":
            with open(path, "rb") as handle:
                return tomllib.load(handle)
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot parse {path}: {e}")


def validate_config(document: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"invalid config: {problems}")


def load_config(path: Optional[Union[str, Path]] = None) -> ExperimentConfig:
    """Read a TOML or JSON config; no path gives the built-in defaults"""
    if path is None:
        logger.info("No config file given, using defaults")
        return ExperimentConfig()
    path = Path(path)
    config = validate_config(_read_document(path))
    logger.info(f"Loaded config {path} (fingerprint {config_fingerprint(config)})")
    return config


def apply_overrides(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    out_dir: Optional[str] = None,
    threads: Optional[int] = None,
) -> ExperimentConfig:
    """Apply command-line flags on top of the config, logging each override"""
    document = config.model_dump()
    if seed is not None:
        logger.info(f"Override: seed {document['generator']['seed']}/{document['training']['seed']} -> {seed}")
        document["generator"]["seed"] = seed
        document["training"]["seed"] = seed
    if out_dir is not None:
        logger.info(f"Override: out_dir {document['paths']['out_dir']} -> {out_dir}")
        document["paths"]["out_dir"] = out_dir
    if threads is not None:
        logger.info(f"Override: threads {document['threads']} -> {threads}")
        document["threads"] = threads
    return validate_config(document)


def config_fingerprint(config: ExperimentConfig) -> str:
    """First 16 hex chars of the SHA-256 of the canonical JSON dump"""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
