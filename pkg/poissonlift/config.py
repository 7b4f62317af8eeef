"""
Runtime settings loaded from data/settings.yml
"""

import os
import logging
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, Field, ValidationError

logger = logging.getLogger(__name__)


def project_dir() -> Path:
    """Project root; POISSONLIFT_DIR overrides the checkout location"""
    override = os.getenv("POISSONLIFT_DIR")
    if override:
        return Path(override)
    return Path(__file__).parent.parent


def data_dir() -> Path:
    return project_dir() / "data"


class Settings(BaseModel):
    """Defaults for the zero test and for logging"""

    seed: int = 20240607
    samples: int = Field(32, ge=1)
    tolerance: float = Field(1e-9, gt=0)
    sample_low: str = "1/2"
    sample_high: str = "3/2"
    sample_denominator: int = Field(1024, ge=2)
    log_level: str = "WARNING"
    log_file: Optional[str] = None
    examples_dir: str = "data/examples"

    def examples_path(self) -> Path:
        path = Path(self.examples_dir)
        return path if path.is_absolute() else project_dir() / path


def load_yaml_file(file_path: Path) -> Optional[dict]:
    """Load a YAML file and return its contents, or None when it is absent or unreadable"""
    try:
        with open(file_path, "r") as f:
            return yaml.safe_load(f)
    except FileNotFoundError:
        logger.warning(f"File not found at {file_path}")
        return None
    except yaml.YAMLError as error:
        logger.error(f"Error parsing YAML file {file_path}: {error}")
        return None


def load_settings(path: Optional[Path] = None) -> Settings:
    """Read settings.yml; missing keys fall back to the model defaults"""
    if path is None:
        path = data_dir() / "settings.yml"
    raw = load_yaml_file(Path(path)) or {}
    try:
        settings = Settings(**raw.get("settings", raw))
    except ValidationError as e:
        logger.error(f"Invalid settings in {path}: {e}")
        raise
    logger.debug(f"Loaded settings from {path}: seed={settings.seed} samples={settings.samples}")
    return settings
