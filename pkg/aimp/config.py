"""
Configuration for the compiler pipeline.

Settings come from, in order of precedence: explicit keyword arguments (CLI
flags), the process environment, the dotenv file named by AIMP_CONFIG, and
the defaults below, which point at the desk-scale data shipped in aimp/data.
"""
import json
import os
from pathlib import Path
from typing import Dict, List, Optional

from dotenv import load_dotenv
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from aimp.annotations import DEFAULT_TAG_CLASSES, TagClassConfig
from aimp.errors import ConfigError

load_dotenv()

DATA_DIR = Path(__file__).parent / "data"
CONFIG_ENV_VAR = "AIMP_CONFIG"


class PipelineConfig(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="AIMP_", extra="ignore")

    embeddings_path: Path = DATA_DIR / "embeddings.txt"
    lexicon_path: Path = DATA_DIR / "verb_lexicon.tsv"
    tagger_lexicon_path: Path = DATA_DIR / "tagger_lexicon.tsv"
    numwords_path: Optional[Path] = None
    tagclass_overrides: Dict[str, List[str]] = Field(default_factory=dict)
    conllu_path: Optional[Path] = None
    trace: bool = False
    workers: int = Field(default=1, ge=1)
    results_db: Optional[Path] = None
    log_level: str = "WARNING"

    def tag_classes(self) -> TagClassConfig:
        if not self.tagclass_overrides:
            return DEFAULT_TAG_CLASSES
        return DEFAULT_TAG_CLASSES.with_overrides(self.tagclass_overrides)


def load_config(**overrides) -> PipelineConfig:
    """
    Build and validate a PipelineConfig. `None` overrides are ignored so CLI
    options that were not given fall through to the environment.

    Missing embeddings or verb-lexicon files are not an error here; the first
    disambiguation that needs them raises ConfigError instead.
    """
    config_file = os.getenv(CONFIG_ENV_VAR) or None
    if config_file and not Path(config_file).is_file():
        raise ConfigError(f"{CONFIG_ENV_VAR} names a missing file: {config_file}")

    values = {k: v for k, v in overrides.items() if v is not None}
    try:
        cfg = PipelineConfig(_env_file=config_file, **values)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e

    if not cfg.tagger_lexicon_path.is_file():
        raise ConfigError(f"tagger lexicon not found: {cfg.tagger_lexicon_path}")
    if cfg.numwords_path is not None and not cfg.numwords_path.is_file():
        raise ConfigError(f"number-word table not found: {cfg.numwords_path}")
    if cfg.conllu_path is not None and not cfg.conllu_path.is_file():
        raise ConfigError(f"CoNLL-U file not found: {cfg.conllu_path}")
    try:
        cfg.tag_classes()
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return cfg


def describe(cfg: PipelineConfig) -> str:
    """The effective settings as JSON, for --verbose output."""
    return json.dumps(cfg.model_dump(mode="json"), indent=2, sort_keys=True)
