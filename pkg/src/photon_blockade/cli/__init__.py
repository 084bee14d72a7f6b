"""Configuration-driven command-line front end."""

from .config import Config, ConfigError
from .main import run

__all__ = ["Config", "ConfigError", "run"]
