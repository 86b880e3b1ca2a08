"""
Configuration module for run settings.

This module provides:
- Config: Configuration manager with YAML file support and flag overrides
- DEFAULT_CONFIG: Default configuration values
- SEED_ENV_VAR: Environment variable consulted for seeds

Dependencies:
- pyyaml for YAML parsing
"""

from .settings import Config, DEFAULT_CONFIG, SEED_ENV_VAR

__all__ = [
    'Config',
    'DEFAULT_CONFIG',
    'SEED_ENV_VAR',
]
