"""
Configuration settings module.
Loads run configuration from a YAML file over built-in defaults.

Unknown keys are rejected so a typo in config.yaml cannot silently fall back
to a default. Every value can be overridden from the command line.

Dependencies:
- pyyaml for YAML parsing
"""

import copy
import logging
import os

import yaml

from errors import ConfigError

logger = logging.getLogger(__name__)

SEED_ENV_VAR = 'NDL_SEED'

# Default configuration values
# Simulation sizes: 22 channels, 64-sample segments, 64-sample context
DEFAULT_CONFIG = {
    'simulation': {
        'd': 22,
        'T': 64,
        'p': 64,
        'n': 2048,
        'seed': 0,
        'base_source': 'synthetic',
        'ar_coeffs': [1.3, -0.4],
        'fs': 256.0,
        'n_test': 2048,
        'continuous_length': 60000,
        'motifs': 20,
        'motif_min_g': 0.95,
        'motif_gain': 8.0,
    },
    'sweep': {
        'n_values': [2048, 8192],
        'seeds': [0, 1, 2],
    },
    'model': {
        'omega_widths': [16, 32, 64],
        'g_widths': [16, 32, 64],
        'kernel_size': 3,
        'stride': 2,
    },
    'training': {
        'epochs': 100,
        'batch_size': 64,
        'learning_rate': 1e-3,
        'seed': 0,
        'val_fraction': 0.2,
        'checkpoint_every': 10,
    },
    'detector': {
        'threshold': 0.5,
        'stride': 1,
        'eps': None,        # None -> (T + p) / 2 samples
        'min_pts': 1,
        'gate_factor': 1.5,
        'standardize': True,
    },
    'preprocessing': {
        'lo': 1.0,
        'hi': 45.0,
        'filter_order': 4,
        'montage': None,
    },
    'rank': {
        'top': 3,
    },
    'logging': {
        'level': 'INFO',
        'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
    },
    'paths': {
        'out_dir': '~/ndl-runs',
    },
}

# Sections whose values are free-form lists or scalars, not nested mappings
_LEAF_KEYS = {'ar_coeffs', 'omega_widths', 'g_widths', 'n_values', 'seeds'}


class Config:
    """Configuration manager for the application."""

    def __init__(self, config_path='config.yaml'):
        """
        Initialize configuration.

        Args:
            config_path: Path to YAML configuration file, or None for defaults

        Raises:
            ConfigError: If the file is malformed or contains unknown keys
        """
        self.config_path = config_path
        self.config = copy.deepcopy(DEFAULT_CONFIG)
        self.load_config()

    def load_config(self):
        """Load configuration from YAML file."""
        if self.config_path is None:
            return
        if not os.path.exists(self.config_path):
            logger.warning("Config file not found: %s, using defaults", self.config_path)
            return

        try:
            with open(self.config_path, 'r') as f:
                yaml_config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Error parsing config file {self.config_path}: {e}") from e

        if not yaml_config:
            logger.info("Empty config file, using defaults")
            return
        if not isinstance(yaml_config, dict):
            raise ConfigError(f"Config file {self.config_path} must contain a mapping")

        self._merge_config(self.config, yaml_config)
        logger.info("Configuration loaded from %s", self.config_path)

    def _merge_config(self, default, override, prefix=''):
        """
        Recursively merge override config into default config.

        Args:
            default: Default configuration dictionary
            override: Override configuration dictionary
            prefix: Dotted key path used in error messages

        Raises:
            ConfigError: On keys absent from DEFAULT_CONFIG
        """
        for key, value in override.items():
            path = f"{prefix}{key}"
            if key not in default:
                raise ConfigError(f"Unknown config key: {path}")
            if isinstance(default[key], dict) and key not in _LEAF_KEYS:
                if not isinstance(value, dict):
                    raise ConfigError(f"Config key {path} must be a mapping")
                self._merge_config(default[key], value, prefix=f"{path}.")
            else:
                default[key] = value

    def get(self, *keys, default=None):
        """
        Get configuration value by key path.

        Args:
            *keys: Key path (e.g., 'training', 'epochs')
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value = self.config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def section(self, name):
        """Return a copy of one configuration section."""
        if name not in self.config:
            raise ConfigError(f"Unknown config section: {name}")
        return copy.deepcopy(self.config[name])

    def override(self, section, key, value):
        """
        Override one value, typically from a command-line flag.

        None leaves the current value untouched so unset flags are no-ops.
        """
        if value is None:
            return
        if section not in self.config or key not in self.config[section]:
            raise ConfigError(f"Unknown config key: {section}.{key}")
        self.config[section][key] = value

    def resolve_seed(self, section, flag_value=None):
        """
        Resolve the seed for a section.

        Precedence: flag > NDL_SEED environment variable > config file > 0.
        """
        if flag_value is not None:
            return int(flag_value)
        env_value = os.environ.get(SEED_ENV_VAR)
        if env_value not in (None, ''):
            try:
                return int(env_value)
            except ValueError as e:
                raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env_value!r}") from e
        return int(self.get(section, 'seed', default=0))

    def validate_paths(self, inputs=(), outputs=()):
        """
        Check input files exist and create output directories before any work starts.

        Args:
            inputs: Paths that must already exist
            outputs: Output file paths whose parent directories are created
        """
        for path in inputs:
            if path is None:
                continue
            if not os.path.exists(os.path.expanduser(path)):
                raise ConfigError(f"Input file not found: {path}")
        for path in outputs:
            if path is None:
                continue
            parent = os.path.dirname(os.path.abspath(os.path.expanduser(path)))
            try:
                os.makedirs(parent, exist_ok=True)
            except OSError as e:
                raise ConfigError(f"Cannot create output directory {parent}: {e}") from e

    @property
    def out_dir(self):
        """Get output directory with ~ expansion."""
        return os.path.expanduser(self.get('paths', 'out_dir', default='~/ndl-runs'))

    @property
    def log_level(self):
        """Get logging level name."""
        return str(self.get('logging', 'level', default='INFO')).upper()

    @property
    def log_format(self):
        """Get logging format string."""
        return self.get('logging', 'format', default=DEFAULT_CONFIG['logging']['format'])

    @property
    def detector_eps(self):
        """Get DBSCAN radius; None means derive it from the window length."""
        return self.get('detector', 'eps', default=None)

    @property
    def rank_top(self):
        """Get the number of channels kept by the ranking command."""
        return self.get('rank', 'top', default=3)
