from .config_loader import load_config, save_config
from .schema import DEFAULTS, merge_config, validate_config
