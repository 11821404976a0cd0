from .main import RunConfig, load_config_json

__all__ = ["RunConfig", "load_config_json"]
