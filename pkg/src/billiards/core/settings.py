from pydantic_settings import BaseSettings, SettingsConfigDict

from billiards.version import __version__


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="BILLIARDS_", case_sensitive=True, extra="ignore")

    VERSION: str = __version__

    # --- TABLE FAMILY (rationals as strings, e.g. "3/2") ---
    ALPHA_U: str = "2"
    ALPHA_V: str = "0"
    L1: str = "2"
    L2: str = "2"

    # --- RUN DEFAULTS ---
    N: int = 200
    DIGITS: int = 12
    SEED: int = 0
    MAX_BOUNCES: int = 1_000_000
    JOBS: int = 1

    # --- LOGGING ---
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True


settings = Settings()
