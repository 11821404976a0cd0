import json
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

from billiards.core.errors import InvalidConfig
from billiards.core.family import FamilyParams
from billiards.core.qfield import AlphaSpec, as_rational
from billiards.core.settings import settings
from billiards.core.utils.logging import get_logger

logger = get_logger("billiards.config")

_RATIONAL_KEYS = ("alpha_u", "alpha_v", "l1", "l2")
RENDER_TARGETS = ("table", "gamma", "unfolded")


def load_config_json(path: str) -> dict:
    """
    Load a run config JSON strictly.
    Raises InvalidConfig for malformed JSON, non-UTF-8 bytes or a non-object root.
    """
    p = Path(path)
    try:
        with p.open("r", encoding="utf-8") as f:
            raw = json.load(f)
    except FileNotFoundError as e:
        raise InvalidConfig(f"Config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InvalidConfig(f"Invalid JSON config at {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise InvalidConfig(f"Invalid UTF-8 config at {path}: {e}") from e
    if not isinstance(raw, dict):
        raise InvalidConfig(f"Invalid config shape at {path}: root must be a JSON object")
    return raw


@dataclass(frozen=True)
class RunConfig:
    alpha_u: Fraction
    alpha_v: Fraction
    l1: Fraction
    l2: Fraction
    n: int
    decimal_digits: int
    seed: int
    max_bounces: int
    jobs: int
    output: Optional[str] = None
    table_path: Optional[str] = None
    blockers_path: Optional[str] = None
    random_blockers: int = 0
    what: str = "table"
    index: int = 0

    def __post_init__(self):
        for key in _RATIONAL_KEYS:
            try:
                object.__setattr__(self, key, as_rational(getattr(self, key)))
            except (TypeError, ValueError) as e:
                raise InvalidConfig(f"{key} must be an exact rational: {e}") from e
        if self.n < 0:
            raise InvalidConfig(f"n={self.n} must be >= 0")
        if self.decimal_digits < 1:
            raise InvalidConfig(f"decimal_digits={self.decimal_digits} must be >= 1")
        if self.max_bounces < 1:
            raise InvalidConfig(f"max_bounces={self.max_bounces} must be >= 1")
        if self.jobs < 1:
            raise InvalidConfig(f"jobs={self.jobs} must be >= 1")
        if self.random_blockers < 0:
            raise InvalidConfig("random_blockers must be >= 0")
        if self.what not in RENDER_TARGETS:
            raise InvalidConfig(f"what={self.what!r} must be one of {', '.join(RENDER_TARGETS)}")
        if self.index < 0:
            raise InvalidConfig(f"index={self.index} must be >= 0")

    @staticmethod
    def get_defaults() -> dict:
        """Central source for default configuration values (environment applied)."""
        return {
            "alpha_u": settings.ALPHA_U,
            "alpha_v": settings.ALPHA_V,
            "l1": settings.L1,
            "l2": settings.L2,
            "n": settings.N,
            "decimal_digits": settings.DIGITS,
            "seed": settings.SEED,
            "max_bounces": settings.MAX_BOUNCES,
            "jobs": settings.JOBS,
        }

    @classmethod
    def load(cls, path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """Defaults < config file < explicit overrides (CLI flags); None overrides are ignored."""
        known = {f.name for f in fields(cls)}
        merged = cls.get_defaults()
        if path:
            raw = load_config_json(path)
            unknown = sorted(set(raw) - known)
            if unknown:
                logger.warning("config_keys_ignored", path=path, keys=unknown)
            merged.update({k: v for k, v in raw.items() if k in known})
        for k, v in (overrides or {}).items():
            if v is not None and k in known:
                merged[k] = v
        if any(isinstance(merged[k], float) for k in _RATIONAL_KEYS):
            raise InvalidConfig("rational parameters must be integers or strings like \"3/2\", not floats")
        return cls(**merged)

    def alpha_spec(self) -> AlphaSpec:
        return AlphaSpec(self.alpha_u, self.alpha_v)

    def family_params(self) -> FamilyParams:
        return FamilyParams(self.alpha_spec(), self.l1, self.l2)
