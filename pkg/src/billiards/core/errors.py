from enum import Enum


class ErrorCode(str, Enum):
    INVALID_ALPHA = "INVALID_ALPHA"
    SPEC_MISMATCH = "SPEC_MISMATCH"
    DIVISION_BY_ZERO = "DIVISION_BY_ZERO"
    INVALID_POLYGON = "INVALID_POLYGON"
    INVALID_PARAMS = "INVALID_PARAMS"
    POINT_OUTSIDE_TABLE = "POINT_OUTSIDE_TABLE"
    COINCIDENT_MARKED_POINTS = "COINCIDENT_MARKED_POINTS"
    DIRECTION_OUTWARD = "DIRECTION_OUTWARD"
    CORNER_HIT = "CORNER_HIT"
    AMBIGUOUS_CROSSING = "AMBIGUOUS_CROSSING"
    INVALID_BLOCKING_SET = "INVALID_BLOCKING_SET"
    INVALID_CONFIG = "INVALID_CONFIG"
    INTERNAL = "INTERNAL"


class BilliardError(ValueError):
    code = ErrorCode.INTERNAL

    def __init__(self, message: str, hint: str = ""):
        super().__init__(message)
        self.message = message
        self.hint = hint

    def to_dict(self) -> dict:
        return {"error": self.code.value, "message": self.message, "hint": self.hint}


class InvalidAlpha(BilliardError):
    code = ErrorCode.INVALID_ALPHA


class SpecMismatch(BilliardError):
    code = ErrorCode.SPEC_MISMATCH


class DivisionByZero(BilliardError, ZeroDivisionError):
    code = ErrorCode.DIVISION_BY_ZERO


class InvalidPolygon(BilliardError):
    code = ErrorCode.INVALID_POLYGON


class InvalidParams(BilliardError):
    code = ErrorCode.INVALID_PARAMS


class PointOutsideTable(BilliardError):
    code = ErrorCode.POINT_OUTSIDE_TABLE


class CoincidentMarkedPoints(BilliardError):
    code = ErrorCode.COINCIDENT_MARKED_POINTS


class DirectionOutward(BilliardError):
    code = ErrorCode.DIRECTION_OUTWARD


class AmbiguousCrossing(BilliardError):
    code = ErrorCode.AMBIGUOUS_CROSSING


class InvalidBlockingSet(BilliardError):
    code = ErrorCode.INVALID_BLOCKING_SET


class InvalidConfig(BilliardError):
    code = ErrorCode.INVALID_CONFIG


class CornerHitError(BilliardError):
    """Raised where a full trajectory is required but the trace ran into a vertex."""
    code = ErrorCode.CORNER_HIT

    def __init__(self, corner, hint: str = ""):
        super().__init__(f"trajectory hit a corner after {corner.after_bounces} bounces", hint)
        self.corner = corner
