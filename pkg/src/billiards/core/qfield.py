"""
Exact arithmetic in the real quadratic field Q(alpha).

alpha is the positive root of alpha**2 = u + v*alpha with rational u, v.
Every element is stored as r + s*alpha with reduced Fractions, so equality is
structural and every comparison is decided without floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Tuple, Union

from billiards.core.errors import DivisionByZero, InvalidAlpha, SpecMismatch

Rational = Fraction
RationalLike = Union[int, Fraction, str]

# Width of the rational bracket around alpha used to seed floor().
_BRACKET_BITS = 64
_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings like "3/2" or "-0.25" to a Fraction.

    Floats are rejected: they would smuggle rounding into the kernel.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational literal: {value!r}") from e
    raise TypeError(f"not an exact rational: {value!r}")


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    num, den = q.numerator, q.denominator
    return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den


@dataclass(frozen=True)
class AlphaSpec:
    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", as_rational(self.u))
        object.__setattr__(self, "v", as_rational(self.v))
        d = self.discriminant
        if d <= 0:
            raise InvalidAlpha(
                f"v^2 + 4u = {d} must be positive",
                hint="alpha must be a real root of alpha^2 = u + v*alpha",
            )
        if _is_rational_square(d):
            raise InvalidAlpha(
                f"v^2 + 4u = {d} is a rational square, alpha would be rational",
                hint="pick u, v so that alpha is a quadratic irrational, e.g. u=2 v=0",
            )
        # alpha = (v + sqrt(d)) / 2 > 0 fails only when v < 0 and d <= v^2.
        if self.v < 0 and self.u <= 0:
            raise InvalidAlpha(f"alpha for u={self.u}, v={self.v} is not positive")

    @property
    def discriminant(self) -> Fraction:
        return self.v * self.v + 4 * self.u

    @cached_property
    def bracket(self) -> Tuple[Fraction, Fraction]:
        """Rationals lo < alpha < hi, at most 2**-64 apart."""
        d = self.discriminant
        scale = 1 << _BRACKET_BITS
        # sqrt(d) = sqrt(num * den) / den; num * den is never a perfect square here.
        root = math.isqrt(d.numerator * d.denominator * scale * scale)
        lo = (self.v + Fraction(root, d.denominator * scale)) / 2
        hi = (self.v + Fraction(root + 1, d.denominator * scale)) / 2
        return lo, hi

    @property
    def alpha(self) -> "QElement":
        return _raw(_ZERO, _ONE, self)

    @property
    def one(self) -> "QElement":
        return _raw(_ONE, _ZERO, self)

    @property
    def zero(self) -> "QElement":
        return _raw(_ZERO, _ZERO, self)

    def element(self, r: RationalLike = 0, s: RationalLike = 0) -> "QElement":
        return qel(r, s, self)

    @cached_property
    def _as_float(self) -> float:
        return (float(self.v) + math.sqrt(float(self.discriminant))) / 2

    def to_float(self) -> float:
        return self._as_float

    def __str__(self) -> str:
        return f"alpha^2 = {self.u} + {self.v}*alpha"


SQRT2 = AlphaSpec(2, 0)


class QElement:
    """r + s*alpha. Immutable: no method mutates an existing element."""

    __slots__ = ("r", "s", "spec")

    def __init__(self, r: RationalLike, s: RationalLike, spec: AlphaSpec):
        self.r = as_rational(r)
        self.s = as_rational(s)
        self.spec = spec

    def _coerce(self, other) -> "QElement":
        if isinstance(other, QElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise SpecMismatch(f"cannot combine elements of {self.spec} and {other.spec}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return _raw(Fraction(other), _ZERO, self.spec)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _raw(self.r + o.r, self.s + o.s, self.spec)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _raw(self.r - o.r, self.s - o.s, self.spec)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _raw(o.r - self.r, o.s - self.s, self.spec)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.s:
            if not o.r:
                raise DivisionByZero("division by zero in Q(alpha)")
            return _raw(self.r / o.r, self.s / o.r, self.spec)
        return mul(self, inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return mul(o, inv(self))

    def __neg__(self) -> "QElement":
        return _raw(-self.r, -self.s, self.spec)

    def __pos__(self) -> "QElement":
        return self

    def __abs__(self) -> "QElement":
        return -self if sign(self) < 0 else self

    def __bool__(self) -> bool:
        return bool(self.r) or bool(self.s)

    def __eq__(self, other) -> bool:
        if isinstance(other, QElement):
            return self.r == other.r and self.s == other.s and (
                self.spec is other.spec or self.spec == other.spec
            )
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return not self.s and self.r == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.s:
            return hash(self.r)
        return hash((self.r, self.s))

    def __lt__(self, other) -> bool:
        return sign(self - other) < 0

    def __le__(self, other) -> bool:
        return sign(self - other) <= 0

    def __gt__(self, other) -> bool:
        return sign(self - other) > 0

    def __ge__(self, other) -> bool:
        return sign(self - other) >= 0

    def __float__(self) -> float:
        return to_float(self)

    def __getstate__(self):
        return (self.r, self.s, self.spec)

    def __setstate__(self, state):
        self.r, self.s, self.spec = state

    @property
    def is_rational(self) -> bool:
        return not self.s

    @property
    def is_integer(self) -> bool:
        return not self.s and self.r.denominator == 1

    def __repr__(self) -> str:
        return f"QElement({self.r}, {self.s})"

    def __str__(self) -> str:
        if not self.s:
            return str(self.r)
        head = "" if not self.r else f"{self.r} "
        op = "-" if self.s < 0 else ("+" if head else "")
        mag = abs(self.s)
        coeff = "" if mag == 1 else f"{mag}*"
        return f"{head}{op}{' ' if head else ''}{coeff}alpha"


def _raw(r: Fraction, s: Fraction, spec: AlphaSpec) -> QElement:
    obj = object.__new__(QElement)
    obj.r = r
    obj.s = s
    obj.spec = spec
    return obj


def qel(r: RationalLike, s: RationalLike, spec: AlphaSpec = SQRT2) -> QElement:
    return QElement(r, s, spec)


def _check(a: QElement, b: QElement) -> None:
    if a.spec is not b.spec and a.spec != b.spec:
        raise SpecMismatch(f"cannot combine elements of {a.spec} and {b.spec}")


def mul(a: QElement, b: QElement) -> QElement:
    _check(a, b)
    ss = a.s * b.s
    if not ss:
        return _raw(a.r * b.r, a.r * b.s + a.s * b.r, a.spec)
    spec = a.spec
    return _raw(a.r * b.r + ss * spec.u, a.r * b.s + a.s * b.r + ss * spec.v, spec)


def inv(a: QElement) -> QElement:
    """Inverse from the 2x2 system (r + s*alpha)(x + y*alpha) = 1."""
    r, s = a.r, a.s
    if not s:
        if not r:
            raise DivisionByZero("division by zero in Q(alpha)")
        return _raw(1 / r, _ZERO, a.spec)
    u, v = a.spec.u, a.spec.v
    t = r + s * v
    det = r * t - s * s * u
    # det vanishes only for a = 0 because alpha is irrational.
    return _raw(t / det, -s / det, a.spec)


def sign(a: QElement) -> int:
    """Exact sign of r + s*alpha.

    With alpha = (v + sqrt(D)) / 2 the element is (x + s*sqrt(D)) / 2 for
    x = 2r + s*v; opposite-signed parts are compared by squaring.
    """
    r, s = a.r, a.s
    if not s:
        return (r > 0) - (r < 0)
    x = 2 * r + s * a.spec.v
    ss = 1 if s > 0 else -1
    if not x:
        return ss
    sx = 1 if x > 0 else -1
    if sx == ss:
        return sx
    # x*x == s*s*D is impossible: D is not a rational square.
    if x * x > s * s * a.spec.discriminant:
        return sx
    return ss


def floor(a: QElement) -> int:
    """Greatest integer m with m <= a, bracketed by rationals then refined by sign tests."""
    r, s = a.r, a.s
    if not s:
        return math.floor(r)
    lo, hi = a.spec.bracket
    if s > 0:
        low, high = r + s * lo, r + s * hi
    else:
        low, high = r + s * hi, r + s * lo
    m_lo, m_hi = math.floor(low), math.floor(high)
    while m_lo < m_hi:
        mid = (m_lo + m_hi + 1) // 2
        if sign(_raw(r - mid, s, a.spec)) >= 0:
            m_lo = mid
        else:
            m_hi = mid - 1
    return m_lo


def to_decimal(a: QElement, digits: int) -> str:
    """Correctly rounded fixed-point rendering with `digits` fractional digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10 ** digits
    negative = sign(a) < 0
    magnitude = -a if negative else a
    m = floor(magnitude * scale + _HALF)
    whole, frac = divmod(m, scale)
    text = f"{whole}.{frac:0{digits}d}"
    return f"-{text}" if negative and m else text


def to_float(a: QElement) -> float:
    """Display/oracle helper only; never fed back into exact computation."""
    if not a.s:
        return float(a.r)
    return float(a.r) + float(a.s) * a.spec._as_float


def add(a: QElement, b: QElement) -> QElement:
    _check(a, b)
    return _raw(a.r + b.r, a.s + b.s, a.spec)


def sub(a: QElement, b: QElement) -> QElement:
    _check(a, b)
    return _raw(a.r - b.r, a.s - b.s, a.spec)


def div(a: QElement, b: QElement) -> QElement:
    return a / b
