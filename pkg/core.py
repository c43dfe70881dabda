"""
Shared domain types for zetabounds: number-field invariants, certified
reals (midpoint-radius enclosures) and the two scalar quantities every bound
is written in, Q and W_K.

All logarithms are natural logarithms.
"""

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, Optional, Union

from loguru import logger

from exceptions import DomainError, NegativeDiscriminant, ParseError, PrecisionError, SignatureMismatch

Number = Union[int, float]


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class FieldInvariants:
    """Degree, signature and log-discriminant of a number field K."""

    degree: int
    r1: int
    r2: int
    log_disc: float

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def describe(self) -> str:
        if self.is_rational:
            return "Q"
        return f"degree={self.degree} r1={self.r1} r2={self.r2} log_disc={self.log_disc:.10g}"


@dataclass(frozen=True)
class CertValue:
    """
    A certified real number: the interval [mid - rad, mid + rad].

    Arithmetic returns enclosures of the exact image of the operand
    intervals. Each operation inflates the radius by one ulp of the result
    to stand in for directed rounding.
    """

    mid: float
    rad: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.mid) or not math.isfinite(self.rad) or self.rad < 0:
            raise PrecisionError(f"invalid enclosure mid={self.mid!r} rad={self.rad!r}")

    @classmethod
    def exact(cls, x: Number) -> "CertValue":
        return cls(float(x), 0.0)

    @classmethod
    def from_bounds(cls, lo: float, hi: float) -> "CertValue":
        if lo > hi:
            raise PrecisionError(f"empty interval [{lo}, {hi}]")
        mid = 0.5 * (lo + hi)
        return cls(mid, _up(max(hi - mid, mid - lo)))

    @staticmethod
    def _rounded(mid: float, rad: float) -> "CertValue":
        return CertValue(mid, _up(rad + math.ulp(mid)))

    @staticmethod
    def _coerce(other) -> "CertValue":
        if isinstance(other, CertValue):
            return other
        return CertValue.exact(other)

    @property
    def lower(self) -> float:
        return math.nextafter(self.mid - self.rad, -math.inf)

    @property
    def upper(self) -> float:
        return _up(self.mid + self.rad)

    @property
    def width(self) -> float:
        return 2.0 * self.rad

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def encloses(self, other: "CertValue") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def widen(self, extra: float) -> "CertValue":
        if extra < 0:
            raise PrecisionError(f"cannot widen by a negative amount {extra}")
        return CertValue(self.mid, _up(self.rad + extra))

    def hull(self, other: "CertValue") -> "CertValue":
        return CertValue.from_bounds(min(self.lower, other.lower), max(self.upper, other.upper))

    def __add__(self, other):
        o = self._coerce(other)
        return self._rounded(self.mid + o.mid, self.rad + o.rad)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return self._rounded(self.mid - o.mid, self.rad + o.rad)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CertValue(-self.mid, self.rad)

    def __mul__(self, other):
        o = self._coerce(other)
        rad = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return self._rounded(self.mid * o.mid, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if abs(o.mid) <= o.rad:
            raise PrecisionError(f"division by an enclosure containing zero: {o}")
        q = self.mid / o.mid
        rad = (self.rad + abs(q) * o.rad) / (abs(o.mid) - o.rad)
        return self._rounded(q, rad)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        return CertValue(abs(self.mid), self.rad)

    def exp(self) -> "CertValue":
        m = math.exp(self.mid)
        return self._rounded(m, m * math.expm1(self.rad))

    def log(self) -> "CertValue":
        if self.mid - self.rad <= 0:
            raise PrecisionError(f"log of an enclosure reaching zero: {self}")
        return self._rounded(math.log(self.mid), -math.log1p(-self.rad / self.mid))

    def sqrt(self) -> "CertValue":
        if self.mid + self.rad < 0:
            raise PrecisionError(f"sqrt of a negative enclosure: {self}")
        m = math.sqrt(max(self.mid, 0.0))
        lo = math.sqrt(max(self.mid - self.rad, 0.0))
        hi = math.sqrt(max(self.mid + self.rad, 0.0))
        return self._rounded(m, max(m - lo, hi - m))

    def hypot(self, other: "CertValue") -> "CertValue":
        o = self._coerce(other)
        return self._rounded(math.hypot(self.mid, o.mid), math.hypot(self.rad, o.rad))

    def __repr__(self):
        return f"CertValue({self.mid:.16g} ± {self.rad:.3g})"


def cert_sum(values: Iterable[CertValue]) -> CertValue:
    """Sum enclosures in the given (fixed) order."""
    total = CertValue.exact(0.0)
    for v in values:
        total = total + v
    return total


@dataclass(frozen=True)
class EvalPoint:
    """A point s = sigma + it."""

    sigma: float
    t: float

    @property
    def alpha(self) -> float:
        return self.sigma - 0.5

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class WindowQuery:
    """The window [T - a, T + a] of zero ordinates."""

    T: float
    a: float

    def __post_init__(self):
        if not math.isfinite(self.T) or not math.isfinite(self.a):
            raise DomainError(f"window must be finite, got T={self.T}, a={self.a}")
        if self.a < 0:
            raise DomainError(f"window half-width must be non-negative, got {self.a}")

    @property
    def low(self) -> float:
        return self.T - self.a

    @property
    def high(self) -> float:
        return self.T + self.a


@dataclass(frozen=True)
class BoundBreakdown:
    """A bound together with its Q, Q^(2-2 sigma) and n_K terms."""

    total: float
    main_term: float
    middle_term: float
    degree_term: float
    params: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, main_term: float, middle_term: float, degree_term: float, **params) -> "BoundBreakdown":
        return cls(main_term + middle_term + degree_term, main_term, middle_term, degree_term, dict(params))

    def scaled(self, factor: float, **params) -> "BoundBreakdown":
        merged = dict(self.params)
        merged.update(params)
        return BoundBreakdown.from_terms(
            factor * self.main_term, factor * self.middle_term, factor * self.degree_term, **merged
        )

    def as_dict(self) -> Dict[str, float]:
        out = {
            "total": self.total,
            "main_term": self.main_term,
            "middle_term": self.middle_term,
            "degree_term": self.degree_term,
        }
        out.update(self.params)
        return out


def build_field(degree: int, r1: int, r2: int, log_disc: float) -> FieldInvariants:
    """Validate and build the invariants of a number field."""
    for name, value in (("degree", degree), ("r1", r1), ("r2", r2), ("log_disc", log_disc)):
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value}")
    if int(degree) != degree or int(r1) != r1 or int(r2) != r2:
        raise DomainError("degree, r1 and r2 must be integers")
    degree, r1, r2 = int(degree), int(r1), int(r2)
    if degree < 1:
        raise DomainError(f"degree must be at least 1, got {degree}")
    if r1 < 0 or r2 < 0:
        raise DomainError(f"r1 and r2 must be non-negative, got r1={r1}, r2={r2}")
    if r1 + 2 * r2 != degree:
        raise SignatureMismatch(f"r1 + 2*r2 = {r1 + 2 * r2} differs from degree {degree}")
    if log_disc < 0:
        raise NegativeDiscriminant(f"log_disc must be non-negative, got {log_disc}")
    if degree == 1 and log_disc != 0:
        raise DomainError(f"the rational field has log_disc = 0, got {log_disc}")
    if degree > 1 and log_disc == 0:
        raise DomainError("a field of degree > 1 has |disc| > 1")
    return FieldInvariants(degree, r1, r2, float(log_disc))


RATIONALS = build_field(1, 1, 0, 0.0)


def conductor_q(field: FieldInvariants, T: float) -> float:
    """Q := log disc_K + (log T + 20) n_K + 11."""
    if not T > 1:
        raise DomainError(f"conductor_q needs T > 1, got {T}")
    return field.log_disc + (math.log(T) + 20.0) * field.degree + 11.0


def w_term(field: FieldInvariants, T: float) -> float:
    """W_K(T) := log disc_K + n_K log(T / 2 pi)."""
    if not T > 0:
        raise DomainError(f"w_term needs T > 0, got {T}")
    return field.log_disc + field.degree * math.log(T / (2.0 * math.pi))


_FIELD_KEYS = {"degree": int, "r1": int, "r2": int, "log_disc": float}


def parse_field_descriptor(text: str) -> FieldInvariants:
    """
    Parse the ``key = value`` field-descriptor format.

    Keys are degree, r1, r2 and log_disc; ``#`` starts a comment and unknown
    keys are rejected.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_KEYS:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        try:
            values[key] = _FIELD_KEYS[key](value)
        except ValueError:
            raise ParseError(f"bad value for {key}: {value!r}", line=lineno)
    missing = [k for k in _FIELD_KEYS if k not in values]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")
    return build_field(values["degree"], values["r1"], values["r2"], values["log_disc"])


def load_field(spec: Optional[str]) -> FieldInvariants:
    """Resolve the literal ``Q`` or a path to a field-descriptor file."""
    if spec is None or spec.strip() in ("Q", "QQ"):
        return RATIONALS
    path = Path(spec)
    if not path.is_file():
        raise ParseError(f"field descriptor {spec!r} is neither 'Q' nor a readable file")
    field_ = parse_field_descriptor(path.read_text(encoding="utf-8"))
    logger.info(f"Loaded field {field_.describe()} from {path}")
    return field_


def with_log_disc(field_: FieldInvariants, log_disc: float) -> FieldInvariants:
    """Same signature, different discriminant (used by monotonicity sweeps)."""
    return replace(field_, log_disc=float(log_disc))
