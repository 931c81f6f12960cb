"""Field backends: exact rationals and IEEE doubles behind one Scalar surface.

Geometric objects store either `fractions.Fraction` (exact backend) or
`float` (float backend) coordinates.  This module keeps the two regimes from
mixing and centralizes the operations whose semantics differ between them:
square roots, zero tests, and JSON serialization ("p/q" strings vs numbers).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    BackendMismatch,
    DivisionByZero,
    NegativeRadicand,
    NonFiniteResult,
    NonSquareRational,
)

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"


@dataclass(frozen=True)
class Tolerance:
    """Comparison policy for float-backend residuals.

    epsilon bounds residuals that the kernel's predicates have already
    normalized by their operand scales; `relative` records that convention.
    The exact backend ignores the tolerance entirely and compares against
    literal zero.
    """

    epsilon: float = 1e-9
    relative: bool = True

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")


DEFAULT_TOLERANCE = Tolerance()


def backend_of(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return EXACT
    if isinstance(x, float):
        return FLOAT
    if isinstance(x, int):
        return EXACT
    raise BackendMismatch(f"unsupported scalar type {type(x).__name__}")


def coerce_tuple(values: Iterable[Scalar], what: str = "coordinates") -> tuple[Scalar, ...]:
    """Normalize a coordinate tuple to one backend.

    Plain ints are promoted to Fraction unless a float is present, in which
    case everything becomes float.  Mixing Fraction with float is an error.
    """
    vals = list(values)
    has_frac = any(isinstance(v, Fraction) for v in vals)
    has_float = any(isinstance(v, float) for v in vals)
    if has_frac and has_float:
        raise BackendMismatch(f"{what} mix exact and float scalars")
    if has_float:
        out = tuple(float(v) for v in vals)
        if not all(math.isfinite(v) for v in out):
            raise NonFiniteResult(f"{what} contain non-finite values")
        return out
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in vals)


def _check_pair(a: Scalar, b: Scalar) -> str:
    ba, bb = backend_of(a), backend_of(b)
    if ba != bb:
        raise BackendMismatch(f"cannot combine {ba} with {bb} scalar")
    return ba


def _check_finite(x: float) -> float:
    if not math.isfinite(x):
        raise NonFiniteResult("float operation overflowed")
    return x


def add(a: Scalar, b: Scalar) -> Scalar:
    backend = _check_pair(a, b)
    r = a + b
    return r if backend == EXACT else _check_finite(r)


def sub(a: Scalar, b: Scalar) -> Scalar:
    backend = _check_pair(a, b)
    r = a - b
    return r if backend == EXACT else _check_finite(r)


def mul(a: Scalar, b: Scalar) -> Scalar:
    backend = _check_pair(a, b)
    r = a * b
    return r if backend == EXACT else _check_finite(r)


def div(a: Scalar, b: Scalar) -> Scalar:
    backend = _check_pair(a, b)
    if backend == EXACT:
        if b == 0:
            raise DivisionByZero("exact division by zero")
        return a / b
    if abs(b) < 5e-324 or b == 0.0:
        raise DivisionByZero("float division by (near) zero")
    return _check_finite(a / b)


def neg(a: Scalar) -> Scalar:
    return -a


def sqrt(a: Scalar) -> Scalar:
    """Square root; exact backend succeeds only on perfect rational squares."""
    if backend_of(a) == FLOAT:
        if a < 0:
            raise NegativeRadicand(f"sqrt of negative float {a}")
        return math.sqrt(a)
    a = a if isinstance(a, Fraction) else Fraction(a)
    if a < 0:
        raise NegativeRadicand(f"sqrt of negative rational {a}")
    num, den = a.numerator, a.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise NonSquareRational(f"{a} is not the square of a rational")
    return Fraction(rn, rd)


def is_square(a: Fraction) -> bool:
    if a < 0:
        return False
    rn, rd = math.isqrt(a.numerator), math.isqrt(a.denominator)
    return rn * rn == a.numerator and rd * rd == a.denominator


def is_zero(a: Scalar, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Zero test: literal for exact scalars, epsilon bound for floats.

    Float inputs are expected to be residuals already normalized by their
    operand scales (every predicate in this package reports such residuals).
    """
    if backend_of(a) == EXACT:
        return a == 0
    return abs(a) <= tol.epsilon


def to_float(a: Scalar) -> float:
    return float(a)


def safe_float(a: Scalar) -> float:
    """float(a) that survives rationals far outside the double range."""
    if isinstance(a, float):
        return a
    f = a if isinstance(a, Fraction) else Fraction(a)
    n, d = f.numerator, f.denominator
    try:
        return n / d
    except OverflowError:
        shift = max(n.bit_length(), d.bit_length()) - 512
        n >>= shift
        d >>= shift
        if d == 0:
            d = 1
        try:
            return n / d
        except OverflowError:
            return math.copysign(math.inf, f)


def scalar_to_json(a: Scalar):
    if backend_of(a) == EXACT:
        f = a if isinstance(a, Fraction) else Fraction(a)
        return f"{f.numerator}/{f.denominator}"
    return a


def scalar_from_json(v, backend: str) -> Scalar:
    """Parse a scene/config scalar: "p/q" strings or numbers."""
    if isinstance(v, str):
        f = Fraction(v)
        return f if backend == EXACT else float(f)
    if isinstance(v, bool):
        raise BackendMismatch("booleans are not scalars")
    if isinstance(v, (int, float)):
        if backend == EXACT:
            if isinstance(v, float) and not v.is_integer():
                # permit decimal literals in exact scenes via exact conversion
                return Fraction(v).limit_denominator(10**12)
            return Fraction(int(v)) if isinstance(v, int) or v.is_integer() else Fraction(v)
        x = float(v)
        if not math.isfinite(x):
            raise NonFiniteResult("non-finite scalar in input")
        return x
    raise BackendMismatch(f"cannot parse scalar from {v!r}")
