"""Exact rational values: parsing, formatting, and float rationalization.

All probability-side arithmetic in this package runs on ``fractions.Fraction``.
Floats only enter through measured quantum traces or hand-written input files,
and they are converted here under an explicit policy instead of being mixed
silently into exact computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NumericalFailure


@dataclass(frozen=True)
class RationalizationPolicy:
    """How floats are identified with exact fractions.

    ``strict`` additionally requires the recovered denominator to be a
    product of 2s and 5s, i.e. the float must stand for an exact binary or
    decimal literal.
    """

    tolerance: float = 1e-9
    max_denominator: int = 10**6
    strict: bool = False

    def __post_init__(self) -> None:
        if not (self.tolerance > 0):
            raise ValueError("tolerance must be positive")
        if self.max_denominator < 1:
            raise ValueError("max denominator must be at least 1")


DEFAULT_POLICY = RationalizationPolicy()


def rationalize(value: float, policy: RationalizationPolicy = DEFAULT_POLICY) -> Fraction:
    """Return the nearest fraction with a bounded denominator, or fail loudly."""
    if not math.isfinite(value):
        raise NumericalFailure(f"cannot rationalize non-finite value {value!r}")
    approx = Fraction(value).limit_denominator(policy.max_denominator)
    if abs(approx - Fraction(value)) > Fraction(policy.tolerance):
        raise NumericalFailure(
            f"{value!r} is not within {policy.tolerance} of any fraction "
            f"with denominator <= {policy.max_denominator}"
        )
    if policy.strict and not _is_decimal_denominator(approx.denominator):
        raise NumericalFailure(
            f"strict mode: {value!r} is not an exact binary/decimal fraction"
        )
    return approx


def _is_decimal_denominator(den: int) -> bool:
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def parse_rational(value, policy: RationalizationPolicy = DEFAULT_POLICY) -> Fraction:
    """Parse a JSON scalar (int, fraction/decimal string, or float) exactly.

    Strings go through ``Fraction`` directly, so "3/8", "0.375" and "2" are
    all exact. Floats are rationalized under the policy.
    """
    if isinstance(value, bool):
        raise NumericalFailure(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return rationalize(value, policy)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise NumericalFailure(f"cannot parse {value!r} as a fraction") from exc
    raise NumericalFailure(f"cannot interpret {value!r} as a rational number")


def format_rational(value: Fraction) -> str:
    """Lowest-terms string form, e.g. "3/8", "0", "1"."""
    return str(value)
