"""Exact rational parsing and serialization helpers."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational

from .errors import ParseError


def to_fraction(value) -> Fraction:
    """Convert ``value`` to a Fraction without passing through binary floats.

    Accepts ints, Fractions, ``"p/q"`` strings and decimal strings. Python
    floats are converted through their shortest repr, so ``0.1`` means 1/10.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a number: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse rational {value!r}") from None
    raise ParseError(f"not a number: {value!r}")


def fmt(q: Fraction) -> str:
    return str(Fraction(q))


def approx(q: Fraction, digits: int = 12) -> str:
    """Decimal approximation with ``digits`` significant digits, for humans only."""
    return f"{float(q):.{digits}g}"


def rational_json(q: Fraction) -> dict:
    return {"value": fmt(q), "approx": approx(q)}
