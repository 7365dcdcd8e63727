"""Parsing and printing of exact rationals."""

from fractions import Fraction
from numbers import Rational

from .errors import FlowTypeError


def as_fraction(value):
    """Coerce ints, Fractions and strings like ``"7/2"`` or ``"3"``.

    Floats are refused: silently turning 0.1 into a binary approximation
    would defeat the point of exact arithmetic.
    """
    if isinstance(value, bool):
        raise FlowTypeError(f"not a rational: {value!r}", "bad-rational")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            pass
    raise FlowTypeError(f"not a rational: {value!r}", "bad-rational")


def format_fraction(value):
    """Render as ``p/q`` (always with a denominator)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def pretty_fraction(value):
    """Render compactly: ``3``, ``-7/2``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
