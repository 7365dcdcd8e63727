"""Closed rational intervals, possibly empty."""

from dataclasses import dataclass
from fractions import Fraction

from .rationals import as_fraction, pretty_fraction


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            # every empty interval compares equal to every other
            lo, hi = Fraction(1), Fraction(0)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def empty(cls):
        return cls(1, 0)

    @classmethod
    def point(cls, value):
        return cls(value, value)

    @property
    def is_empty(self):
        return self.lo > self.hi

    def __contains__(self, value):
        return self.lo <= value <= self.hi

    def __add__(self, other):
        if self.is_empty or other.is_empty:
            return Interval.empty()
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self):
        if self.is_empty:
            return self
        return Interval(-self.hi, -self.lo)

    def intersect(self, other):
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def issubset(self, other):
        return self.is_empty or (other.lo <= self.lo and self.hi <= other.hi)

    def __str__(self):
        if self.is_empty:
            return "empty"
        return f"[{pretty_fraction(self.lo)},{pretty_fraction(self.hi)}]"
