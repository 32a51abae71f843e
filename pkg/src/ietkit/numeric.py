"""Exact rational arithmetic and half-open interval set algebra.

Rationals are plain ``fractions.Fraction`` values; this module pins the
conventions the rest of the package relies on (lowest terms, ``p/q``
round-tripping, refusal to coerce floats) and adds finite unions of
half-open intervals with exact Lebesgue measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[Rational, int, str]


def rational(value: RationalLike) -> Rational:
    """Coerce ints, ``p/q`` strings, or Fractions to an exact Rational.

    Floats are rejected: binary floats silently misrepresent the inputs
    this package cares about, so the caller has to spell them exactly.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("bool is not a rational value")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational from {value!r}") from exc
    raise ValueError(f"refusing to coerce {type(value).__name__} to a rational")


def format_rational(value: Rational) -> str:
    """Serialize to the canonical ``p/q`` (or integer) string."""
    return str(value)


def parse_rational(text: str) -> Rational:
    """Inverse of :func:`format_rational`."""
    return rational(text)


IntervalLike = Union["HalfOpenInterval", tuple]


@dataclass(frozen=True, order=True)
class HalfOpenInterval:
    """A nonempty half-open interval [lo, hi) with rational endpoints."""

    lo: Rational
    hi: Rational

    def __post_init__(self):
        object.__setattr__(self, "lo", rational(self.lo))
        object.__setattr__(self, "hi", rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi})")

    @property
    def measure(self) -> Rational:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        x = rational(x)
        return self.lo <= x < self.hi

    def translate(self, delta: RationalLike) -> "HalfOpenInterval":
        delta = rational(delta)
        return HalfOpenInterval(self.lo + delta, self.hi + delta)

    def intersects(self, other: "HalfOpenInterval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


def _as_interval(item: IntervalLike) -> HalfOpenInterval:
    if isinstance(item, HalfOpenInterval):
        return item
    lo, hi = item
    return HalfOpenInterval(rational(lo), rational(hi))


@dataclass(frozen=True)
class IntervalSet:
    """A finite disjoint union of half-open intervals, kept canonical.

    The constructor accepts intervals or (lo, hi) pairs in any order,
    drops nothing (empty pairs are illegal at the HalfOpenInterval level,
    so use :meth:`from_pairs` when degenerate inputs may appear), sorts,
    and merges touching or overlapping components. Two IntervalSets are
    equal iff they describe the same point set.
    """

    intervals: tuple = field(default=())

    def __post_init__(self):
        pieces = sorted(_as_interval(p) for p in self.intervals)
        merged: list[HalfOpenInterval] = []
        for p in pieces:
            if merged and p.lo <= merged[-1].hi:
                if p.hi > merged[-1].hi:
                    merged[-1] = HalfOpenInterval(merged[-1].lo, p.hi)
            else:
                merged.append(p)
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "IntervalSet":
        """Build from (lo, hi) pairs, silently dropping empty ones."""
        kept = []
        for lo, hi in pairs:
            lo, hi = rational(lo), rational(hi)
            if lo > hi:
                raise ValueError(f"descending pair ({lo}, {hi})")
            if lo < hi:
                kept.append(HalfOpenInterval(lo, hi))
        return cls(tuple(kept))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @property
    def measure(self) -> Rational:
        return sum((p.measure for p in self.intervals), Fraction(0))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __contains__(self, x) -> bool:
        x = rational(x)
        return any(x in p for p in self.intervals)

    def translate(self, delta: RationalLike) -> "IntervalSet":
        delta = rational(delta)
        return IntervalSet(tuple(p.translate(delta) for p in self.intervals))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo < hi:
                out.append(HalfOpenInterval(lo, hi))
            if a[i].hi <= b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        cuts = other.intervals
        for p in self.intervals:
            lo = p.lo
            for c in cuts:
                if c.hi <= lo:
                    continue
                if c.lo >= p.hi:
                    break
                if c.lo > lo:
                    out.append(HalfOpenInterval(lo, min(c.lo, p.hi)))
                lo = max(lo, c.hi)
                if lo >= p.hi:
                    break
            if lo < p.hi:
                out.append(HalfOpenInterval(lo, p.hi))
        return IntervalSet(tuple(out))

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.difference(other).union(other.difference(self))

    def issuperset(self, other: "IntervalSet") -> bool:
        return other.difference(self).is_empty

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(str(p) for p in self.intervals)


def interval_set(*pairs: tuple) -> IntervalSet:
    """Convenience constructor: interval_set((0, '1/2'), (1, 2))."""
    return IntervalSet(tuple(_as_interval(p) for p in pairs))


def partial_sums(values: Sequence[RationalLike]) -> tuple:
    """(0, v1, v1+v2, ...): the cumulative-sum vector with leading zero."""
    acc = Fraction(0)
    out = [acc]
    for v in values:
        acc += rational(v)
        out.append(acc)
    return tuple(out)
