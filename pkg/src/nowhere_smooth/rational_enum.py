"""Exact enumeration of the rationals in [0, 2*pi].

The enumeration is *denominator-major*: denominators d = 1, 2, 3, ... and for
each d the numerators p = 0 .. floor(2*pi*d) coprime to d, ascending.  Index 0
is therefore 0/1.

2*pi is irrational, so every ordering question against it is answered with a
certified rational enclosure (computed from Machin's formula with exact
integer arithmetic) rather than with ``math.tau``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import islice
from numbers import Rational
from typing import Iterator, NamedTuple

import numpy as np

from .errors import AmbiguousComparison, ConfigurationError

MAX_ENUMERATION = 10**7
SCHEMES = ("denominator-major",)


class Enclosure(NamedTuple):
    """Closed rational interval [lo, hi] known to contain a real number."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _arctan_inv_bounds(k: int, terms: int) -> tuple[Fraction, Fraction]:
    # alternating series with decreasing terms: consecutive partial sums bracket
    s = Fraction(0)
    prev = s
    for j in range(terms):
        prev = s
        s += Fraction((-1) ** j, (2 * j + 1) * k ** (2 * j + 1))
    return (min(s, prev), max(s, prev))


def _two_pi_enclosure(bits: int = 70) -> Enclosure:
    lo5, hi5 = _arctan_inv_bounds(5, 40)
    lo239, hi239 = _arctan_inv_bounds(239, 16)
    lo = 2 * (16 * lo5 - 4 * hi239)
    hi = 2 * (16 * hi5 - 4 * lo239)
    # round outward to a dyadic grid so later comparisons stay cheap
    scale = 1 << bits
    lo_d = Fraction(math.floor(lo * scale), scale)
    hi_d = Fraction(math.ceil(hi * scale), scale)
    return Enclosure(lo_d, hi_d)


TWO_PI = _two_pi_enclosure()
assert TWO_PI.width <= Fraction(1, 2**60)


def enclose(x) -> Enclosure:
    """Certified enclosure of ``x``.

    Floats, ints and Fractions are exact (a degenerate interval).  The float
    ``math.tau`` is read as the real number 2*pi, which is the only sensible
    reading on the domain [0, 2*pi].
    """
    if isinstance(x, Enclosure):
        return x
    if isinstance(x, float) and x == math.tau:
        return TWO_PI
    if isinstance(x, (int, float, Rational, np.floating, np.integer)):
        f = Fraction(x) if not isinstance(x, np.generic) else Fraction(x.item())
        return Enclosure(f, f)
    raise TypeError(f"cannot enclose {type(x).__name__}")


def floor_two_pi_times(d: int) -> int:
    lo, hi = math.floor(TWO_PI.lo * d), math.floor(TWO_PI.hi * d)
    if lo != hi:
        raise AmbiguousComparison(f"floor(2*pi*{d}) is not decided by the enclosure")
    return lo


@dataclass(frozen=True, order=False)
class RationalAngle:
    """An exact angle p/q radians in [0, 2*pi], stored in lowest terms."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1 or self.numerator < 0:
            raise ValueError("need numerator >= 0 and denominator >= 1")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise ValueError(f"{self.numerator}/{self.denominator} is not in lowest terms")
        q = self.fraction
        if q > TWO_PI.lo:
            if q >= TWO_PI.hi:
                raise ValueError(f"{self} exceeds 2*pi")
            raise AmbiguousComparison(f"{self} is inside the enclosure of 2*pi")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def _denominator_major() -> Iterator[RationalAngle]:
    d = 1
    while True:
        top = floor_two_pi_times(d)
        for p in range(top + 1):
            if math.gcd(p, d) == 1:
                yield RationalAngle(p, d)
        d += 1


@lru_cache(maxsize=8)
def _prefix(count: int) -> tuple[RationalAngle, ...]:
    return tuple(islice(_denominator_major(), count))


def _check_count(count: int) -> None:
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > MAX_ENUMERATION:
        raise ConfigurationError(
            f"enumerations above {MAX_ENUMERATION} entries are rejected (asked for {count})"
        )


class Enumeration:
    """The first ``count`` rationals q_0, q_1, ... in denominator-major order.

    Instances are immutable; the float images of the rationals are kept in a
    read-only array for vectorised comparisons, with exact fallback on ties.
    """

    scheme = "denominator-major"

    def __init__(self, count: int, scheme: str = "denominator-major"):
        if scheme not in SCHEMES:
            raise ConfigurationError(f"unknown enumeration scheme {scheme!r}")
        _check_count(count)
        self._items = _prefix(count)
        values = np.array([float(q) for q in self._items])
        values.flags.writeable = False
        self._values = values

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, n):
        return self._items[n]

    def __iter__(self):
        return iter(self._items)

    @property
    def values(self) -> np.ndarray:
        """Correctly rounded float value of each rational."""
        return self._values

    def le_mask(self, x, strict: bool = False) -> np.ndarray:
        """Boolean mask of ``q_n <= x`` (``q_n < x`` when ``strict``).

        Decided exactly.  A float ``x`` is a dyadic rational, so the rounded
        images already decide every entry except exact float ties; an
        interval enclosure is compared endpoint-wise and raises
        :class:`AmbiguousComparison` when it straddles some q_n.
        """
        enc = enclose(x)
        check_domain(enc)
        v = self._values
        if enc.lo == enc.hi:
            xf = float(enc.lo)
            mask = (v < xf) if strict else (v <= xf)
            for i in np.flatnonzero(v == xf):
                q = self._items[i].fraction
                mask[i] = q < enc.lo if strict else q <= enc.lo
            return mask
        lo_f, hi_f = float(enc.lo), float(enc.hi)
        slack = 4 * np.spacing(max(abs(hi_f), 1.0))
        mask = v < lo_f - slack
        for i in np.flatnonzero((v >= lo_f - slack) & (v <= hi_f + slack)):
            q = self._items[i].fraction
            if (q < enc.lo) or (not strict and q == enc.lo):
                mask[i] = True
            elif q > enc.hi or (strict and q == enc.hi):
                mask[i] = False
            else:
                raise AmbiguousComparison(f"{q} lies inside the enclosure of x")
        return mask


def check_domain(enc: Enclosure) -> None:
    if enc.lo < 0 or enc.hi > TWO_PI.hi:
        raise ValueError("x must lie in [0, 2*pi]")


def enumerate_rationals(count: int) -> list[RationalAngle]:
    """First ``count`` rationals of [0, 2*pi] in denominator-major order."""
    _check_count(count)
    return list(_prefix(count))


def index_set_size(x, count: int) -> int:
    """|{n < count : q_n <= x}|, decided with exact arithmetic."""
    return int(Enumeration(count).le_mask(x).sum())


def count_up_to_denominator(dmax: int) -> int:
    """Number of enumerated rationals with denominator <= dmax."""
    total = 0
    for d in range(1, dmax + 1):
        total += sum(1 for p in range(floor_two_pi_times(d) + 1) if math.gcd(p, d) == 1)
    return total
