"""Cantor-function augmentation of the radial profile.

G is the Cantor function on [0, 1], g(x) = G(x / 2pi) its stretch to
[0, 2pi], I_g the integral of g, S_g = I_g - x^2/(4pi) + pi, and the
combined radius is T = S + S_g.  The second derivative of I_g fails to exist
on the stretched Cantor set; its level-d construction intervals are exposed
for box counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, InsufficientScales
from .radial_profile import (
    ProfileConfig,
    ProfileValue,
    RadialProfile,
    semiconvexity_constant,
    sum_eval,
    sum_values,
)

TAU = math.tau
LOG2_OVER_LOG3 = math.log(2) / math.log(3)


@dataclass(frozen=True)
class CantorConfig:
    depth: int = 48      # ternary digits used by G
    recursion: int = 32  # self-similarity levels used by the integral

    def __post_init__(self):
        if self.depth < 8 or self.recursion < 8:
            raise ConfigurationError("Cantor depth and recursion must both be >= 8")


@dataclass(frozen=True)
class TernaryExpansion:
    digits: tuple
    exact: bool

    def value(self) -> Fraction:
        return sum((Fraction(a, 3**n) for n, a in enumerate(self.digits, 1)), Fraction(0))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(float(x))


def ternary_expansion(x, depth: int) -> TernaryExpansion:
    """First ``depth`` ternary digits of ``x`` in [0, 1].

    Emits the terminating form when one exists; x = 1 has only the
    expansion 0.222...
    """
    r = x0 = _as_fraction(x)
    if not 0 <= r <= 1:
        raise ValueError("x must lie in [0, 1]")
    digits = []
    for _ in range(depth):
        if r == 1:
            digits.append(2)
            continue
        t = 3 * r
        a = math.floor(t)
        digits.append(a)
        r = t - a
    return TernaryExpansion(tuple(digits), (x0 * 3**depth).denominator == 1)


def cantor_from_digits(digits: Sequence[int]) -> float:
    """Evaluate G from a (possibly non-terminating) digit string."""
    val = Fraction(0)
    for n, a in enumerate(digits, 1):
        if a == 1:
            return float(val + Fraction(1, 2**n))
        val += Fraction(a, 2 ** (n + 1))
    return float(val)


def cantor_eval(x, cfg: CantorConfig = CantorConfig()) -> ProfileValue:
    """G(x) from the ternary digits of ``x`` in exact arithmetic.

    N_x is the first index carrying digit 1.  When the expansion ends within
    ``cfg.depth`` digits (a digit 1, a zero remainder, or the all-2 tail of
    x = 1) the result is exact; otherwise the error radius is 2**-depth.
    """
    r = _as_fraction(x)
    if not 0 <= r <= 1:
        raise ValueError("x must lie in [0, 1]")
    val = Fraction(0)
    for n in range(1, cfg.depth + 1):
        if r == 0:
            return ProfileValue(float(val), 0.0)
        if r == 1:
            # remaining digits all 2: (1/2) * sum_{j >= n} 2 / 2^j
            return ProfileValue(float(val + Fraction(1, 2 ** (n - 1))), 0.0)
        t = 3 * r
        a = math.floor(t)
        r = t - a
        if a == 1:
            return ProfileValue(float(val + Fraction(1, 2**n)), 0.0)
        val += Fraction(a, 2 ** (n + 1))
    return ProfileValue(float(val), 0.0 if r == 0 else 2.0 ** -cfg.depth)


def cantor_values(x, depth: int = 48) -> np.ndarray:
    """Vectorised float G; digit extraction loses accuracy past ~33 digits."""
    r = np.clip(np.atleast_1d(np.asarray(x, dtype=float)).copy(), 0.0, 1.0)
    out = np.zeros_like(r)
    live = r < 1.0
    out[~live] = 1.0
    for n in range(1, depth + 1):
        if not live.any():
            break
        t = 3.0 * r
        a = np.minimum(np.floor(t), 2.0)
        r = t - a
        hit = live & (a == 1.0)
        out[hit] += 2.0**-n
        live &= ~hit
        out[live] += a[live] * 2.0 ** -(n + 1)
        live &= r > 0.0
    return out


def scaled_eval(x, cfg: CantorConfig = CantorConfig()) -> ProfileValue:
    """g(x) = G(x / 2pi); ``math.tau`` maps to exactly 1."""
    return cantor_eval(_unit(x), cfg)


def _unit(x) -> float:
    xf = float(x)
    if not 0.0 <= xf <= TAU:
        raise ValueError("x must lie in [0, 2*pi]")
    return xf / TAU


def cantor_integral(x, cfg: CantorConfig = CantorConfig()) -> ProfileValue:
    """Integral of G over [0, x] by self-similarity.

    On [0, 1/3] the integral is one sixth of the integral up to 3x; on
    [1/3, 2/3] it is 1/12 + (x - 1/3)/2; on [2/3, 1] point symmetry gives
    x - 1/2 + (integral up to 1 - x).  After ``cfg.recursion`` contractions
    the unresolved remainder lies in [0, coef/2] and is replaced by its
    midpoint.
    """
    y = _as_fraction(x)
    if not 0 <= y <= 1:
        raise ValueError("x must lie in [0, 1]")
    acc = Fraction(0)
    coef = Fraction(1)
    third, two_thirds = Fraction(1, 3), Fraction(2, 3)
    levels = 0
    while True:
        if y == 0:
            return ProfileValue(float(acc), 0.0)
        if y > two_thirds:
            acc += coef * (y - Fraction(1, 2))
            y = 1 - y
            continue
        if y >= third:
            acc += coef * (Fraction(1, 12) + (y - third) / 2)
            return ProfileValue(float(acc), 0.0)
        if levels == cfg.recursion:
            return ProfileValue(float(acc + coef / 4), float(coef / 4))
        coef /= 6
        y *= 3
        levels += 1


def cantor_integral_values(x, recursion: int = 32) -> np.ndarray:
    """Vectorised float version of :func:`cantor_integral`."""
    y = np.clip(np.atleast_1d(np.asarray(x, dtype=float)).copy(), 0.0, 1.0)
    acc = np.zeros_like(y)
    coef = np.ones_like(y)
    live = y > 0.0
    for _ in range(recursion):
        if not live.any():
            break
        hi = live & (y > 2.0 / 3.0)
        acc[hi] += coef[hi] * (y[hi] - 0.5)
        y[hi] = 1.0 - y[hi]
        live &= y > 0.0
        mid = live & (y >= 1.0 / 3.0)
        acc[mid] += coef[mid] * (1.0 / 12.0 + (y[mid] - 1.0 / 3.0) / 2.0)
        live &= ~mid
        coef[live] /= 6.0
        y[live] *= 3.0
    acc[live] += coef[live] / 4.0
    return acc


# -- stretched functions on [0, 2pi] ------------------------------------------

def integral_g(x, cfg: CantorConfig = CantorConfig()) -> ProfileValue:
    """I_g(x) = 2pi * (integral of G up to x / 2pi)."""
    v = cantor_integral(_unit(x), cfg)
    return ProfileValue(TAU * v.value, TAU * v.error_radius)


def parabola_g(x) -> float:
    return -float(x) ** 2 / (2 * TAU) + math.pi


def cantor_sum_eval(x, cfg: CantorConfig = CantorConfig()) -> ProfileValue:
    """S_g(x) = I_g(x) - x^2 / (4pi) + pi."""
    return integral_g(x, cfg) + parabola_g(x)


def cantor_sum_values(x, cfg: CantorConfig = CantorConfig()) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return TAU * cantor_integral_values(x / TAU, cfg.recursion) - x**2 / (2 * TAU) + math.pi


def combined_eval(x, profile_cfg: ProfileConfig, cantor_cfg: CantorConfig = CantorConfig()) -> ProfileValue:
    """T(x) = S(x) + S_g(x)."""
    return sum_eval(x, profile_cfg) + cantor_sum_eval(x, cantor_cfg)


def combined_values(x, profile_cfg: ProfileConfig, cantor_cfg: CantorConfig = CantorConfig()) -> np.ndarray:
    return sum_values(x, profile_cfg) + cantor_sum_values(x, cantor_cfg)


def combined_semiconvexity_constant(profile_cfg: ProfileConfig) -> float:
    # P_g'' = -1/(2pi); I and I_g are convex, so the constants add
    return semiconvexity_constant(profile_cfg) + 1.0 / TAU


def combined_one_sided_slopes(x, profile_cfg: ProfileConfig, cantor_cfg: CantorConfig = CantorConfig()):
    """One-sided derivatives of T; S_g is C^1 with S_g' = g(x) - x / 2pi."""
    from .radial_profile import one_sided_derivatives

    d = one_sided_derivatives(x, profile_cfg)
    extra = scaled_eval(x, cantor_cfg) + (-float(x) / TAU)
    return type(d)(d.left + extra, d.right + extra, d.jump)


def as_radial(profile_cfg: ProfileConfig, cantor_cfg: CantorConfig = CantorConfig()) -> RadialProfile:
    cerr = TAU * (6.0 ** -cantor_cfg.recursion) / 4
    return RadialProfile(
        radius=lambda x: combined_values(x, profile_cfg, cantor_cfg),
        error=lambda x: np.asarray(x, dtype=float) * profile_cfg.tail + cerr,
        singular=tuple(float(q) for q in profile_cfg.enumeration),
        label="combined profile T",
    )


# -- curvature-failure set and box counting -----------------------------------

@dataclass(frozen=True)
class CurvatureFailureSet:
    """The 2**d level-d Cantor construction intervals, stretched to [0, 2pi].

    Intervals are produced lazily; ``len`` does not materialise them.
    """

    depth: int

    def __len__(self) -> int:
        return 2**self.depth

    def left_indices(self) -> np.ndarray:
        """Integers k with left endpoint k / 3**depth (digits 0 and 2 only)."""
        k = np.zeros(1, dtype=np.int64)
        for _ in range(self.depth):
            k = np.concatenate([3 * k, 3 * k + 2])
        return np.sort(k)

    @property
    def intervals(self) -> np.ndarray:
        k = self.left_indices().astype(float)
        n = 3.0**self.depth
        return np.column_stack([TAU * k / n, TAU * (k + 1) / n])


def curvature_failure_intervals(depth: int) -> CurvatureFailureSet:
    if not 1 <= depth <= 30:
        raise ValueError("depth must lie in [1, 30]")
    return CurvatureFailureSet(depth)


def box_count(intervals: np.ndarray, size: float, snap: float = 1e-9) -> int:
    """Number of grid boxes [k*size, (k+1)*size) meeting the interiors of
    ``intervals`` (a degenerate interval counts its containing box)."""
    iv = np.asarray(intervals, dtype=float).reshape(-1, 2)
    a = iv[:, 0] / size
    b = iv[:, 1] / size
    first = np.floor(a + snap).astype(np.int64)
    last = np.maximum(first, np.ceil(b - snap).astype(np.int64) - 1)
    spans = np.concatenate([np.arange(f, l + 1) for f, l in zip(first, last)])
    return int(np.unique(spans).size)


def box_counting_dimension(fset, depths: Iterable[int]) -> float:
    """Least-squares slope of log2(count) against log2(1/scale), scales
    2pi * 3**-d for d in ``depths``."""
    depths = list(depths)
    if len(depths) < 3:
        raise InsufficientScales("box counting needs at least 3 scales")
    iv = fset.intervals if isinstance(fset, CurvatureFailureSet) else np.asarray(fset, dtype=float)
    counts = np.array([box_count(iv, TAU * 3.0**-d) for d in depths], dtype=float)
    xs = np.array(depths, dtype=float) * math.log2(3)
    slope = np.polyfit(xs, np.log2(counts), 1)[0]
    return float(slope)
