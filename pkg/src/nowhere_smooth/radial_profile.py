"""Radial profile with a derivative jump at every enumerated rational.

    f(x) = sum of m_n over q_n <= x           (increasing jump function)
    I(x) = integral of f over [0, x]           (convex)
    P    = cubic fixing S(0) = S(2*pi) = L, S'(0) = f(0), S'(2*pi) = 0
    S    = I + P

All series are truncated at K terms; every evaluation returns a
:class:`ProfileValue` whose ``error_radius`` bounds the truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ConfigurationError, NonPositiveProfile
from .rational_enum import Enumeration, RationalAngle, check_domain, enclose

TAU = math.tau
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ProfileValue:
    """A value with a rigorous bound ``|value - true| <= error_radius``."""

    value: float
    error_radius: float = 0.0

    def __add__(self, other):
        if isinstance(other, ProfileValue):
            return ProfileValue(self.value + other.value, self.error_radius + other.error_radius)
        return ProfileValue(self.value + float(other), self.error_radius)

    __radd__ = __add__

    @property
    def lo(self) -> float:
        return self.value - self.error_radius

    @property
    def hi(self) -> float:
        return self.value + self.error_radius

    def contains(self, t: float, slack: float = 0.0) -> bool:
        return abs(t - self.value) <= self.error_radius + slack


@dataclass(frozen=True)
class WeightSequence:
    """Geometric weights m_n = total * (1 - ratio) * ratio**n.

    With the defaults this is m_n = 2**-(n+1), summing to exactly 1, and the
    tail bound is tail(K) = total * ratio**K.
    """

    ratio: float = 0.5
    total: float = 1.0
    rule: str = "geometric"

    def __post_init__(self):
        if self.rule != "geometric":
            raise ConfigurationError(f"unknown weight rule {self.rule!r}")
        if not 0.0 < self.ratio < 1.0:
            raise ConfigurationError("geometric ratio must lie in (0, 1)")
        if not self.total > 0.0:
            raise ConfigurationError("total weight must be positive")

    def term(self, n: int) -> float:
        return self.total * (1.0 - self.ratio) * self.ratio**n

    def terms(self, count: int) -> np.ndarray:
        return np.array([self.term(n) for n in range(count)])

    def tail(self, k: int) -> float:
        return self.total * self.ratio**k

    @property
    def V(self) -> float:
        return self.total


@dataclass(frozen=True)
class RadialProfile:
    """Vectorised radius function on [0, 2*pi] plus its error bound.

    ``singular`` lists parameters where the profile has corners, in the order
    they should be inserted into samples.
    """

    radius: Callable[[np.ndarray], np.ndarray]
    error: Optional[Callable[[np.ndarray], np.ndarray]] = None
    singular: tuple = ()
    label: str = "profile"

    def __call__(self, x) -> np.ndarray:
        return self.radius(np.asarray(x, dtype=float))

    def error_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.error is None:
            return np.zeros_like(x)
        return np.broadcast_to(self.error(x), x.shape).astype(float)


def constant_profile(r: float) -> RadialProfile:
    return RadialProfile(lambda x: np.full_like(x, r, dtype=float), label=f"circle r={r:g}")


class OneSided(NamedTuple):
    left: ProfileValue
    right: ProfileValue
    jump: float  # exact sum of the weights located at x


@dataclass(frozen=True)
class ProfileConfig:
    """Weights, enumeration and truncation, with L = I(2*pi) frozen.

    Build with :meth:`ProfileConfig.build`; that call also certifies
    min S > 0 and raises :class:`NonPositiveProfile` otherwise.
    """

    weights: WeightSequence
    enumeration: Enumeration
    truncation: int
    L: float
    q: np.ndarray = field(repr=False)
    m: np.ndarray = field(repr=False)
    _order: np.ndarray = field(repr=False)
    _cum: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, weights: WeightSequence | None = None, truncation: int = 40,
              scheme: str = "denominator-major", check_samples: int = 10_000) -> "ProfileConfig":
        weights = weights or WeightSequence()
        if truncation < 2:
            raise ConfigurationError("truncation K must be >= 2")
        enum = Enumeration(truncation, scheme)
        q = enum.values
        m = weights.terms(truncation)
        m.flags.writeable = False
        order = np.argsort(q, kind="stable")
        cum = np.concatenate([[0.0], np.cumsum(m[order])])
        L = math.fsum(m * np.maximum(TAU - q, 0.0))
        cfg = cls(weights, enum, truncation, L, q, m, order, cum)
        if L <= 0:
            raise NonPositiveProfile("L = I(2*pi) must be positive")
        if check_samples:
            bound = certified_minimum(cfg, check_samples)
            if bound <= 0:
                raise NonPositiveProfile(f"min S is not certified positive (bound {bound:.3g})")
        return cfg

    @property
    def V(self) -> float:
        return self.weights.V

    @property
    def tail(self) -> float:
        return self.weights.tail(self.truncation)


# -- jump function f ---------------------------------------------------------

def jump_eval(x, cfg: ProfileConfig) -> ProfileValue:
    """f(x) = sum of m_n over enumerated q_n <= x (upper semi-continuous)."""
    mask = cfg.enumeration.le_mask(x)
    return ProfileValue(math.fsum(cfg.m[mask]), cfg.tail)


def _jump_sums(x: np.ndarray, cfg: ProfileConfig, strict: bool) -> np.ndarray:
    qs = cfg.q[cfg._order]
    side = "left" if strict else "right"
    idx = np.searchsorted(qs, x, side=side)
    out = cfg._cum[idx]
    # exact tie resolution where a float argument equals a rounded rational
    near = qs[np.minimum(idx, qs.size - 1)] if strict else qs[np.maximum(idx - 1, 0)]
    for t in np.flatnonzero(near == x):
        xt = float(x[t])
        exact = cfg.enumeration.le_mask(xt, strict=strict)
        out[t] = math.fsum(cfg.m[exact])
    return out


def jump_values(x, cfg: ProfileConfig) -> np.ndarray:
    """Vectorised f; same semantics as :func:`jump_eval`."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return _jump_sums(x, cfg, strict=False)


# -- integral I --------------------------------------------------------------

def integral_eval(x, cfg: ProfileConfig) -> ProfileValue:
    """I(x) = sum over n < K of m_n * max(0, x - q_n), error x * tail(K)."""
    check_domain(enclose(x))
    xf = float(x)
    if xf == 0.0:
        return ProfileValue(0.0, 0.0)
    return ProfileValue(math.fsum(cfg.m * np.maximum(xf - cfg.q, 0.0)), xf * cfg.tail)


def integral_values(x, cfg: ProfileConfig) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for s in range(0, x.size, _CHUNK):
        xs = x.flat[s:s + _CHUNK]
        out.flat[s:s + _CHUNK] = np.maximum(xs[:, None] - cfg.q[None, :], 0.0) @ cfg.m
    return out


# -- cubic P -----------------------------------------------------------------
# Hermite form on t = x / (2*pi); at t = 0 and t = 1 the basis polynomials are
# exactly 0 or 1 in floating point, so the four boundary identities are exact.

def cubic_eval(x, cfg: ProfileConfig):
    t = np.asarray(x, dtype=float) / TAU
    L, V = cfg.L, cfg.V
    out = L * (2 * t**3 - 3 * t**2 + 1) - V * TAU * (t**3 - t**2)
    return float(out) if out.ndim == 0 else out


def cubic_derivative(x, cfg: ProfileConfig):
    t = np.asarray(x, dtype=float) / TAU
    L, V = cfg.L, cfg.V
    out = L * (6 * t**2 - 6 * t) / TAU - V * (3 * t**2 - 2 * t)
    return float(out) if out.ndim == 0 else out


def cubic_second_derivative(x, cfg: ProfileConfig):
    t = np.asarray(x, dtype=float) / TAU
    L, V = cfg.L, cfg.V
    out = L * (12 * t - 6) / TAU**2 - V * (6 * t - 2) / TAU
    return float(out) if out.ndim == 0 else out


def cubic_coefficients(cfg: ProfileConfig) -> tuple[float, float, float]:
    """(a, b, c) of the power form P(x) = a x^3 + b x^2 + c."""
    L, V, pi = cfg.L, cfg.V, math.pi
    return ((L - pi * V) / (4 * pi**3), (2 * V * pi - 3 * L) / (4 * pi**2), L)


# -- sum S -------------------------------------------------------------------

def sum_eval(x, cfg: ProfileConfig) -> ProfileValue:
    return integral_eval(x, cfg) + cubic_eval(float(x), cfg)


def sum_values(x, cfg: ProfileConfig) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return integral_values(x, cfg) + cubic_eval(x, cfg)


def one_sided_derivatives(x, cfg: ProfileConfig) -> OneSided:
    """Left and right derivatives of S at ``x``.

    ``jump`` is right minus left computed on the jump sums alone, which is
    exact for dyadic weights; ``right.value - left.value`` additionally
    carries the rounding of adding P'(x).
    """
    le = cfg.enumeration.le_mask(x)
    lt = cfg.enumeration.le_mask(x, strict=True)
    fr, fl = math.fsum(cfg.m[le]), math.fsum(cfg.m[lt])
    dp = cubic_derivative(float(x), cfg)
    return OneSided(ProfileValue(fl + dp, cfg.tail), ProfileValue(fr + dp, cfg.tail),
                    math.fsum(cfg.m[le & ~lt]))


def seam_derivatives(cfg: ProfileConfig) -> tuple[ProfileValue, ProfileValue]:
    """(S'_+(0), S'_-(2*pi)), the two slopes meeting at the seam point."""
    return one_sided_derivatives(0.0, cfg).right, one_sided_derivatives(TAU, cfg).left


def derivative_bound(cfg: ProfileConfig) -> float:
    """Upper bound on |S'| over [0, 2*pi]."""
    # P' is quadratic; its extreme values sit at the endpoints or the vertex
    a, b, _ = cubic_coefficients(cfg)
    cands = [0.0, TAU]
    if a != 0:
        v = -b / (3 * a)
        if 0 < v < TAU:
            cands.append(v)
    dp = max(abs(cubic_derivative(c, cfg)) for c in cands)
    return cfg.V + dp


def certified_minimum(cfg: ProfileConfig, samples: int = 10_000) -> float:
    """Lower bound for min S from dense sampling plus a Lipschitz bracket."""
    x = np.linspace(0.0, TAU, samples)
    vals = sum_values(x, cfg)
    step = TAU / (samples - 1)
    return float(vals.min()) - derivative_bound(cfg) * step / 2 - TAU * cfg.tail


def singularity_table(top_k: int, cfg: ProfileConfig) -> list[tuple[RationalAngle, float, int]]:
    """Enumerated rationals ordered by descending jump, ties by index."""
    if not 1 <= top_k <= cfg.truncation:
        raise ValueError(f"top_k must lie in [1, {cfg.truncation}]")
    order = sorted(range(cfg.truncation), key=lambda n: (-cfg.m[n], n))[:top_k]
    return [(cfg.enumeration[n], float(cfg.m[n]), n) for n in order]


def semiconvexity_constant(cfg: ProfileConfig) -> float:
    """C >= 0 with S + (C/2) x^2 convex on [0, 2*pi].

    I is convex and P'' is affine, so the worst curvature of P sits at an
    endpoint.
    """
    return max(0.0, -cubic_second_derivative(0.0, cfg), -cubic_second_derivative(TAU, cfg))


def as_radial(cfg: ProfileConfig) -> RadialProfile:
    singular = tuple(float(q) for q in cfg.enumeration)
    return RadialProfile(
        radius=lambda x: sum_values(x, cfg),
        error=lambda x: np.asarray(x, dtype=float) * cfg.tail,
        singular=singular,
        label="jump profile S",
    )


class ConvexityCheck(NamedTuple):
    passed: bool
    worst_excess: float  # max of lhs - rhs - slack; <= 0 when passed
    samples: int


def midpoint_convexity(values, errors, C: float, samples: int = 10_000, seed: int = 0,
                       slack_factor: float = 4.0) -> ConvexityCheck:
    """Randomised check that x -> h(x) + (C/2) x^2 is midpoint convex.

    For random a, b in [0, 2*pi] tests h(m) + C m^2/2 <= mean of the same at a
    and b, allowing ``slack_factor`` times the propagated error radius.
    ``values`` and ``errors`` are vectorised callables.
    """
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, TAU, samples)
    b = rng.uniform(0.0, TAU, samples)
    mid = (a + b) / 2
    g = lambda x: values(x) + 0.5 * C * x * x
    lhs = g(mid)
    rhs = (g(a) + g(b)) / 2
    err = errors(mid) + (errors(a) + errors(b)) / 2
    # float rounding of the three evaluations
    err = err + 8 * np.spacing(np.maximum(np.abs(lhs), np.abs(rhs)))
    excess = lhs - rhs - slack_factor * err
    worst = float(excess.max())
    return ConvexityCheck(worst <= 0.0, worst, samples)
