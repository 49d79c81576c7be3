"""Wrap a radial profile around the origin and sample the Jordan curve.

The polar map is alpha(x, r) = r (cos x, sin x).  A curve is sampled on a
uniform parameter grid of [0, 2pi) augmented with one-sided pairs around the
singular parameters, so that exported polylines keep their corners.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EmptySample, NonPositiveRadius
from .radial_profile import (
    ProfileConfig,
    RadialProfile,
    one_sided_derivatives,
    singularity_table,
    sum_eval,
)
from .rational_enum import RationalAngle

TAU = math.tau


def polar_map(x, r):
    """r * (cos x, sin x); broadcasts over arrays (last axis holds x, y)."""
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    return np.stack([r * np.cos(x), r * np.sin(x)], axis=-1)


@dataclass(frozen=True)
class CurveSample:
    parameters: np.ndarray
    radii: np.ndarray
    points: np.ndarray
    errors: np.ndarray
    closed: bool
    profile: Optional[RadialProfile] = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.parameters)

    @property
    def sampling_step(self) -> float:
        """Largest distance between consecutive points, seam included."""
        if len(self.points) < 2:
            return 0.0
        nxt = np.roll(self.points, -1, axis=0)
        return float(np.max(np.hypot(*(nxt - self.points).T)))

    def radius_at(self, x) -> np.ndarray:
        """Profile radius at angles ``x``; falls back to periodic linear
        interpolation of the samples when no profile is attached."""
        x = np.asarray(x, dtype=float)
        if self.profile is not None:
            return self.profile(x)
        xp = np.concatenate([self.parameters, [self.parameters[0] + TAU]])
        rp = np.concatenate([self.radii, [self.radii[0]]])
        return np.interp(np.mod(x, TAU), xp, rp, period=TAU)


def _one_sided_pairs(singular) -> np.ndarray:
    q = np.asarray([s for s in singular if 0.0 < s < TAU], dtype=float)
    return np.concatenate([np.nextafter(q, -np.inf), np.nextafter(q, np.inf)])


def sample_curve(profile, n_samples: int = 4096, include_rationals_up_to: Optional[int] = None) -> CurveSample:
    """Sample J = alpha(graph of the profile).

    ``profile`` is a :class:`RadialProfile` or a plain vectorised callable.
    The first ``include_rationals_up_to`` singular parameters (all of them if
    None) are inserted as pairs q - ulp, q + ulp.
    """
    if n_samples < 16:
        raise ValueError("n_samples must be >= 16")
    if not isinstance(profile, RadialProfile):
        profile = RadialProfile(profile)
    singular = profile.singular
    if include_rationals_up_to is not None:
        singular = singular[:include_rationals_up_to]
    x = np.linspace(0.0, TAU, n_samples, endpoint=False)
    x = np.unique(np.concatenate([x, _one_sided_pairs(singular)]))
    r = profile(x)
    if np.any(r <= 0):
        raise NonPositiveRadius(f"sampled radius {float(r.min()):.6g} <= 0")
    err = profile.error_at(x)
    ends = profile(np.array([0.0, TAU]))
    end_err = profile.error_at(np.array([0.0, TAU]))
    # allow a few ulps so that exactly periodic formulas survive rounding
    slack = end_err.sum() + 8 * np.spacing(float(np.max(np.abs(ends))))
    closed = bool(abs(ends[0] - ends[1]) <= slack)
    return CurveSample(x, r, polar_map(x, r), err, closed, profile)


@dataclass(frozen=True)
class WedgeRecord:
    location: RationalAngle
    index: int
    jump: float
    turn_angle: float
    point: tuple


def turn_angle(radius: float, left_slope: float, right_slope: float) -> float:
    """Angle between the one-sided tangents of a polar curve.

    In the radial frame the tangent of alpha(x, S(x)) is (S', S); a derivative
    jump from ``left_slope`` up to ``right_slope`` turns it by this angle.
    """
    return math.atan2(radius, left_slope) - math.atan2(radius, right_slope)


def wedge_records(entries, radius_at, slopes_at) -> list[WedgeRecord]:
    """Build records for table entries (q, jump, n); zero turns are dropped.

    ``slopes_at(q)`` returns (left, right) slopes, ``radius_at(q)`` the radius.
    """
    out = []
    for q, jump, n in entries:
        left, right = slopes_at(q)
        r = radius_at(q)
        theta = turn_angle(r, left, right)
        if theta <= 0.0:
            continue
        x = float(q)
        out.append(WedgeRecord(q, n, float(jump), theta, (r * math.cos(x), r * math.sin(x))))
    out.sort(key=lambda w: (-w.turn_angle, w.index))
    return out


def wedge_turn_angles(cfg: ProfileConfig, top_k: int, cantor_cfg=None) -> list[WedgeRecord]:
    """Corner census for the top ``top_k`` jumps of S (or of T = S + S_g when
    ``cantor_cfg`` is given).  The seam wedge at q = 0 pairs the right slope
    at 0 with the left slope at 2pi."""
    from . import cantor_profile as cp

    if cantor_cfg is None:
        radius_at = lambda q: sum_eval(float(q), cfg).value
        deriv = lambda x: one_sided_derivatives(x, cfg)
    else:
        radius_at = lambda q: cp.combined_eval(float(q), cfg, cantor_cfg).value
        deriv = lambda x: cp.combined_one_sided_slopes(x, cfg, cantor_cfg)

    def slopes_at(q):
        if q.numerator == 0:
            return deriv(TAU).left.value, deriv(0.0).right.value
        d = deriv(q.fraction if q.denominator > 1 else float(q))
        return d.left.value, d.right.value

    return wedge_records(singularity_table(top_k, cfg), radius_at, slopes_at)


@dataclass(frozen=True)
class StarShapeReport:
    min_radius: float
    kernel_contains_origin_ball: bool


def star_shape_check(sample: CurveSample) -> StarShapeReport:
    if len(sample) == 0:
        raise EmptySample("empty sample")
    m = float(np.min(sample.radii - sample.errors))
    return StarShapeReport(m, m > 0.0)


# -- exporters ---------------------------------------------------------------

def export_csv(sample: CurveSample) -> bytes:
    if len(sample) == 0:
        raise EmptySample("empty sample")
    buf = io.StringIO()
    buf.write("x,radius,px,py,err\n")
    for x, r, (px, py), e in zip(sample.parameters, sample.radii, sample.points, sample.errors):
        buf.write("%.17g,%.17g,%.17g,%.17g,%.17g\n" % (x, r, px, py, e))
    return buf.getvalue().encode("utf-8")


DEFAULT_STYLE = {
    "canvas": 1024,
    "margin": 0.05,
    "stroke": "#1b5e20",
    "stroke_width": 1.5,
    "fill": "none",
    "marker_fill": "#000000",
    "marker_radius": 4.0,
}


def export_svg(sample: CurveSample, wedges=(), style: Optional[dict] = None) -> bytes:
    """Closed path through the sample points plus a dot per wedge vertex."""
    if len(sample) == 0:
        raise EmptySample("empty sample")
    st = dict(DEFAULT_STYLE, **(style or {}))
    size = int(st["canvas"])
    pts = sample.points
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo))
    span = span if span > 0 else 1.0
    scale = size * (1 - 2 * st["margin"]) / span
    centre = (lo + hi) / 2

    def tx(p):
        # y axis flipped so the curve keeps its mathematical orientation
        return (size / 2 + (p[0] - centre[0]) * scale, size / 2 - (p[1] - centre[1]) * scale)

    coords = [tx(p) for p in pts]
    d = "M " + " L ".join("%.4f %.4f" % c for c in coords) + " Z"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
        f'<path d="{d}" fill="{st["fill"]}" stroke="{st["stroke"]}" '
        f'stroke-width="{st["stroke_width"]}" stroke-linejoin="miter"/>',
    ]
    for w in wedges:
        cx, cy = tx(w.point)
        lines.append(
            f'<circle class="wedge" cx="{cx:.4f}" cy="{cy:.4f}" r="{st["marker_radius"]}" '
            f'fill="{st["marker_fill"]}"/>'
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
