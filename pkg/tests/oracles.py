"""Independent reference computations used by the unit and acceptance tests."""

import math

import numpy as np

from nowhere_smooth import cantor_profile as cp
from nowhere_smooth import radial_profile as rp

TAU = math.tau


_UNIT_NODES = {}


def midpoint_integral_of_jumps(x: float, cfg, nodes: int = 10**6) -> float:
    """Composite midpoint rule for the integral of f over [0, x].

    f is evaluated directly as a cumulative sum of the weights over the
    sorted float images of the rationals, independent of the library path.
    (A node landing exactly on a rational image would be off by one weight
    on a single node, which is far below the tolerance.)
    """
    if x == 0:
        return 0.0
    if nodes not in _UNIT_NODES:
        _UNIT_NODES[nodes] = (np.arange(nodes) + 0.5) / nodes
    order = np.argsort(cfg.q)
    qs = cfg.q[order]
    cum = np.concatenate([[0.0], np.cumsum(cfg.m[order])])
    f = cum[np.searchsorted(qs, _UNIT_NODES[nodes] * x, side="right")]
    return float(f.sum() * (x / nodes))


def fd_turn_angle(radius, q: float, n_points: int = 10**6) -> float:
    """Corner angle of the polar curve at parameter q from one-sided
    second-order difference tangents with step 2pi / n_points.

    The sign is taken so that a convex-outward kink (the curve bending
    inward at a wedge) is positive.
    """
    d = TAU / n_points
    if q == 0.0:
        right = np.array([0.0, d, 2 * d])
        left = np.array([TAU, TAU - d, TAU - 2 * d])
    else:
        right = np.array([q, q + d, q + 2 * d])
        left = np.array([q, q - d, q - 2 * d])

    def pts(x):
        r = radius(x)
        return np.column_stack([r * np.cos(x), r * np.sin(x)])

    pr, pl = pts(right), pts(left)
    tr = (-3 * pr[0] + 4 * pr[1] - pr[2]) / (2 * d)
    tl = (3 * pl[0] - 4 * pl[1] + pl[2]) / (2 * d)
    # rotation carrying the outgoing tangent onto the incoming one
    return math.atan2(tr[0] * tl[1] - tr[1] * tl[0], float(tl @ tr))


def riemann_bracket_cantor(panels_log3: int) -> tuple[float, float]:
    """Lower and upper Riemann sums of G over [0, 1] with 3**k panels."""
    n = 3**panels_log3
    edges = np.arange(n + 1) / n
    g = cp.cantor_values(edges)
    return float(g[:-1].sum() / n), float(g[1:].sum() / n)


def riemann_bracket_cantor_upto(x: float, panels: int) -> tuple[float, float]:
    """Monotone Riemann bracket of the integral of G over [0, x]."""
    edges = np.linspace(0.0, x, panels + 1)
    g = cp.cantor_values(edges)
    w = x / panels
    return float(g[:-1].sum() * w), float(g[1:].sum() * w)


def brute_distance(mask_targets: np.ndarray, h: float) -> np.ndarray:
    """All-pairs distance from every cell to the True cells of a mask."""
    H, W = mask_targets.shape
    ti, tj = np.nonzero(mask_targets)
    I, J = np.mgrid[0:H, 0:W]
    d2 = (I[..., None] - ti) ** 2 + (J[..., None] - tj) ** 2
    return np.sqrt(d2.min(axis=-1)) * h


def brute_hausdorff(P, Q) -> float:
    P, Q = np.asarray(P, float), np.asarray(Q, float)
    D = np.hypot(P[:, None, 0] - Q[None, :, 0], P[:, None, 1] - Q[None, :, 1])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))
