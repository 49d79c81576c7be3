"""Raster verification that a star-shaped curve bounds an epsilon-neighbourhood.

Pipeline: rasterise the region A enclosed by the curve, erode it by epsilon
(cells at distance >= epsilon from the boundary cells) to get a candidate set
E, dilate E by epsilon, and compare the boundary of the result with the
sampled curve in Hausdorff distance.

Grid convention: cell (i, j) has centre origin + (j*h, i*h); masks are
indexed [row i, column j], i.e. row 0 is the lowest y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .errors import (
    CurveNotClosed,
    EmptyErosion,
    EmptyInput,
    EmptySample,
    EmptyTargets,
    NoneFound,
    NonPositiveRadius,
)
from .polar_curve import CurveSample

TAU = math.tau
DEFAULT_LADDER = (0.4, 0.2, 0.1, 0.05, 0.025)
_CHUNK = 1 << 18


@dataclass(frozen=True)
class GridSpec:
    origin: tuple
    spacing: float
    width: int
    height: int

    def __post_init__(self):
        if self.spacing <= 0 or self.width < 1 or self.height < 1:
            raise ValueError("grid needs positive spacing and dimensions")

    @classmethod
    def covering(cls, points, margin: float, size: int) -> "GridSpec":
        """Square size x size grid over the bounding box of ``points`` plus
        ``margin`` on every side."""
        pts = np.asarray(points, dtype=float)
        lo, hi = pts.min(axis=0) - margin, pts.max(axis=0) + margin
        h = float(max(hi - lo)) / (size - 1)
        centre = (lo + hi) / 2
        origin = centre - h * (size - 1) / 2
        return cls((float(origin[0]), float(origin[1])), h, size, size)

    @classmethod
    def square(cls, centre, half_width: float, spacing: float) -> "GridSpec":
        n = int(math.ceil(2 * half_width / spacing)) + 1
        origin = (centre[0] - spacing * (n - 1) / 2, centre[1] - spacing * (n - 1) / 2)
        return cls(origin, spacing, n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def xs(self) -> np.ndarray:
        return self.origin[0] + self.spacing * np.arange(self.width)

    @property
    def ys(self) -> np.ndarray:
        return self.origin[1] + self.spacing * np.arange(self.height)

    def centers(self, mask: Optional[np.ndarray] = None) -> np.ndarray:
        """Cell centres as an (N, 2) array, all cells or those in ``mask``."""
        if mask is None:
            X, Y = np.meshgrid(self.xs, self.ys)
            return np.column_stack([X.ravel(), Y.ravel()])
        i, j = np.nonzero(mask)
        return np.column_stack([self.origin[0] + self.spacing * j, self.origin[1] + self.spacing * i])

    def cells_near(self, point, radius: float) -> np.ndarray:
        """Boolean mask of cells whose centre lies within ``radius`` of ``point``."""
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.hypot(X - point[0], Y - point[1]) <= radius


@dataclass(frozen=True)
class RegionMask:
    grid: GridSpec
    inside: np.ndarray

    def __post_init__(self):
        if self.inside.shape != self.grid.shape or self.inside.dtype != bool:
            raise ValueError("mask must be boolean with the grid's shape")

    @property
    def area(self) -> float:
        return float(self.inside.sum()) * self.grid.spacing**2

    def any(self) -> bool:
        return bool(self.inside.any())


@dataclass(frozen=True)
class DistanceField:
    grid: GridSpec
    distance: np.ndarray


@dataclass(frozen=True)
class MultiplicityMap:
    """Per-cell count of near-minimal projections (0 = cell not evaluated).

    ``witnesses`` holds up to four target indices per cell, nearest first,
    padded with -1.
    """

    grid: GridSpec
    count: np.ndarray
    witnesses: np.ndarray

    @property
    def unique(self) -> np.ndarray:
        """Grid estimate of Unp(E) among evaluated cells."""
        return self.count == 1


@dataclass(frozen=True)
class ReconstructionReport:
    epsilon: float
    hausdorff_distance: float
    passed: bool
    cell_spacing: float
    curve_sampling_step: float
    tolerance: float
    region: Optional[RegionMask] = field(default=None, repr=False, compare=False)
    eroded: Optional[RegionMask] = field(default=None, repr=False, compare=False)
    reconstructed: Optional[RegionMask] = field(default=None, repr=False, compare=False)

    def to_text(self, prefix: str = "") -> str:
        rows = [
            ("epsilon", "%.17g" % self.epsilon),
            ("hausdorff", "%.17g" % self.hausdorff_distance),
            ("h", "%.17g" % self.cell_spacing),
            ("sampling_step", "%.17g" % self.curve_sampling_step),
            ("tolerance", "%.17g" % self.tolerance),
            ("passed", "true" if self.passed else "false"),
        ]
        return "".join(f"{prefix}{k}={v}\n" for k, v in rows)


# -- rasterisation -----------------------------------------------------------

def rasterize_region(sample: CurveSample, grid: GridSpec) -> RegionMask:
    """Cells whose centre c satisfies |c| <= S(angle of c)."""
    if len(sample) == 0:
        raise EmptySample("empty curve sample")
    if not sample.closed:
        raise CurveNotClosed("curve sample is not closed")
    if float(sample.radii.min()) <= 0:
        raise NonPositiveRadius("star-shaped region needs a positive radius")
    X, Y = np.meshgrid(grid.xs, grid.ys)
    rho = np.hypot(X, Y)
    slack = 0.05 * float(sample.radii.max()) + sample.sampling_step
    inside = rho < float(sample.radii.min()) - slack
    todo = np.flatnonzero((~inside) & (rho <= float(sample.radii.max()) + slack))
    for s in range(0, todo.size, _CHUNK):
        idx = todo[s:s + _CHUNK]
        ang = np.mod(np.arctan2(Y.flat[idx], X.flat[idx]), TAU)
        inside.flat[idx] = rho.flat[idx] <= sample.radius_at(ang)
    return RegionMask(grid, inside)


def disk_region(grid: GridSpec, radius: float, centre=(0.0, 0.0)) -> RegionMask:
    X, Y = np.meshgrid(grid.xs, grid.ys)
    return RegionMask(grid, np.hypot(X - centre[0], Y - centre[1]) <= radius)


# -- distances ---------------------------------------------------------------

def _edt_to(mask: np.ndarray, return_indices: bool = False):
    # distance (in cells) from every cell to the nearest True cell of ``mask``
    return ndimage.distance_transform_edt(~mask, return_indices=return_indices)


def distance_transform(targets, grid: GridSpec) -> DistanceField:
    """Exact Euclidean distance from every cell centre to ``targets``.

    ``targets`` is either a :class:`RegionMask` (its inside cells) or an
    (N, 2) array of planar points.
    """
    if isinstance(targets, RegionMask):
        if not targets.any():
            raise EmptyTargets("target mask is empty")
        return DistanceField(grid, _edt_to(targets.inside) * grid.spacing)
    pts = np.asarray(targets, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyTargets("no target points")
    d, _ = cKDTree(pts).query(grid.centers())
    return DistanceField(grid, d.reshape(grid.shape))


def boundary_cells(region: RegionMask) -> np.ndarray:
    """Inside cells with at least one outside 4-neighbour (off-grid is outside)."""
    m = np.pad(region.inside, 1, constant_values=False)
    interior = m[:-2, 1:-1] & m[2:, 1:-1] & m[1:-1, :-2] & m[1:-1, 2:]
    return region.inside & ~interior


def boundary_extract(region: RegionMask) -> np.ndarray:
    if not region.any():
        raise EmptyInput("region is empty")
    return region.grid.centers(boundary_cells(region))


def hausdorff_distance(P, Q) -> float:
    """max of the two directed max-min distances between point sets."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    if len(P) == 0 or len(Q) == 0:
        raise EmptyInput("Hausdorff distance needs two nonempty sets")
    dpq, _ = cKDTree(Q).query(P)
    dqp, _ = cKDTree(P).query(Q)
    return float(max(dpq.max(), dqp.max()))


# -- morphology --------------------------------------------------------------

def erode(region: RegionMask, epsilon: float) -> RegionMask:
    """Inner parallel set: inside cells at distance >= epsilon from the
    region's boundary cells."""
    h = region.grid.spacing
    if epsilon <= h:
        raise ValueError("epsilon must exceed the cell spacing")
    bnd = boundary_cells(region)
    if not bnd.any():
        raise EmptyErosion("region has no boundary cells")
    d = _edt_to(bnd) * h
    out = region.inside & (d >= epsilon)
    if not out.any():
        raise EmptyErosion(f"no cell survives erosion by {epsilon:g}")
    return RegionMask(region.grid, out)


def dilate(region: RegionMask, epsilon: float) -> RegionMask:
    """All cells within distance epsilon of the set."""
    if not region.any():
        raise EmptyInput("cannot dilate an empty set")
    d = _edt_to(region.inside) * region.grid.spacing
    return RegionMask(region.grid, d <= epsilon * (1 + 1e-12))


def inradius(region: RegionMask) -> float:
    """Largest distance from an inside cell to the boundary cells."""
    bnd = boundary_cells(region)
    if not bnd.any():
        raise EmptyInput("region is empty")
    return float((_edt_to(bnd)[region.inside]).max() * region.grid.spacing)


# -- reconstruction ------------------------------------------------------------

def tolerance(h: float, step: float) -> float:
    return 3.0 * h + step


def verify_reconstruction(sample: CurveSample, epsilon: float, grid: GridSpec,
                          region: Optional[RegionMask] = None) -> ReconstructionReport:
    """Erode, dilate back, and compare with the sampled curve.

    Passes when the Hausdorff distance is at most 3h plus the curve's
    sampling step.  ``region`` may carry a precomputed rasterisation.
    """
    h = grid.spacing
    if epsilon < 4 * h:
        raise ValueError("epsilon must be at least 4 cell spacings")
    A = region if region is not None else rasterize_region(sample, grid)
    E = erode(A, epsilon)
    R = dilate(E, epsilon)
    hd = hausdorff_distance(boundary_extract(R), sample.points)
    step = sample.sampling_step
    tol = tolerance(h, step)
    return ReconstructionReport(epsilon, hd, hd <= tol, h, step, tol, A, E, R)


def default_ladder(region: RegionMask, factors: Sequence[float] = DEFAULT_LADDER) -> list[float]:
    r = inradius(region)
    return [f * r for f in factors]


def epsilon_search(sample: CurveSample, grid: GridSpec, ladder: Optional[Sequence[float]] = None,
                   factors: Sequence[float] = DEFAULT_LADDER, return_report: bool = False):
    """First (largest) epsilon of a descending ladder that passes.

    Without an explicit ladder, ``factors`` times the rasterised inradius is
    used.  Rungs below 4h are skipped; empty erosions count as failures.
    """
    A = rasterize_region(sample, grid)
    if ladder is None:
        ladder = default_ladder(A, factors)
    ladder = list(ladder)
    if any(a < b for a, b in zip(ladder, ladder[1:])):
        raise ValueError("epsilon ladder must be descending")
    for eps in ladder:
        if eps < 4 * grid.spacing:
            continue
        try:
            rep = verify_reconstruction(sample, eps, grid, region=A)
        except EmptyErosion:
            continue
        if rep.passed:
            return (eps, rep) if return_report else eps
    raise NoneFound("no epsilon on the ladder passes at this resolution")


def grid_for(sample: CurveSample, size: int, factor: float = max(DEFAULT_LADDER)) -> GridSpec:
    """Square grid over the curve with margin 2 * factor * (half the smaller
    bounding-box side), which bounds 2 epsilon for every default rung."""
    pts = sample.points
    half = float(min(pts.max(axis=0) - pts.min(axis=0))) / 2
    return GridSpec.covering(pts, 2 * factor * half, size)


# -- metric projection ---------------------------------------------------------

def projection_multiplicity(targets, grid: GridSpec, tau: Optional[float] = None,
                            cells: Optional[np.ndarray] = None) -> MultiplicityMap:
    """Count targets within ``tau`` of each cell's minimal distance.

    ``cells`` restricts the evaluation to a boolean mask; other cells get
    count 0.  A count >= 2 flags a non-unique projection.
    """
    pts = np.asarray(targets, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyTargets("no target points")
    h = grid.spacing
    tau = 2 * h if tau is None else tau
    if tau < 2 * h * (1 - 1e-12):
        raise ValueError("tau must be at least 2h")
    mask = np.ones(grid.shape, bool) if cells is None else np.asarray(cells, bool)
    c = grid.centers(mask)
    tree = cKDTree(pts)
    k = min(4, len(pts))
    d, idx = tree.query(c, k=k)
    d = d.reshape(len(c), k)
    idx = idx.reshape(len(c), k)
    dmin = d[:, 0]
    cnt = np.asarray(tree.query_ball_point(c, dmin + tau, return_length=True))
    wit = np.where(d <= (dmin + tau)[:, None], idx, -1)
    count = np.zeros(grid.shape, dtype=np.int64)
    count[mask] = cnt
    witnesses = np.full(grid.shape + (4,), -1, dtype=np.int64)
    witnesses[mask, :k] = wit
    return MultiplicityMap(grid, count, witnesses)


def _tears(pts: np.ndarray, grid: GridSpec, max_turn: float, min_separation: Optional[float]):
    # flagged cells and the midpoints of the flagged neighbour pairs
    h = grid.spacing
    sep = 4 * h if min_separation is None else min_separation
    c = grid.centers()
    d, idx = cKDTree(pts).query(c)
    foot = pts[idx]
    u = foot - c
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(d[:, None] > 0, u / d[:, None], 0.0)
    H, W = grid.shape
    u = u.reshape(H, W, 2)
    foot = foot.reshape(H, W, 2)
    c = c.reshape(H, W, 2)
    valid = (d > 0).reshape(H, W)
    flagged = np.zeros((H, W), bool)
    mids = []
    cos_t = math.cos(max_turn)
    for di, dj in ((0, 1), (1, 0), (1, 1), (1, -1)):
        a = (slice(0, H - di), slice(max(0, -dj), W - max(0, dj)))
        b = (slice(di, H), slice(max(0, dj), W - max(0, -dj)))
        dot = np.sum(u[a] * u[b], axis=-1)
        gap = np.hypot(*(foot[a] - foot[b]).transpose(2, 0, 1))
        hit = valid[a] & valid[b] & (dot < cos_t - 1e-12) & (gap > sep)
        flagged[a] |= hit
        flagged[b] |= hit
        mids.append((c[a][hit] + c[b][hit]) / 2)
    return flagged, np.concatenate(mids)


def projection_discontinuity(targets, grid: GridSpec, max_turn: float = math.pi / 2,
                             min_separation: Optional[float] = None) -> np.ndarray:
    """Cells where the nearest-point map visibly tears.

    A cell is flagged when some 8-neighbour's nearest target lies more than
    ``min_separation`` (default 4h) away from its own and the two projection
    directions differ by more than ``max_turn``.  Directly across a target
    curve the nearest points stay adjacent, so the curve itself is not
    flagged.
    """
    pts = np.asarray(targets, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyTargets("no target points")
    return _tears(pts, grid, max_turn, min_separation)[0]


def reach_estimate(targets, grid: GridSpec, max_turn: float = math.pi / 2,
                   min_separation: Optional[float] = None) -> np.ndarray:
    """Per-target grid estimate of the local reach.

    For each target y, the distance to the nearest tear of the nearest-point
    map (see :func:`projection_discontinuity`), a tear being placed midway
    between the two cells that straddle it; ``inf`` when nothing tears.  The
    minimum over targets estimates the reach of the whole set.
    """
    pts = np.asarray(targets, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyTargets("no target points")
    _, mids = _tears(pts, grid, max_turn, min_separation)
    if len(mids) == 0:
        return np.full(len(pts), np.inf)
    d, _ = cKDTree(mids).query(pts)
    return d


# -- PGM -----------------------------------------------------------------------

def write_pgm(region: RegionMask) -> bytes:
    """Binary P5 image, 0 = outside, 255 = inside, top row = largest y."""
    H, W = region.grid.shape
    img = np.where(region.inside[::-1], 255, 0).astype(np.uint8)
    return f"P5\n{W} {H}\n255\n".encode("ascii") + img.tobytes()


def read_pgm(data: bytes, grid: GridSpec) -> RegionMask:
    if not data.startswith(b"P5"):
        raise ValueError("not a binary PGM (P5) image")
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        tokens.append(int(data[pos:end]))
        pos = end
    pos += 1
    W, H, maxval = tokens
    if (H, W) != grid.shape or maxval > 255:
        raise ValueError("PGM dimensions do not match the grid")
    img = np.frombuffer(data[pos:pos + W * H], dtype=np.uint8).reshape(H, W)
    return RegionMask(grid, img[::-1] >= 128)
