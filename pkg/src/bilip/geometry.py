"""Pointwise transforms and the identities that tie them together.

Euclidean inversion x -> x/|x|^2, the inverse stereographic embedding of
R^q into the unit sphere of R^(q+1), the half-ball chart at the north
pole, and residual checks for the exact distance identities these maps
satisfy.  All transforms accept a single point ``(q,)`` or a stack
``(n, q)`` and return the matching shape.
"""

from __future__ import annotations

import dataclasses
from typing import NamedTuple

import numpy as np

from .errors import DomainError, OriginError, PoleError

ORIGIN_EPSILON = 1e-300  # reject only genuine underflow, not small radii
POLE_EPSILON = 1e-12  # gap 1 - p_last below which projection is refused
SPHERE_TOLERANCE = 1e-9  # how far off the unit sphere a point may sit
RESIDUAL_FLOOR = 1e-30  # denominator floor for relative residuals
DEDUP_EPSILON = 1e-12  # relative near-duplicate threshold for clouds
CHART_RADIUS = 0.5  # the half-ball chart is defined on |y| <= 1/2
CHART_BOUNDARY_SLACK = 1e-12  # rounding allowance at the chart boundary

_LARGE_RADIUS = 1e150  # beyond this, |x|^2 risks overflow; switch forms


def as_point(x) -> np.ndarray:
    """Validate and return a finite 1-D float64 point."""
    p = np.asarray(x, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise DomainError(f"expected a 1-D point, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DomainError("point has non-finite coordinates")
    return p


def _as_batch(x) -> tuple[np.ndarray, bool]:
    """Return ``(points, was_single)`` with points shaped (n, q)."""
    p = np.asarray(x, dtype=np.float64)
    single = p.ndim == 1
    if single:
        p = p[None, :]
    if p.ndim != 2 or p.shape[1] == 0:
        raise DomainError(f"expected (q,) or (n, q) coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DomainError("non-finite coordinates")
    return p, single


def norms(x) -> np.ndarray | float:
    """Euclidean norms, safe against overflow and underflow of |x|^2."""
    p, single = _as_batch(x)
    m = np.max(np.abs(p), axis=1)
    out = np.zeros_like(m)
    nz = m > 0
    if np.any(nz):
        scaled = p[nz] / m[nz, None]
        out[nz] = m[nz] * np.sqrt(np.einsum("ij,ij->i", scaled, scaled))
    return float(out[0]) if single else out


def invert(x) -> np.ndarray:
    """Euclidean inversion x -> x / |x|^2.

    Computed as (x/|x|)/|x| so radii down to 1e-300 and up to 1e300
    survive without overflowing the intermediate square.

    Raises:
        OriginError: if any input radius is below 1e-300.
    """
    p, single = _as_batch(x)
    r = np.max(np.abs(p), axis=1)
    if np.any(r < ORIGIN_EPSILON):
        raise OriginError("inversion is undefined at the origin")
    scaled = p / r[:, None]
    rr = r * np.sqrt(np.einsum("ij,ij->i", scaled, scaled))
    out = (p / rr[:, None]) / rr[:, None]
    return out[0] if single else out


def stereo_embed(x) -> np.ndarray:
    """Inverse stereographic embedding of R^q into S^q minus the pole.

    Maps x to (2x/(1+|x|^2), (|x|^2-1)/(|x|^2+1)).  Defined for every
    finite x; the image approaches the north pole as |x| grows.
    """
    p, single = _as_batch(x)
    n, q = p.shape
    out = np.empty((n, q + 1))
    r = np.asarray(norms(p))
    big = r > _LARGE_RADIUS
    if np.any(~big):
        r2 = r[~big] ** 2
        out[~big, :q] = 2.0 * p[~big] / (1.0 + r2)[:, None]
        out[~big, q] = (r2 - 1.0) / (r2 + 1.0)
    if np.any(big):
        # for huge radii work with t = 1/|x| to dodge |x|^2 overflow
        u = p[big] / r[big, None]
        t = 1.0 / r[big]
        t2 = t * t
        out[big, :q] = u * (2.0 * t / (1.0 + t2))[:, None]
        out[big, q] = (1.0 - t2) / (1.0 + t2)
    return out[0] if single else out


def stereo_project(p) -> np.ndarray:
    """Stereographic projection from S^q minus the pole back to R^q.

    The denominator 1 - p_last is rewritten as |p'|^2 / (1 + p_last) on
    the northern half (p_last > 1/2), where the direct subtraction would
    surrender most of its precision; for a point on the sphere the two
    forms agree exactly.

    Raises:
        DomainError: if the input is off the unit sphere by more than 1e-9.
        PoleError: if 1 - p_last <= 1e-12 (the pole has no preimage).
    """
    pts, single = _as_batch(p)
    if pts.shape[1] < 2:
        raise DomainError("sphere points need at least two coordinates")
    r = np.asarray(norms(pts))
    if np.any(np.abs(r - 1.0) > SPHERE_TOLERANCE):
        raise DomainError("point is not on the unit sphere")
    first = pts[:, :-1]
    t = pts[:, -1]
    gap = 1.0 - t
    north = t > 0.5
    if np.any(north):
        fn = first[north]
        gap[north] = np.einsum("ij,ij->i", fn, fn) / (1.0 + t[north])
    if np.any(gap <= POLE_EPSILON):
        raise PoleError("projection is undefined at the north pole")
    out = first / gap[:, None]
    return out[0] if single else out


def north_pole(q: int) -> np.ndarray:
    """The north pole (0, ..., 0, 1) of S^q as a point of R^(q+1)."""
    p = np.zeros(q + 1)
    p[q] = 1.0
    return p


def _chart_domain(y) -> tuple[np.ndarray, np.ndarray, bool]:
    pts, single = _as_batch(y)
    r = np.asarray(norms(pts))
    if np.any(r > CHART_RADIUS + CHART_BOUNDARY_SLACK):
        raise DomainError("half-ball chart is defined only for |y| <= 1/2")
    return pts, r, single


def pole_chart(y, renormalize: bool = False) -> np.ndarray:
    """Half-ball chart at the north pole, verbatim printed form.

    Maps y in the closed half-ball |y| <= 1/2 to
    (y/(1+|y|^2), (1-|y|)/(1+|y|^2)).  The image is not on the unit
    sphere away from y = 0; pass ``renormalize=True`` to project the
    output radially onto the sphere.  See ``pole_chart_exact`` for the
    variant that lands on the sphere identically and satisfies the
    gluing identity with ``stereo_embed``.
    """
    pts, r, single = _chart_domain(y)
    n, q = pts.shape
    denom = 1.0 + r * r
    out = np.empty((n, q + 1))
    out[:, :q] = pts / denom[:, None]
    out[:, q] = (1.0 - r) / denom
    if renormalize:
        out /= np.asarray(norms(out))[:, None]
    return out[0] if single else out


def pole_chart_exact(y) -> np.ndarray:
    """Half-ball chart at the north pole, sphere-exact form.

    Maps y in the closed half-ball |y| <= 1/2 to
    (2y/(1+|y|^2), (1-|y|^2)/(1+|y|^2)), which lies exactly on the unit
    sphere, sends 0 to the pole and the boundary |y| = 1/2 to the
    latitude 3/5, and satisfies chart(invert(x)) = stereo_embed(x) for
    every |x| >= 2.
    """
    pts, r, single = _chart_domain(y)
    n, q = pts.shape
    r2 = r * r
    denom = 1.0 + r2
    out = np.empty((n, q + 1))
    out[:, :q] = 2.0 * pts / denom[:, None]
    out[:, q] = (1.0 - r2) / denom
    return out[0] if single else out


def inversion_derivative_norm(x, h: float | None = None) -> float:
    """Finite-difference operator norm of the derivative of inversion at x.

    Central differences along an orthonormal frame whose first vector is
    radial; the largest singular value of the assembled Jacobian
    estimates |D invert(x)| = 1/|x|^2.  The step defaults to 1e-6 * |x|
    and must satisfy 0 < h <= 1e-4 * |x|.
    """
    p = as_point(x)
    r = float(np.asarray(norms(p)))
    if r < ORIGIN_EPSILON:
        raise OriginError("derivative of inversion is undefined at the origin")
    if h is None:
        h = 1e-6 * r
    if not 0.0 < h <= 1e-4 * r:
        raise DomainError("step must satisfy 0 < h <= 1e-4 * |x|")
    frame = _radial_frame(p / r)
    cols = [(invert(p + h * v) - invert(p - h * v)) / (2.0 * h) for v in frame.T]
    jac = np.column_stack(cols)
    return float(np.linalg.svd(jac, compute_uv=False)[0])


def _radial_frame(u: np.ndarray) -> np.ndarray:
    """Orthonormal frame with first column u (a unit vector).

    Householder reflection sending e1 to u; near u = e1 the identity
    frame is returned, which is still orthonormal and radial-first.
    """
    q = u.size
    e1 = np.zeros(q)
    e1[0] = 1.0
    w = u - e1
    wn2 = w @ w
    if wn2 < 1e-30:
        return np.eye(q)
    return np.eye(q) - 2.0 * np.outer(w, w) / wn2


class SeparationBounds(NamedTuple):
    """Two-sided bound on |x_far - x| from the radii alone."""

    lower: float
    upper: float
    distance: float
    holds: bool


def separation_bounds(x, x_far) -> SeparationBounds:
    """Sandwich |x_far - x| between radius-ratio multiples of |x_far|.

    With C = |x_far|/|x| - 1 > 0, the distance satisfies
    C/(1+C) * |x_far| <= |x_far - x| <= (2+C)/(1+C) * |x_far|,
    attained by same-direction and opposite-direction collinear pairs.
    ``holds`` allows 1e-12 relative slack so an attained bound is not
    flipped by the final rounding.

    Raises:
        OriginError: if |x| = 0 (no valid C).
        DomainError: if |x_far| <= |x|.
    """
    a = as_point(x)
    b = as_point(x_far)
    if a.size != b.size:
        raise DomainError("points must share a dimension")
    ra = float(np.asarray(norms(a)))
    rb = float(np.asarray(norms(b)))
    if ra < ORIGIN_EPSILON:
        raise OriginError("reference point must be nonzero")
    if rb <= ra:
        raise DomainError("|x_far| must exceed |x|")
    c = rb / ra - 1.0
    lower = c / (1.0 + c) * rb
    upper = (2.0 + c) / (1.0 + c) * rb
    dist = float(np.asarray(norms(b - a)))
    slack = 1e-12 * upper
    holds = (lower - slack) <= dist <= (upper + slack)
    return SeparationBounds(lower, upper, dist, holds)


def inverted_distance_residual(x1, x2) -> float:
    """Relative residual of |i(x1)-i(x2)| = |i(x1)| |i(x2)| |x1-x2|.

    Both sides are computed independently: the left from the inverted
    points, the right from their norms and the original distance.
    """
    a = as_point(x1)
    b = as_point(x2)
    ya = invert(a)
    yb = invert(b)
    big = float(np.asarray(norms(ya - yb)))
    r1 = float(np.asarray(norms(ya)))
    r2 = float(np.asarray(norms(yb)))
    small = float(np.asarray(norms(a - b)))
    return abs(big - r1 * r2 * small) / max(big, RESIDUAL_FLOOR)


def law_of_cosines_residual(x1, x2) -> float:
    """Relative residual of the squared-distance law at the origin.

    With r1 >= r2 the radii, 2*theta in [0, pi] the angle between the
    points (clamped arccos of the normalized dot product), the law reads
    |x1-x2|^2 = (r1-r2)^2 cos^2(theta) + (r1+r2)^2 sin^2(theta).
    Left side from coordinates, right side from radii and angle.
    """
    a = as_point(x1)
    b = as_point(x2)
    if a.size != b.size:
        raise DomainError("points must share a dimension")
    r1 = float(np.asarray(norms(a)))
    r2 = float(np.asarray(norms(b)))
    if r1 < ORIGIN_EPSILON or r2 < ORIGIN_EPSILON:
        raise OriginError("angle at the origin is undefined for a zero radius")
    if r1 < r2:
        a, b, r1, r2 = b, a, r2, r1
    cos_full = float(np.clip((a @ b) / (r1 * r2), -1.0, 1.0))
    theta = np.arccos(cos_full) / 2.0
    rhs = (r1 - r2) ** 2 * np.cos(theta) ** 2 + (r1 + r2) ** 2 * np.sin(theta) ** 2
    e2 = float(np.asarray(norms(a - b))) ** 2
    return abs(e2 - rhs) / max(e2, RESIDUAL_FLOOR)


@dataclasses.dataclass(frozen=True)
class PointCloud:
    """A finite stack of points sharing one ambient dimension.

    ``points`` is an (n, dim) float64 array; rows are points.  Clouds do
    not deduplicate on their own: near-duplicate removal is explicit via
    ``deduplicated`` so that index-paired structures stay aligned.
    """

    points: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise DomainError(f"cloud needs an (n, q) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("cloud has non-finite coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def radii(self) -> np.ndarray:
        return np.asarray(norms(self.points))

    def scaled(self, factor: float) -> "PointCloud":
        if not factor > 0:
            raise DomainError("scale factor must be positive")
        return PointCloud(self.points * factor, self.label)

    def deduplicated(self, epsilon: float = DEDUP_EPSILON) -> tuple["PointCloud", np.ndarray]:
        """Drop later members of near-duplicate pairs.

        Two points collide when |a - b| < epsilon * (1 + max(|a|, |b|)).
        Returns the thinned cloud and the indices kept, in order.
        """
        from scipy.spatial import cKDTree

        pts = self.points
        r = self.radii()
        cutoff = epsilon * (1.0 + float(r.max()))
        keep = np.ones(len(self), dtype=bool)
        if cutoff > 0:
            pairs = cKDTree(pts).query_pairs(cutoff, output_type="ndarray")
            if len(pairs):
                pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
                d = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
                limit = epsilon * (1.0 + np.maximum(r[pairs[:, 0]], r[pairs[:, 1]]))
                for i, j in pairs[d < limit]:
                    if keep[i] and keep[j]:
                        keep[j] = False
        kept = np.flatnonzero(keep)
        return PointCloud(pts[kept], self.label), kept

    def min_relative_separation(self) -> float:
        """Smallest |a-b| / (1 + max(|a|,|b|)) over distinct pairs."""
        pts = self.points
        if len(self) < 2:
            return np.inf
        diffs = pts[:, None, :] - pts[None, :, :]
        d = np.linalg.norm(diffs, axis=2)
        r = self.radii()
        scale = 1.0 + np.maximum(r[:, None], r[None, :])
        ratio = d / scale
        iu = np.triu_indices(len(self), k=1)
        return float(ratio[iu].min())
