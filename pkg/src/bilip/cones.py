"""Asymptotic direction sets, links, cones, and the inversion exchange.

Directions of samples near the origin approximate the asymptotic set at
0; directions of the outermost samples approximate the one at infinity.
Inversion preserves directions, so the two exchange under it; the
residuals here measure exactly that.  All comparisons are angular.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InsufficientPoints
from .geometry import PointCloud, invert, norms

MAX_DIRECTIONS = 10**4  # brute-force Hausdorff cap per set
_BAND_SLACK = 1e-15  # absorbs normalization rounding at band edges


class ConeKind(enum.Enum):
    AT_ORIGIN = "AtOrigin"
    AT_INFINITY = "AtInfinity"


class BandConvention(enum.Enum):
    LOG = "log"  # |log|x| - log R| <= band; exactly inversion-equivariant
    LINEAR = "linear"  # ||x| - R| <= band * R


@dataclasses.dataclass(frozen=True)
class ShellConfig:
    """Fractional shell selection: a share of the points by radius rank.

    ``fraction`` of the usable points (at least ``min_points``) are
    taken from the inner or outer end of the radius order.  Rank-based
    selection is scale-free and exactly inversion-equivariant whenever
    radii are distinct, because r -> 1/r reverses the order.
    """

    fraction: float = 0.1
    min_points: int = 8

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction <= 1.0:
            raise DomainError("shell fraction must lie in (0, 1]")
        if self.min_points < 2:
            raise DomainError("shell needs at least two points")


@dataclasses.dataclass(frozen=True)
class DirectionSet:
    """Unit vectors with the radii of the samples that produced them."""

    directions: np.ndarray
    source_radii: np.ndarray
    kind: ConeKind

    def __post_init__(self) -> None:
        dirs = np.asarray(self.directions, dtype=np.float64)
        radii = np.asarray(self.source_radii, dtype=np.float64)
        if dirs.ndim != 2 or len(dirs) != len(radii):
            raise DomainError("directions and source radii must align")
        if len(dirs) and np.max(np.abs(np.asarray(norms(dirs)) - 1.0)) > 1e-12:
            raise DomainError("directions must be unit vectors")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "source_radii", radii)

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def dim(self) -> int:
        return int(self.directions.shape[1])


@dataclasses.dataclass(frozen=True)
class LinkSlice:
    """The samples lying in a radial band around one radius.

    ``indices`` point back into the source cloud, so slice identities
    (such as the exchange with inversion) are testable as set equalities.
    """

    points: PointCloud
    radius: float
    band: float
    convention: BandConvention
    indices: np.ndarray

    def __post_init__(self) -> None:
        r = self.points.radii()
        if self.convention is BandConvention.LOG:
            off = np.abs(np.log(r) - math.log(self.radius))
            if np.max(off) > self.band + _BAND_SLACK:
                raise DomainError("slice member falls outside its log band")
        else:
            if np.max(np.abs(r - self.radius)) > self.band * self.radius + _BAND_SLACK * self.radius:
                raise DomainError("slice member falls outside its band")


class ExchangeResiduals(NamedTuple):
    infinity_to_origin: float
    origin_to_infinity: float


def asymptotic_directions(
    cloud: PointCloud, kind: ConeKind, shell: ShellConfig = ShellConfig()
) -> DirectionSet:
    """Directions of the innermost or outermost fraction of a cloud.

    Exact-zero points are skipped.  Selection is by radius rank with a
    stable sort, so equal radii keep their index order and scaling the
    cloud never changes the selection.

    Raises:
        InsufficientPoints: if fewer than 2 usable points exist.
    """
    r = cloud.radii()
    usable = np.flatnonzero(r > 0.0)
    if len(usable) < 2:
        raise InsufficientPoints("need at least two nonzero points for directions")
    order = usable[np.argsort(r[usable], kind="stable")]
    k = min(len(order), max(shell.min_points, math.ceil(shell.fraction * len(order))))
    chosen = order[:k] if kind is ConeKind.AT_ORIGIN else order[-k:]
    pts = cloud.points[chosen]
    radii = r[chosen]
    return DirectionSet(pts / radii[:, None], radii, kind)


def link(
    cloud: PointCloud,
    radius: float,
    band: float,
    convention: BandConvention = BandConvention.LOG,
) -> LinkSlice:
    """The slice of a cloud in a radial band around ``radius``.

    The default symmetrized log band |log|x| - log R| <= band is mapped
    exactly to itself around 1/R by inversion; the linear convention
    ||x| - R| <= band * R stays available.  A 1e-15 slack absorbs
    normalization rounding so band = 0 keeps exact-radius points.

    Raises:
        InsufficientPoints: if the band is empty.
    """
    if not radius > 0.0:
        raise DomainError("link radius must be positive")
    if not 0.0 <= band < 1.0:
        raise DomainError("band must lie in [0, 1)")
    r = cloud.radii()
    if convention is BandConvention.LOG:
        with np.errstate(divide="ignore"):
            off = np.abs(np.log(r) - math.log(radius))
        keep = np.flatnonzero((r > 0.0) & (off <= band + _BAND_SLACK))
    else:
        keep = np.flatnonzero(np.abs(r - radius) <= band * radius + _BAND_SLACK * radius)
    if len(keep) == 0:
        raise InsufficientPoints(f"no points in the band around radius {radius}")
    return LinkSlice(
        points=PointCloud(cloud.points[keep], cloud.label),
        radius=float(radius),
        band=float(band),
        convention=convention,
        indices=keep,
    )


def cone_over(dirs: DirectionSet, radii) -> PointCloud:
    """The product set {t * u}: every direction at every radius.

    A zero radius contributes the origin once, regardless of how many
    directions there are.
    """
    rr = np.asarray(radii, dtype=np.float64)
    if rr.ndim != 1 or rr.size == 0:
        raise DomainError("radii must be a non-empty 1-D list")
    if np.any(rr < 0.0) or not np.all(np.isfinite(rr)):
        raise DomainError("radii must be finite and non-negative")
    if len(dirs) == 0:
        raise InsufficientPoints("no directions to cone over")
    rows = []
    if np.any(rr == 0.0):
        rows.append(np.zeros((1, dirs.dim)))
    for t in rr[rr > 0.0]:
        rows.append(t * dirs.directions)
    return PointCloud(np.vstack(rows), "cone")


def angular_hausdorff(a: DirectionSet, b: DirectionSet) -> float:
    """Symmetric sup-inf of angles between two direction sets, brute force.

    Angles come from chord lengths, angle = 2 asin(|u - v| / 2), which is
    exact for unit vectors and keeps full precision near zero where the
    arccos of a dot product bottoms out around 1e-8.  Sets are capped at
    10^4 directions; comparison is blocked to bound memory.
    """
    if len(a) == 0 or len(b) == 0:
        raise InsufficientPoints("cannot compare empty direction sets")
    if a.dim != b.dim:
        raise DomainError("direction sets must share a dimension")
    if len(a) > MAX_DIRECTIONS or len(b) > MAX_DIRECTIONS:
        raise DomainError(f"direction sets are capped at {MAX_DIRECTIONS} members")
    return max(_directed(a.directions, b.directions), _directed(b.directions, a.directions))


def _directed(u: np.ndarray, v: np.ndarray) -> float:
    worst = 0.0
    step = max(1, (2**18) // max(1, len(v)))  # bounds the difference block
    for start in range(0, len(u), step):
        diff = u[start : start + step, None, :] - v[None, :, :]
        chords = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        nearest = np.minimum(chords.min(axis=1), 2.0)
        worst = max(worst, float(np.max(2.0 * np.arcsin(nearest / 2.0))))
    return worst


def verify_cone_exchange(
    cloud: PointCloud, shell: ShellConfig = ShellConfig()
) -> ExchangeResiduals:
    """Residuals of the exchange of asymptotic sets under inversion.

    The directions at infinity of a cloud must match the directions at
    the origin of its inversion, and vice versa; since inversion
    preserves directions exactly, matched rank shells drive both
    residuals to roundoff.
    """
    r = cloud.radii()
    nonzero = cloud.points[r > 0.0]
    if len(nonzero) < 2:
        raise InsufficientPoints("need at least two nonzero points")
    inverted = PointCloud(invert(nonzero), cloud.label)
    inf_dirs = asymptotic_directions(cloud, ConeKind.AT_INFINITY, shell)
    origin_of_inv = asymptotic_directions(inverted, ConeKind.AT_ORIGIN, shell)
    origin_dirs = asymptotic_directions(cloud, ConeKind.AT_ORIGIN, shell)
    inf_of_inv = asymptotic_directions(inverted, ConeKind.AT_INFINITY, shell)
    return ExchangeResiduals(
        infinity_to_origin=angular_hausdorff(inf_dirs, origin_of_inv),
        origin_to_infinity=angular_hausdorff(origin_dirs, inf_of_inv),
    )


def compare_cones(
    cloud_a: PointCloud,
    cloud_b: PointCloud,
    kind: ConeKind,
    shell: ShellConfig = ShellConfig(),
) -> float:
    """Angular Hausdorff distance between two clouds' asymptotic sets."""
    if cloud_a.dim != cloud_b.dim:
        raise DomainError("clouds must share an ambient dimension")
    return angular_hausdorff(
        asymptotic_directions(cloud_a, kind, shell),
        asymptotic_directions(cloud_b, kind, shell),
    )
