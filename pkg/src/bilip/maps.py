"""Sampled and analytic maps.

A SampledMap represents a homeomorphism by index-paired domain/codomain
clouds with origin and unboundedness bookkeeping.  Operations conjugate
a map by inversion, compactify it onto spheres, or restrict it to a
radial shell.  AnalyticMap wraps a closed-form map with an independently
known bi-Lipschitz constant, and the registry collects the oracle family
used throughout the verification suites.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Callable

import numpy as np

from .errors import DomainError, EmptyRestriction, HypothesisError
from .geometry import (
    SPHERE_TOLERANCE,
    PointCloud,
    invert,
    north_pole,
    norms,
    stereo_embed,
)

ORIGIN_GUARD = 1e-9  # radius below which a sample counts as "at the origin"


class Ambient(enum.Enum):
    AFFINE = "Affine"
    SPHERE = "Sphere"


@dataclasses.dataclass(frozen=True)
class SampledMap:
    """A homeomorphism represented by positionally paired samples.

    Row i of ``domain`` maps to row i of ``codomain``.  The flags state
    facts about the underlying map: ``fixes_origin`` requires exactly
    one (0, 0) pair, ``avoids_origin`` requires every domain and
    codomain sample to keep radius >= 1e-9, and ``unbounded_domain`` is
    a declaration about the underlying set, never inferred from the
    sample.  Flag claims are checked against the data on construction.
    """

    domain: PointCloud
    codomain: PointCloud
    fixes_origin: bool = False
    avoids_origin: bool = False
    unbounded_domain: bool = False
    ambient: Ambient = Ambient.AFFINE

    def __post_init__(self) -> None:
        if len(self.domain) != len(self.codomain):
            raise DomainError("domain and codomain must pair by index")
        if len(self.domain) < 2:
            raise DomainError("a sampled map needs at least two pairs")
        if self.ambient is Ambient.SPHERE:
            for cloud in (self.domain, self.codomain):
                if np.max(np.abs(cloud.radii() - 1.0)) > SPHERE_TOLERANCE:
                    raise DomainError("sphere-ambient samples must lie on the unit sphere")
        if self.fixes_origin and self.avoids_origin:
            raise HypothesisError("fixes_origin and avoids_origin are mutually exclusive")
        if self.fixes_origin:
            zero = np.flatnonzero(self.domain.radii() == 0.0)
            if len(zero) != 1:
                raise HypothesisError("fixes_origin requires exactly one domain sample at 0")
            if self.codomain.radii()[zero[0]] != 0.0:
                raise HypothesisError("fixes_origin requires the origin to map to 0")
        if self.avoids_origin:
            low = min(float(self.domain.radii().min()), float(self.codomain.radii().min()))
            if low < ORIGIN_GUARD:
                raise HypothesisError("avoids_origin requires all samples to keep radius >= 1e-9")

    @property
    def n_pairs(self) -> int:
        return len(self.domain)

    @property
    def dim_in(self) -> int:
        return self.domain.dim

    @property
    def dim_out(self) -> int:
        return self.codomain.dim

    def origin_index(self) -> int | None:
        """Index of the exact-zero domain sample, if present."""
        zero = np.flatnonzero(self.domain.radii() == 0.0)
        return int(zero[0]) if len(zero) else None


def validate_origin_hypothesis(m: SampledMap) -> None:
    """Enforce the either-or origin hypothesis that inversion needs.

    An affine map must either fix the origin (one (0,0) pair) or avoid
    it entirely; anything else leaves the conjugation by inversion
    undefined at some sample.
    """
    if m.ambient is not Ambient.AFFINE:
        raise DomainError("origin hypothesis applies to affine-ambient maps")
    if m.fixes_origin == m.avoids_origin:
        raise HypothesisError(
            "map must either fix the origin or avoid it (exactly one flag set)"
        )


def invert_map(m: SampledMap) -> SampledMap:
    """Conjugate a sampled map by inversion on both sides.

    Every nonzero pair (x, y) becomes (invert(x), invert(y)).  An
    origin pair is dropped (inversion is undefined there); when the
    domain is declared unbounded a (0, 0) pair is appended, encoding the
    bi-Lipschitz extension at 0.  Flags exchange roles: the result fixes
    the origin iff the input was unbounded, and is unbounded iff the
    input fixed the origin.

    Raises:
        HypothesisError: if the origin hypothesis fails, or a nonzero
            sample maps to the origin.
    """
    validate_origin_hypothesis(m)
    dom = m.domain.points
    cod = m.codomain.points
    keep = np.ones(m.n_pairs, dtype=bool)
    if m.fixes_origin:
        keep[m.origin_index()] = False
    dom = dom[keep]
    cod = cod[keep]
    if np.any(np.asarray(norms(cod)) == 0.0):
        raise HypothesisError("a nonzero sample maps to the origin; inversion undefined")
    new_dom = invert(dom)
    new_cod = invert(cod)
    if m.unbounded_domain:
        new_dom = np.vstack([new_dom, np.zeros(m.dim_in)])
        new_cod = np.vstack([new_cod, np.zeros(m.dim_out)])
    if len(new_dom) < 2:
        raise DomainError("fewer than two pairs survive inversion")
    label = f"inverted {m.domain.label}".strip()
    return SampledMap(
        domain=PointCloud(new_dom, label),
        codomain=PointCloud(new_cod, label),
        fixes_origin=m.unbounded_domain,
        avoids_origin=not m.unbounded_domain,
        unbounded_domain=m.fixes_origin,
        ambient=Ambient.AFFINE,
    )


def compactify_map(m: SampledMap) -> SampledMap:
    """Push a sampled map onto spheres via the stereographic embedding.

    Each pair (x, y) becomes (stereo_embed(x), stereo_embed(y)); when
    the domain is declared unbounded the pole pair (N, N) is appended,
    extending the map over the point at infinity.  The result keeps
    ``unbounded_domain`` as a record of whether the pole pair is there.
    """
    if m.ambient is not Ambient.AFFINE:
        raise DomainError("only affine-ambient maps can be compactified")
    new_dom = stereo_embed(m.domain.points)
    new_cod = stereo_embed(m.codomain.points)
    if m.unbounded_domain:
        new_dom = np.vstack([new_dom, north_pole(m.dim_in)])
        new_cod = np.vstack([new_cod, north_pole(m.dim_out)])
    label = f"compactified {m.domain.label}".strip()
    return SampledMap(
        domain=PointCloud(new_dom, label),
        codomain=PointCloud(new_cod, label),
        fixes_origin=False,
        avoids_origin=False,
        unbounded_domain=m.unbounded_domain,
        ambient=Ambient.SPHERE,
    )


def restrict_map(m: SampledMap, r_min: float, r_max: float) -> SampledMap:
    """Keep the pairs whose domain radius lies in [r_min, r_max).

    The half-open convention makes adjacent shells partition a map;
    r_max = inf closes the upper end.  Flags are recomputed from the
    surviving samples, except ``unbounded_domain`` which survives only
    an unbounded restriction.

    Raises:
        EmptyRestriction: if fewer than two pairs survive.
    """
    if m.ambient is not Ambient.AFFINE:
        raise DomainError("shell restriction applies to affine-ambient maps")
    if not 0.0 <= r_min < r_max:
        raise DomainError("need 0 <= r_min < r_max")
    radii = m.domain.radii()
    if np.isinf(r_max):
        keep = radii >= r_min
    else:
        keep = (radii >= r_min) & (radii < r_max)
    if int(keep.sum()) < 2:
        raise EmptyRestriction(f"shell [{r_min}, {r_max}) keeps {int(keep.sum())} pairs")
    dom = m.domain.points[keep]
    cod = m.codomain.points[keep]
    dom_radii = radii[keep]
    cod_radii = np.asarray(norms(cod))
    zero = np.flatnonzero(dom_radii == 0.0)
    fixes = len(zero) == 1 and cod_radii[zero[0]] == 0.0
    avoids = not fixes and min(dom_radii.min(), cod_radii.min()) >= ORIGIN_GUARD
    label = m.domain.label
    return SampledMap(
        domain=PointCloud(dom, label),
        codomain=PointCloud(cod, label),
        fixes_origin=fixes,
        avoids_origin=bool(avoids),
        unbounded_domain=m.unbounded_domain and bool(np.isinf(r_max)),
        ambient=Ambient.AFFINE,
    )


@dataclasses.dataclass(frozen=True)
class AnalyticMap:
    """A closed-form map with independently known distortion data.

    ``func`` acts on a batch (n, dim_in) and returns (n, dim_out).
    ``bilip_constant`` is the true bi-Lipschitz constant on
    ``domain_radii`` when known, None otherwise; ``bilipschitz`` is
    False for deliberate non-examples.  ``singular_dirs`` are unit
    directions attaining the extremal ratios (when known), used for
    direction-stratified sampling.
    """

    name: str
    dim_in: int
    dim_out: int
    func: Callable[[np.ndarray], np.ndarray]
    bilip_constant: float | None
    fixes_origin: bool
    bilipschitz: bool = True
    domain_radii: tuple[float, float] = (0.0, np.inf)
    singular_dirs: tuple = ()


@dataclasses.dataclass(frozen=True)
class SamplerConfig:
    """Deterministic sampling plan: log-uniform radii, uniform directions.

    ``include_origin`` appends the (0, 0) pair for origin-fixing maps;
    ``declare_unbounded`` marks the sampled map's underlying domain as
    unbounded (an explicit declaration, never inferred);
    ``singular_probes`` appends +/- singular-direction rows so linear
    maps attain their extremal ratios exactly.
    """

    count: int
    r_min: float
    r_max: float
    seed: int = 0
    include_origin: bool = False
    declare_unbounded: bool = False
    singular_probes: bool = False

    def __post_init__(self) -> None:
        if self.count < 2:
            raise DomainError("need at least two samples")
        if not 0.0 < self.r_min <= self.r_max or not np.isfinite(self.r_max):
            raise DomainError("need 0 < r_min <= r_max < inf")


def _unit_directions(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    dirs = rng.normal(size=(n, dim))
    lengths = np.linalg.norm(dirs, axis=1)
    while np.any(lengths < 1e-12):
        bad = lengths < 1e-12
        dirs[bad] = rng.normal(size=(int(bad.sum()), dim))
        lengths = np.linalg.norm(dirs, axis=1)
    return dirs / lengths[:, None]


def sample_analytic(f: AnalyticMap, config: SamplerConfig) -> SampledMap:
    """Sample an analytic map into a SampledMap, deterministically.

    Radii are log-uniform on [r_min, r_max] intersected with the map's
    own radial domain; directions are uniform on the sphere.  The same
    seed and config reproduce the clouds bit for bit.
    """
    lo = max(config.r_min, f.domain_radii[0])
    hi = min(config.r_max, f.domain_radii[1])
    if lo <= 0.0 or not lo <= hi:
        raise DomainError(
            f"radius range [{config.r_min}, {config.r_max}] misses the domain of {f.name}"
        )
    rng = np.random.default_rng(config.seed)
    dirs = _unit_directions(rng, config.count, f.dim_in)
    radii = np.exp(rng.uniform(np.log(lo), np.log(hi), size=config.count))
    dom = dirs * radii[:, None]
    if config.singular_probes and f.singular_dirs:
        probe_r = float(np.sqrt(lo * hi))
        probes = []
        for u in f.singular_dirs:
            probes.append(probe_r * np.asarray(u, dtype=np.float64))
            probes.append(-probe_r * np.asarray(u, dtype=np.float64))
        dom = np.vstack([dom, np.array(probes)])
    with_origin = config.include_origin and f.fixes_origin
    if with_origin:
        dom = np.vstack([dom, np.zeros(f.dim_in)])
    cod = np.asarray(f.func(dom), dtype=np.float64)
    if cod.shape != (len(dom), f.dim_out) or not np.all(np.isfinite(cod)):
        raise DomainError(f"evaluator of {f.name} returned a malformed image")
    dom_radii = np.asarray(norms(dom))
    cod_radii = np.asarray(norms(cod))
    avoids = not with_origin and min(dom_radii.min(), cod_radii.min()) >= ORIGIN_GUARD
    return SampledMap(
        domain=PointCloud(dom, f.name),
        codomain=PointCloud(cod, f"{f.name} image"),
        fixes_origin=with_origin,
        avoids_origin=bool(avoids),
        unbounded_domain=config.declare_unbounded,
        ambient=Ambient.AFFINE,
    )


def linear_analytic(name: str, matrix) -> AnalyticMap:
    """Wrap a square matrix; the constant comes from an SVD oracle.

    The bi-Lipschitz constant of x -> Mx is max(s_max, 1/s_min); the
    top/bottom right-singular directions are kept as attainment probes.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("linear registry maps must be square")
    _, s, vt = np.linalg.svd(m)
    if s[-1] <= 0.0:
        raise DomainError("singular matrix is not bi-Lipschitz")
    constant = float(max(s[0], 1.0 / s[-1]))
    return AnalyticMap(
        name=name,
        dim_in=m.shape[1],
        dim_out=m.shape[0],
        func=lambda pts, _m=m: pts @ _m.T,
        bilip_constant=constant,
        fixes_origin=True,
        singular_dirs=(vt[0].copy(), vt[-1].copy()),
    )


def scaling_analytic(factor: float, dim: int = 2) -> AnalyticMap:
    if not factor > 0.0:
        raise DomainError("scaling factor must be positive")
    return AnalyticMap(
        name=f"scale-{factor:g}",
        dim_in=dim,
        dim_out=dim,
        func=lambda pts, _f=factor: _f * pts,
        bilip_constant=float(max(factor, 1.0 / factor)),
        fixes_origin=True,
    )


def radial_power_analytic(
    exponent: float, r_lo: float, r_hi: float, dim: int = 2
) -> AnalyticMap:
    """x -> |x|^(t-1) x on the shell r_lo <= |x| <= r_hi, t >= 1.

    On the shell the chord ratio is a mediant of the radial difference
    quotient (<= t r_hi^(t-1)) and (a^t+b^t)/(a+b) (<= max^(t-1)), so
    the constant t * r_hi^(t-1) is attained radially at the outer edge
    and the contraction side never drops below 1.
    """
    if exponent < 1.0:
        raise DomainError("shell constant formula assumes exponent >= 1")
    if not 0.0 < r_lo <= r_hi:
        raise DomainError("need 0 < r_lo <= r_hi")

    def func(pts: np.ndarray, _t=exponent) -> np.ndarray:
        r = np.asarray(norms(pts))
        return np.power(r, _t - 1.0)[:, None] * pts

    return AnalyticMap(
        name=f"radial-shell-{exponent:g}",
        dim_in=dim,
        dim_out=dim,
        func=func,
        bilip_constant=float(exponent * r_hi ** (exponent - 1.0)),
        fixes_origin=False,
        domain_radii=(r_lo, r_hi),
    )


def radial_square_analytic(dim: int = 2) -> AnalyticMap:
    """The non-example x -> |x| x on [0, 1]: not bi-Lipschitz near 0."""

    def func(pts: np.ndarray) -> np.ndarray:
        return np.asarray(norms(pts))[:, None] * pts

    return AnalyticMap(
        name="radial-square",
        dim_in=dim,
        dim_out=dim,
        func=func,
        bilip_constant=None,
        fixes_origin=True,
        bilipschitz=False,
        domain_radii=(0.0, 1.0),
    )


def registry() -> dict[str, AnalyticMap]:
    """The oracle family: maps with independently known constants.

    Contains the identity, scalings by 1/2, 2, 10, a diagonal linear
    map, the unit shear, two radial shell maps, and the flagged
    non-example.  Constants for the linear members come from the SVD
    oracle in ``linear_analytic``.
    """
    identity = AnalyticMap(
        name="identity",
        dim_in=2,
        dim_out=2,
        func=lambda pts: pts.copy(),
        bilip_constant=1.0,
        fixes_origin=True,
    )
    members = [
        identity,
        scaling_analytic(0.5),
        scaling_analytic(2.0),
        scaling_analytic(10.0),
        linear_analytic("diag-1-3", [[1.0, 0.0], [0.0, 3.0]]),
        linear_analytic("shear", [[1.0, 0.0], [0.5, 1.0]]),
        radial_power_analytic(1.0, 1.0, 2.0),
        radial_power_analytic(1.25, 1.0, 2.0),
        radial_square_analytic(),
    ]
    return {f.name: f for f in members}
