"""Numerical toolkit for Euclidean inversion, stereographic
compactification, and bi-Lipschitz distortion of sampled maps.

The submodules split along what they act on:

* ``geometry``: pointwise transforms and identities (inversion, the
  sphere embedding, pole charts, separation bounds).
* ``maps``: sampled and closed-form maps, the origin hypothesis,
  conjugation by inversion, compactification, the example registry.
* ``distortion``: empirical bi-Lipschitz constants and the cubed-bound
  check for inverted maps.
* ``cones``: asymptotic directions, links, cones, and the exchange of
  the two cone types under inversion.
* ``serialize``: CSV/JSON persistence with exact float round trips.
* ``fixtures``: deterministic point clouds and sampled registry maps.
* ``verify``: named check suites used by the command line.

The most commonly used names are re-exported here.
"""

from .cones import (
    BandConvention,
    ConeKind,
    DirectionSet,
    ExchangeResiduals,
    LinkSlice,
    ShellConfig,
    angular_hausdorff,
    asymptotic_directions,
    compare_cones,
    cone_over,
    link,
    verify_cone_exchange,
)
from .distortion import (
    AllPairs,
    CubeBoundResult,
    DistortionReport,
    RadialReport,
    SeededRandom,
    compare_compactified,
    estimate_bilip,
    radial_comparability,
    verify_cube_bound,
)
from .errors import (
    BilipError,
    DegenerateMap,
    DomainError,
    EmptyRestriction,
    HypothesisError,
    InsufficientPoints,
    OriginError,
    ParseError,
    PoleError,
)
from .geometry import (
    PointCloud,
    SeparationBounds,
    inversion_derivative_norm,
    invert,
    inverted_distance_residual,
    law_of_cosines_residual,
    norms,
    north_pole,
    pole_chart,
    pole_chart_exact,
    separation_bounds,
    stereo_embed,
    stereo_project,
)
from .maps import (
    Ambient,
    AnalyticMap,
    SampledMap,
    SamplerConfig,
    compactify_map,
    invert_map,
    registry,
    restrict_map,
    sample_analytic,
    validate_origin_hypothesis,
)
from .serialize import dumps_report, load_cloud, load_map, save_cloud, save_map

__version__ = "0.1.0"

__all__ = [
    "Ambient",
    "AllPairs",
    "AnalyticMap",
    "BandConvention",
    "BilipError",
    "ConeKind",
    "CubeBoundResult",
    "DegenerateMap",
    "DirectionSet",
    "DistortionReport",
    "DomainError",
    "EmptyRestriction",
    "ExchangeResiduals",
    "HypothesisError",
    "InsufficientPoints",
    "LinkSlice",
    "OriginError",
    "ParseError",
    "PointCloud",
    "PoleError",
    "RadialReport",
    "SampledMap",
    "SamplerConfig",
    "SeededRandom",
    "SeparationBounds",
    "ShellConfig",
    "angular_hausdorff",
    "asymptotic_directions",
    "compactify_map",
    "compare_compactified",
    "compare_cones",
    "cone_over",
    "dumps_report",
    "estimate_bilip",
    "inversion_derivative_norm",
    "invert",
    "invert_map",
    "inverted_distance_residual",
    "law_of_cosines_residual",
    "link",
    "load_cloud",
    "load_map",
    "norms",
    "north_pole",
    "pole_chart",
    "pole_chart_exact",
    "radial_comparability",
    "registry",
    "restrict_map",
    "sample_analytic",
    "save_cloud",
    "save_map",
    "separation_bounds",
    "stereo_embed",
    "stereo_project",
    "validate_origin_hypothesis",
    "verify_cone_exchange",
    "verify_cube_bound",
]
