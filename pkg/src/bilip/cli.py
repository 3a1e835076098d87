"""Command-line front door.

Artifact commands (invert, compactify, generate) write CSV files and
print a small JSON report to stdout; report commands (distortion,
cones, verify) print their JSON report to stdout or write it to
--output.  Diagnostics go to stderr.  Every randomized behavior is a
pure function of --seed, so repeated invocations with equal flags
produce byte-identical output.

Exit codes: 0 success, 1 failed verification assertion, 2 parse or
usage error, 3 origin-hypothesis violation, 4 degenerate data.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fixtures, verify
from .cones import ConeKind, ShellConfig, asymptotic_directions, link, verify_cone_exchange
from .distortion import AllPairs, SeededRandom, estimate_bilip
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
from .geometry import PointCloud, invert
from .maps import SamplerConfig, compactify_map, invert_map, restrict_map, sample_analytic, scaling_analytic
from .serialize import dumps_report, load_cloud, load_map, save_cloud, save_map, sidecar_path

USAGE_EXIT = 2
HYPOTHESIS_EXIT = 3
DEGENERATE_EXIT = 4


def _shell_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"shell {text!r} is not R_MIN:R_MAX")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"shell {text!r} holds non-numeric bounds")
    if not 0.0 < lo < hi:
        raise argparse.ArgumentTypeError(f"shell {text!r} needs 0 < R_MIN < R_MAX")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilip",
        description="Transforms, distortion estimates, and cone checks for sampled maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invert", help="conjugate a map (or push a cloud) through inversion")
    p.add_argument("input")
    p.add_argument("--output", required=True, help="path for the inverted CSV")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("compactify", help="push a sampled map onto spheres")
    p.add_argument("input")
    p.add_argument("--output", required=True, help="path for the compactified CSV")
    p.set_defaults(func=cmd_compactify)

    p = sub.add_parser("distortion", help="estimate bi-Lipschitz constants of a map file")
    p.add_argument("input")
    p.add_argument("--strategy", choices=("all", "random"), default="all")
    p.add_argument("--pairs", type=int, default=None, help="random-strategy sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shell", type=_shell_range, default=None, metavar="R_MIN:R_MAX")
    p.add_argument("--output", default=None, help="report path (stdout when absent)")
    p.set_defaults(func=cmd_distortion)

    p = sub.add_parser("cones", help="asymptotic directions and the inversion exchange")
    p.add_argument("input")
    p.add_argument("--fraction", type=float, default=0.1)
    p.add_argument("--band", type=float, default=None, help="log half-width for a link slice")
    p.add_argument("--shell", type=_shell_range, default=None, metavar="R_MIN:R_MAX",
                   help="link radius range; the slice sits at its geometric mean")
    p.add_argument("--directions", default=None, help="write AtInfinity directions as cloud CSV")
    p.add_argument("--output", default=None, help="report path (stdout when absent)")
    p.set_defaults(func=cmd_cones)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=("all",) + verify.SUITE_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=2000, help="pair count for the identity sweeps")
    p.add_argument("--tolerance", type=float, default=None, help="override the residual gate")
    p.add_argument("--renormalize-beta", action="store_true",
                   help="gate the renormalized near-pole chart instead of only reporting it")
    p.add_argument("--output", default=None, help="report path (stdout when absent)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a deterministic fixture")
    p.add_argument("fixture", help="ray | shifted-line | spiral | scaling | non-example | registry name")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="scale_factor", type=float, default=None,
                   help="factor for the scaling fixture")
    p.add_argument("--tmax", type=float, default=1000.0, help="largest parameter of the shifted line")
    p.add_argument("--shell", type=_shell_range, default=(1e-2, 1e2), metavar="R_MIN:R_MAX")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)
    return parser


def _is_map_file(path: str) -> bool:
    return sidecar_path(path).exists()


def cmd_invert(args) -> tuple[dict, int]:
    if _is_map_file(args.input):
        result = invert_map(load_map(args.input))
        save_map(result, args.output)
        payload = {
            "command": "invert",
            "kind": "map",
            "input": args.input,
            "written": args.output,
            "sidecar": str(sidecar_path(args.output)),
            "pairs": result.n_pairs,
        }
    else:
        cloud = load_cloud(args.input)
        result = PointCloud(invert(cloud.points), cloud.label)
        save_cloud(result, args.output)
        payload = {
            "command": "invert",
            "kind": "cloud",
            "input": args.input,
            "written": args.output,
            "points": len(result),
        }
    return payload, 0


def cmd_compactify(args) -> tuple[dict, int]:
    if not _is_map_file(args.input):
        raise ParseError(f"{args.input} has no sidecar; compactify needs a map file")
    result = compactify_map(load_map(args.input))
    save_map(result, args.output)
    payload = {
        "command": "compactify",
        "input": args.input,
        "written": args.output,
        "sidecar": str(sidecar_path(args.output)),
        "pairs": result.n_pairs,
        "pole_pair": result.unbounded_domain,
    }
    return payload, 0


def cmd_distortion(args) -> tuple[dict, int]:
    m = load_map(args.input)
    shell_text = None
    if args.shell is not None:
        lo, hi = args.shell
        m = restrict_map(m, lo, hi)
        shell_text = f"{lo:g}:{hi:g}"
    if args.strategy == "all":
        strategy = AllPairs()
    else:
        strategy = SeededRandom(samples=args.pairs or 10**6, seed=args.seed)
    report = estimate_bilip(m, strategy)
    payload = {
        "command": "distortion",
        "input": args.input,
        "L_expand": report.l_expand,
        "L_contract": report.l_contract,
        "bilip_constant": report.bilip_constant,
        "witnesses": {
            "expand": list(report.witness_expand),
            "contract": list(report.witness_contract),
        },
        "pairs_evaluated": report.pairs_evaluated,
        "pairs_skipped": report.pairs_skipped,
        "strategy": args.strategy,
        "shell": shell_text,
    }
    return payload, 0


def cmd_cones(args) -> tuple[dict, int]:
    cloud = load_cloud(args.input)
    shell = ShellConfig(fraction=args.fraction)
    exchange = verify_cone_exchange(cloud, shell)
    at_origin = asymptotic_directions(cloud, ConeKind.AT_ORIGIN, shell)
    at_infinity = asymptotic_directions(cloud, ConeKind.AT_INFINITY, shell)
    payload = {
        "command": "cones",
        "input": args.input,
        "fraction": args.fraction,
        "at_origin": {
            "count": len(at_origin),
            "radius_min": float(at_origin.source_radii.min()),
            "radius_max": float(at_origin.source_radii.max()),
        },
        "at_infinity": {
            "count": len(at_infinity),
            "radius_min": float(at_infinity.source_radii.min()),
            "radius_max": float(at_infinity.source_radii.max()),
        },
        "exchange": {
            "infinity_to_origin": exchange.infinity_to_origin,
            "origin_to_infinity": exchange.origin_to_infinity,
        },
    }
    if args.band is not None:
        if args.shell is None:
            raise ParseError("--band needs --shell to place the link slice")
        lo, hi = args.shell
        radius = float(np.sqrt(lo * hi))
        slice_ = link(cloud, radius, args.band)
        payload["link"] = {
            "radius": radius,
            "band": args.band,
            "count": len(slice_.indices),
        }
    if args.directions is not None:
        save_cloud(PointCloud(at_infinity.directions, "directions"), args.directions)
        payload["directions_written"] = args.directions
    return payload, 0


def cmd_verify(args) -> tuple[dict, int]:
    names = verify.SUITE_NAMES if args.suite == "all" else (args.suite,)
    suites = []
    for name in names:
        kwargs = {}
        if name == "identities":
            kwargs["pairs"] = args.pairs
            kwargs["gate_renormalized_chart"] = args.renormalize_beta
            if args.tolerance is not None:
                kwargs["tolerance"] = args.tolerance
        elif args.tolerance is not None and name in ("cube-bound", "compactify-iff", "cone-exchange"):
            kwargs["tolerance"] = args.tolerance
        suites.append(verify.run_suite(name, seed=args.seed, **kwargs))
    passed = all(s["passed"] for s in suites)
    payload = {"command": "verify", "passed": passed, "suites": suites}
    if not passed:
        first = next(
            c["name"]
            for s in suites
            for c in s["checks"]
            if c["tolerance"] is not None and not c["passed"]
        )
        print(f"first failed check: {first}", file=sys.stderr)
    return payload, 0 if passed else 1


def cmd_generate(args) -> tuple[dict, int]:
    name = args.fixture
    lo, hi = args.shell
    if name in fixtures.CLOUD_KINDS:
        if name == "shifted-line":
            cloud = fixtures.shifted_line(count=args.n, t_min=max(lo, 1.0), t_max=args.tmax)
        else:
            cloud = fixtures.cloud(name, dim=args.dim, count=args.n, seed=args.seed,
                                   r_min=lo, r_max=hi)
        save_cloud(cloud, args.output)
        return {
            "command": "generate",
            "fixture": name,
            "written": args.output,
            "points": len(cloud),
        }, 0
    if name == "scaling":
        if args.scale_factor is None:
            raise ParseError("generate scaling needs --lambda")
        f = scaling_analytic(args.scale_factor, dim=args.dim)
        config = SamplerConfig(
            count=args.n, r_min=lo, r_max=hi, seed=args.seed,
            include_origin=True, declare_unbounded=True, singular_probes=True,
        )
        m = sample_analytic(f, config)
    elif name == "non-example":
        m = fixtures.map_samples("radial-square", count=args.n, seed=args.seed,
                                 r_min=lo, r_max=hi)
    else:
        m = fixtures.map_samples(name, count=args.n, seed=args.seed, r_min=lo, r_max=hi)
    save_map(m, args.output)
    return {
        "command": "generate",
        "fixture": name,
        "written": args.output,
        "sidecar": str(sidecar_path(args.output)),
        "pairs": m.n_pairs,
    }, 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (HypothesisError, OriginError, PoleError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return HYPOTHESIS_EXIT
    except (DegenerateMap, EmptyRestriction, InsufficientPoints) as exc:
        print(f"degenerate data: {exc}", file=sys.stderr)
        return DEGENERATE_EXIT
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except BilipError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    text = dumps_report(payload)
    output = getattr(args, "output", None)
    if args.command in ("distortion", "cones", "verify") and output is not None:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
