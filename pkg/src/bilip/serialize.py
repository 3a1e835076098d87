"""CSV and JSON round-tripping for clouds, sampled maps, and reports.

Coordinates are written with repr, Python's shortest round-trip float
format, so save followed by load reproduces every value bit for bit.
Sampled maps carry a JSON sidecar next to the CSV with the shape and
flag metadata the CSV cannot hold.
"""

from __future__ import annotations

import csv
import json
import pathlib

import numpy as np

from .errors import ParseError
from .geometry import PointCloud
from .maps import Ambient, SampledMap

SCHEMA_VERSION = 1
META_KEYS = frozenset(
    {"q1", "q2", "fixes_origin", "avoids_origin", "unbounded_domain", "ambient"}
)


def format_float(x: float) -> str:
    return repr(float(x))


def _parse_float(token: str, where: str) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise ParseError(f"bad float {token!r} in {where}") from exc


def _cloud_header(q: int) -> list[str]:
    return [f"x{i}" for i in range(1, q + 1)]


def _map_header(q1: int, q2: int) -> list[str]:
    return [f"x{i}" for i in range(1, q1 + 1)] + [f"y{i}" for i in range(1, q2 + 1)]


def save_cloud(cloud: PointCloud, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_cloud_header(cloud.dim))
        for row in cloud.points:
            writer.writerow([format_float(v) for v in row])


def load_cloud(path) -> PointCloud:
    path = pathlib.Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path} is empty") from None
        q = len(header)
        if header != _cloud_header(q) or q == 0:
            raise ParseError(f"{path} header {header!r} is not x1..xq")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != q:
                raise ParseError(f"{path}:{lineno} has {len(row)} fields, expected {q}")
            rows.append([_parse_float(v, f"{path}:{lineno}") for v in row])
    if not rows:
        raise ParseError(f"{path} holds no points")
    return PointCloud(np.asarray(rows, dtype=np.float64), path.stem)


def sidecar_path(path) -> pathlib.Path:
    return pathlib.Path(f"{path}.meta.json")


def save_map(m: SampledMap, path) -> None:
    meta = {
        "q1": m.dim_in,
        "q2": m.dim_out,
        "fixes_origin": m.fixes_origin,
        "avoids_origin": m.avoids_origin,
        "unbounded_domain": m.unbounded_domain,
        "ambient": m.ambient.value,
    }
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_map_header(m.dim_in, m.dim_out))
        for x, y in zip(m.domain.points, m.codomain.points):
            writer.writerow([format_float(v) for v in x] + [format_float(v) for v in y])
    sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def load_map(path) -> SampledMap:
    path = pathlib.Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    side = sidecar_path(path)
    if not side.exists():
        raise ParseError(f"missing sidecar {side}")
    try:
        meta = json.loads(side.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{side} is not valid JSON: {exc}") from exc
    if not isinstance(meta, dict) or set(meta) != META_KEYS:
        raise ParseError(f"{side} must hold exactly the keys {sorted(META_KEYS)}")
    try:
        q1, q2 = int(meta["q1"]), int(meta["q2"])
        ambient = Ambient(meta["ambient"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{side} has malformed values: {exc}") from exc
    if q1 < 1 or q2 < 1:
        raise ParseError(f"{side} dimensions must be positive")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path} is empty") from None
        if header != _map_header(q1, q2):
            raise ParseError(f"{path} header does not match q1={q1}, q2={q2}")
        xs, ys = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != q1 + q2:
                raise ParseError(
                    f"{path}:{lineno} has {len(row)} fields, expected {q1 + q2}"
                )
            vals = [_parse_float(v, f"{path}:{lineno}") for v in row]
            xs.append(vals[:q1])
            ys.append(vals[q1:])
    return SampledMap(
        domain=PointCloud(np.asarray(xs, dtype=np.float64), path.stem),
        codomain=PointCloud(np.asarray(ys, dtype=np.float64), f"{path.stem} image"),
        fixes_origin=bool(meta["fixes_origin"]),
        avoids_origin=bool(meta["avoids_origin"]),
        unbounded_domain=bool(meta["unbounded_domain"]),
        ambient=ambient,
    )


def dumps_report(payload: dict) -> str:
    """Serialize a report dict: schema-stamped, sorted keys, one per line.

    Non-finite floats use the json module's Infinity/NaN tokens, so a
    diverging contraction bound stays visible rather than turning into
    null.
    """
    body = {"schema": SCHEMA_VERSION, **payload}
    return json.dumps(body, indent=2, sort_keys=True, default=_coerce) + "\n"


def _coerce(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")
