"""Command-line interface: inspect meshes, quality reports, renders and
batch processing of zipped collections.

Exit codes: 0 success, 2 input parse errors, 3 validation errors,
4 partial batch failure.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
import zipfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import filters, snapshot
from .ao import DEFAULT_PROBES
from .gmap import StructureError, build_gmap
from .mesh import MeshError
from .mesh_io import ArchiveError, MeshSource, ParseError, load_mesh
from .pipeline import export_scene, pick_at, render_status
from .quality import (
    DEFAULT_BINS,
    METRICS,
    UnknownMetricError,
    evaluate_metric,
    histogram,
    histogram_csv,
    summary,
)
from .raster import render_histogram
from .snapshot import Status, StatusError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_PARTIAL = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_mesh(path: str):
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc
    try:
        return load_mesh(MeshSource(data, "auto", p.name))
    except (ParseError, MeshError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc


def _parse_vec(text: str, n: int, what: str):
    parts = text.split(",")
    if len(parts) != n:
        raise CliError(f"{what} expects {n} comma-separated numbers", EXIT_VALIDATION)
    try:
        return [float(v) for v in parts]
    except ValueError as exc:
        raise CliError(f"{what}: {exc}", EXIT_VALIDATION) from exc


def _parse_bool(text: str, what: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise CliError(f"{what} expects true/false", EXIT_VALIDATION)


def _load_status(args) -> Status:
    if getattr(args, "status", None):
        try:
            text = Path(args.status).read_text()
        except OSError as exc:
            raise CliError(f"{args.status}: {exc}", EXIT_PARSE) from exc
        try:
            status, warnings = snapshot.parse(text)
        except StatusError as exc:
            raise CliError(f"{args.status}: {exc}", EXIT_PARSE) from exc
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        return status
    return Status()


def _apply_status_flags(status: Status, args) -> Status:
    """Flag overrides mirror status fields one-to-one; flags win."""
    if args.camera_direction:
        status.camera_direction = _parse_vec(args.camera_direction, 3, "--camera-direction")
    if args.camera_up:
        status.camera_up = _parse_vec(args.camera_up, 3, "--camera-up")
    if args.camera_target:
        status.camera_target = _parse_vec(args.camera_target, 3, "--camera-target")
    if args.camera_distance is not None:
        status.camera_distance = args.camera_distance
    if args.plane_normal:
        status.plane_normal = _parse_vec(args.plane_normal, 3, "--plane-normal")
        status.plane_enabled = True
    if args.plane_offset is not None:
        status.plane_offset = args.plane_offset
        status.plane_enabled = True
    if args.plane_enabled is not None:
        status.plane_enabled = _parse_bool(args.plane_enabled, "--plane-enabled")
    if args.peel is not None:
        status.peel_min_depth = args.peel
    if args.quality_threshold is not None:
        status.quality_threshold = args.quality_threshold
        status.quality_threshold_raw = None
    if args.quality_threshold_raw is not None:
        status.quality_threshold_raw = args.quality_threshold_raw
    if args.metric:
        status.metric = args.metric
    if args.colormap:
        status.colormap = args.colormap
    if args.mode:
        status.mode = args.mode
    if args.mode_param is not None:
        status.mode_param = args.mode_param
    if args.silhouette is not None:
        status.silhouette_alpha = args.silhouette
    if args.regularization is not None:
        status.regularization = args.regularization
    if args.irregular_mode:
        status.irregular_mode = args.irregular_mode
    if args.irregular_xray:
        status.irregular_xray = True
    if args.dug:
        status.dug = [int(v) for v in args.dug.split(",")]
    if args.undug:
        status.undug = [int(v) for v in args.undug.split(",")]
    if args.isolate is not None:
        status.isolated = args.isolate
    if args.lighting:
        status.lighting = args.lighting
    if args.size:
        w, h = (int(v) for v in args.size.lower().split("x"))
        status.image_size = [w, h]
    try:
        snapshot.validate(status)
    except StatusError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    return status


def _add_status_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--status", help="status JSON file; flags override its fields")
    p.add_argument("--camera-direction", metavar="X,Y,Z")
    p.add_argument("--camera-up", metavar="X,Y,Z")
    p.add_argument("--camera-target", metavar="X,Y,Z")
    p.add_argument("--camera-distance", type=float)
    p.add_argument("--plane-normal", metavar="X,Y,Z")
    p.add_argument("--plane-offset", type=float)
    p.add_argument("--plane-enabled", metavar="BOOL")
    p.add_argument("--peel", type=int)
    p.add_argument("--quality-threshold", type=float, help="normalized threshold in [0, 1]")
    p.add_argument("--quality-threshold-raw", type=float, help="threshold in raw metric units")
    p.add_argument("--metric", choices=sorted(METRICS))
    p.add_argument("--colormap", choices=list(snapshot.COLORMAP_NAMES))
    p.add_argument("--mode", choices=list(snapshot.MODE_NAMES))
    p.add_argument("--mode-param", type=float)
    p.add_argument("--silhouette", type=float)
    p.add_argument("--regularization", type=int)
    p.add_argument("--irregular-mode", choices=list(snapshot.IRREGULAR_NAMES))
    p.add_argument("--irregular-xray", action="store_true")
    p.add_argument("--dug", metavar="IDS")
    p.add_argument("--undug", metavar="IDS")
    p.add_argument("--isolate", type=int)
    p.add_argument("--lighting", choices=list(snapshot.LIGHTING_NAMES))
    p.add_argument("--size", metavar="WxH")
    p.add_argument("--ao-probes", type=int, default=DEFAULT_PROBES)
    p.add_argument("--seed", type=int, default=0)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_info(args) -> int:
    mesh = _read_mesh(args.mesh)
    report: dict = {
        "name": mesh.name,
        "vertices": mesh.num_vertices,
        "cells": mesh.num_cells,
        "warnings": mesh.warnings,
    }
    if mesh.num_cells:
        try:
            g = build_gmap(mesh)
        except StructureError as exc:
            raise CliError(str(exc), EXIT_PARSE) from exc
        irr = g.irregular_elements()
        report.update(
            {
                "edges": len(g.edges),
                "faces": len(g.faces),
                "boundary_vertices": int(g.vertex_boundary.sum()),
                "boundary_edges": int(g.edge_boundary.sum()),
                "boundary_faces": int(g.face_boundary.sum()),
                "max_peel_depth": int(g.peel_depths().max()),
                "irregular_edges": len(irr.edge_ids),
                "irregular_vertices": len(irr.vertex_ids),
            }
        )
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")
    return EXIT_OK


def cmd_quality(args) -> int:
    mesh = _read_mesh(args.mesh)
    try:
        field = evaluate_metric(mesh, args.metric)
    except UnknownMetricError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    if args.bins < 1:
        raise CliError("--bins must be >= 1", EXIT_VALIDATION)
    hist = histogram(field, args.bins, args.orientation)
    print(json.dumps(summary(field).as_dict(), indent=2))
    if args.csv:
        Path(args.csv).write_text(histogram_csv(hist))
    if args.svg:
        Path(args.svg).write_text(render_histogram(hist, args.colormap or "parula"))
    return EXIT_OK


def cmd_render(args) -> int:
    mesh = _read_mesh(args.mesh)
    status = _apply_status_flags(_load_status(args), args)
    status.mesh = Path(args.mesh).name
    try:
        png = render_status(mesh, status, ao_probes=args.ao_probes, seed=args.seed)
    except (MeshError, StructureError) as exc:
        raise CliError(f"render failed at connectivity: {exc}", EXIT_PARSE) from exc
    Path(args.output).write_bytes(png)
    return EXIT_OK


def cmd_batch(args) -> int:
    try:
        data = Path(args.archive).read_bytes()
    except OSError as exc:
        raise CliError(f"{args.archive}: {exc}", EXIT_PARSE) from exc
    base_status = _apply_status_flags(_load_status(args), args)

    try:
        zf = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise CliError(f"{args.archive}: {exc}", EXIT_PARSE) from exc
    names = sorted(
        n for n in zf.namelist()
        if not n.endswith("/") and n.lower().endswith((".mesh", ".vtk"))
    )
    if not names:
        raise CliError(f"{args.archive}: archive contains no parseable meshes", EXIT_PARSE)

    def process(name: str):
        mesh = load_mesh(MeshSource(zf.read(name), "auto", name))
        status = base_status.copy()
        status.mesh = name
        png = render_status(mesh, status, ao_probes=args.ao_probes, seed=args.seed)
        field = evaluate_metric(mesh, status.metric)
        hist = histogram(field, args.bins)
        svg = render_histogram(hist, status.colormap if status.colormap != "none" else "parula")
        return png, svg

    results: dict[str, tuple[bytes, str]] = {}
    failures: dict[str, str] = {}
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = {name: pool.submit(process, name) for name in names}
        for name, fut in futures.items():
            try:
                results[name] = fut.result()
            except Exception as exc:  # per-model failure: log and continue
                failures[name] = str(exc)
    else:
        for name in names:
            try:
                results[name] = process(name)
            except Exception as exc:
                failures[name] = str(exc)

    out = io.BytesIO()
    with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as zout:
        for name in names:
            if name not in results:
                continue
            stem = name.rsplit(".", 1)[0]
            png, svg = results[name]
            for entry_name, payload in ((f"{stem}.png", png), (f"{stem}-hist.svg", svg.encode())):
                info = zipfile.ZipInfo(entry_name, date_time=(1980, 1, 1, 0, 0, 0))
                info.compress_type = zipfile.ZIP_DEFLATED
                info.external_attr = 0o644 << 16
                zout.writestr(info, payload)
    Path(args.output).write_bytes(out.getvalue())

    for name, message in sorted(failures.items()):
        print(f"error: {name}: {message}", file=sys.stderr)
    if failures:
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_extract(args) -> int:
    mesh = _read_mesh(args.mesh)
    status = _apply_status_flags(_load_status(args), args)
    status.mesh = Path(args.mesh).name
    probes = args.ao_probes if args.with_ao else 0
    data = export_scene(mesh, status, ao_probes=probes, seed=args.seed)
    Path(args.output).write_bytes(data)
    return EXIT_OK


def cmd_pick(args) -> int:
    mesh = _read_mesh(args.mesh)
    status = _apply_status_flags(_load_status(args), args)
    xy = _parse_vec(args.screen, 2, "--screen")
    hit = pick_at(mesh, status, xy)
    if hit is None:
        print(json.dumps({"hit": False, "status": None}))
        return EXIT_OK
    cell, face = hit
    updated = None
    if args.action != "report":
        from . import pipeline
        from .filters import NoHiddenCellError

        gmap = build_gmap(mesh)
        derived = pipeline.derive_scene(mesh, status, gmap=gmap)
        target = cell if args.action == "isolate" else face
        try:
            params = filters.manual_edit(gmap, derived.state, args.action, target)
        except NoHiddenCellError:
            print(json.dumps({"hit": True, "cell": cell, "face": face, "status": None,
                              "notice": "no hidden cell at this face"}))
            return EXIT_OK
        status.dug = sorted(int(c) for c in params.dug)
        status.undug = sorted(int(c) for c in params.undug)
        status.isolated = params.isolated
        updated = json.loads(snapshot.serialize(status))
    print(json.dumps({"hit": True, "cell": cell, "face": face, "status": updated}))
    return EXIT_OK


def cmd_plane_from_view(args) -> int:
    status = _load_status(args)
    view = (
        _parse_vec(args.view_dir, 3, "--view-dir")
        if args.view_dir
        else status.camera_direction
    )
    current = filters.Plane(
        np.asarray(status.plane_normal), status.plane_offset, status.plane_enabled
    )
    plane = filters.plane_from_view(np.asarray(view), current, snap_axis=args.snap)
    status.plane_normal = [float(v) for v in plane.normal]
    status.plane_offset = float(plane.offset)
    status.plane_enabled = True
    sys.stdout.write(snapshot.serialize(status))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexview", description="Hexahedral-mesh inspection toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="mesh statistics and connectivity counts")
    p.add_argument("mesh")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("quality", help="quality histogram and summary")
    p.add_argument("mesh")
    p.add_argument("--metric", default="SJ")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--orientation", choices=["vertical", "horizontal"], default="vertical")
    p.add_argument("--csv", help="write histogram CSV to this path")
    p.add_argument("--svg", help="write histogram SVG to this path")
    p.add_argument("--colormap", choices=["parula", "jet", "redblue"])
    p.set_defaults(func=cmd_quality)

    p = sub.add_parser("render", help="render one mesh to a status-embedded PNG")
    p.add_argument("mesh")
    p.add_argument("-o", "--output", required=True)
    _add_status_flags(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("batch", help="render every mesh in a zip archive")
    p.add_argument("archive")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    _add_status_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("extract", help="export the derived scene as a zip of PLY/JSON")
    p.add_argument("mesh")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--with-ao", action="store_true", help="bake AO into the surface export")
    _add_status_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("pick", help="report or act on the cell/face under a screen point")
    p.add_argument("mesh")
    p.add_argument("--screen", required=True, metavar="X,Y", help="normalized [0,1] from top-left")
    p.add_argument(
        "--action", choices=["report", "dig", "undig", "isolate"], default="report",
        help="report the hit, or apply the manual edit and print the updated status",
    )
    _add_status_flags(p)
    p.set_defaults(func=cmd_pick)

    p = sub.add_parser(
        "plane-from-view", help="update a status's slicing plane from a view direction"
    )
    p.add_argument("--status")
    p.add_argument("--view-dir", metavar="X,Y,Z")
    p.add_argument("--snap", action="store_true")
    p.set_defaults(func=cmd_plane_from_view)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ArchiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
