"""Full rendering pipeline: mesh + Status -> PNG with embedded status.

This is the shared path behind the render and batch commands: build
connectivity, evaluate the selected metric, compose filters, extract the
surface for the selected mode, bake ambient occlusion, rasterize, and
attach the canonical status to the image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ao import DEFAULT_PROBES, compute_ao, probe_directions
from .filters import FilterParams, FilterState, Plane, compose
from .gmap import GMap, build_gmap
from .mesh import HexMesh
from .quality import QualityField, evaluate_metric, phi, phi_inv
from .raster import RenderOptions, Scene, frame_camera, render_png
from .raster import apply_colormap
from .snapshot import Status, embed_png
from .surface import (
    ExtractionOptions,
    IrregularGeometry,
    SurfaceMesh,
    Wireframe,
    extract,
    irregular_geometry,
    silhouette_mesh,
)


@dataclass
class DerivedScene:
    """Everything derived from (mesh, status) short of rasterization."""

    gmap: GMap
    field: QualityField
    state: FilterState
    surface: SurfaceMesh
    wireframe: Wireframe
    silhouette: SurfaceMesh | None
    irregular: IrregularGeometry | None
    status: Status  # with the raw/normalized quality threshold reconciled


def filter_params_from_status(status: Status, threshold: float) -> FilterParams:
    return FilterParams(
        plane=Plane(np.asarray(status.plane_normal), status.plane_offset, status.plane_enabled),
        peel_min_depth=status.peel_min_depth,
        quality_threshold=threshold,
        regularization=status.regularization,
        dug=list(status.dug),
        undug=list(status.undug),
        isolated=status.isolated,
    )


def _reconcile_threshold(status: Status, field: QualityField) -> tuple[Status, float]:
    """Pin the quality threshold to its raw mirror so a re-render from the
    embedded status filters identically (the raw value wins at parse)."""
    status = status.copy()
    if status.quality_threshold_raw is None:
        if status.quality_threshold <= 1.0:
            status.quality_threshold_raw = float(
                phi_inv(status.metric, status.quality_threshold, field.q_min, field.q_max)
            )
        else:
            return status, status.quality_threshold  # null filter: no raw meaning
    threshold = float(phi(status.metric, status.quality_threshold_raw, field.q_min, field.q_max))
    status.quality_threshold = min(max(threshold, 0.0), 1.0)
    return status, threshold


def derive_scene(mesh: HexMesh, status: Status, gmap: GMap | None = None) -> DerivedScene:
    if gmap is None:
        gmap = build_gmap(mesh)
    field = evaluate_metric(mesh, status.metric)
    status, threshold = _reconcile_threshold(status, field)
    params = filter_params_from_status(status, threshold)
    state = compose(gmap, params, gmap.peel_depths(), field.normalized)

    options = ExtractionOptions(status.mode, status.mode_param)
    surface, wireframe = extract(
        gmap, state.hidden, options,
        tuple(status.color_outer), tuple(status.color_inner),
    )
    if status.colormap != "none" and surface.num_triangles:
        surface.recolor_by_cell(apply_colormap(field.normalized, status.colormap))

    silhouette = None
    if status.silhouette_alpha > 0 and state.hidden.any():
        silhouette = silhouette_mesh(gmap, state.hidden)
        if silhouette.num_triangles == 0:
            silhouette = None

    irregular = None
    if status.irregular_mode != "off":
        irregular = irregular_geometry(
            gmap, state.hidden, status.irregular_mode, status.irregular_xray,
            valence_colors={3: tuple(status.color_valence3), 5: tuple(status.color_valence5)},
            other_color=tuple(status.color_valence_other),
        )

    return DerivedScene(gmap, field, state, surface, wireframe, silhouette, irregular, status)


def render_status(
    mesh: HexMesh,
    status: Status,
    ao_probes: int = DEFAULT_PROBES,
    seed: int = 0,
    gmap: GMap | None = None,
) -> bytes:
    """Run the full pipeline and return PNG bytes with embedded status."""
    derived = derive_scene(mesh, status, gmap=gmap)
    status = derived.status
    if status.lighting == "ao" and derived.surface.num_triangles:
        probes = probe_directions(ao_probes, seed)
        derived.surface.ao = compute_ao(derived.surface, probes)

    camera = frame_camera(
        status.camera_direction, status.camera_up, status.camera_target,
        status.camera_distance, mesh.bounds(),
    )
    options = RenderOptions(
        lighting=status.lighting,
        background=tuple(status.color_background),
        silhouette_alpha=status.silhouette_alpha,
        image_size=tuple(int(v) for v in status.image_size),
    )
    scene = Scene(
        surface=derived.surface,
        wireframe=derived.wireframe,
        silhouette=derived.silhouette,
        irregular=derived.irregular,
    )
    png = render_png(scene, camera, options)
    return embed_png(png, status)


def export_scene(
    mesh: HexMesh,
    status: Status,
    ao_probes: int = 0,
    seed: int = 0,
    gmap: GMap | None = None,
) -> bytes:
    """Derived scene as an uncompressed zip of PLY/JSON entries.

    This is the wire format the interactive viewer consumes: surface.ply
    (with an ao column when probes were requested), optional
    silhouette.ply, wireframe.json, irregular.json and meta.json with
    slider-range data.  Entries are stored uncompressed with zeroed
    timestamps so the archive is byte-deterministic.
    """
    import io
    import json
    import zipfile

    from .mesh_io import write_surface
    from .quality import histogram, summary

    derived = derive_scene(mesh, status, gmap=gmap)
    with_ao = status.lighting == "ao" and ao_probes > 0 and derived.surface.num_triangles > 0
    if with_ao:
        derived.surface.ao = compute_ao(derived.surface, probe_directions(ao_probes, seed))

    entries: list[tuple[str, bytes]] = []
    if derived.surface.num_triangles:
        entries.append(("surface.ply", write_surface(derived.surface, "ply", include_ao=with_ao)))
    if derived.silhouette is not None and derived.silhouette.num_triangles:
        entries.append(("silhouette.ply", write_surface(derived.silhouette, "ply")))
    wire = derived.wireframe
    entries.append(
        (
            "wireframe.json",
            json.dumps(
                {
                    "segments": wire.segments.tolist(),
                    "opacity": wire.opacity.tolist(),
                    "colors": wire.colors.tolist(),
                }
            ).encode(),
        )
    )
    irr = derived.irregular
    entries.append(
        (
            "irregular.json",
            json.dumps(
                {
                    "mode": status.irregular_mode,
                    "xray": bool(status.irregular_xray),
                    "segments": [] if irr is None else irr.wire.segments.tolist(),
                    "colors": [] if irr is None else irr.wire.colors.tolist(),
                }
            ).encode(),
        )
    )
    lo, hi = mesh.bounds()
    depths = derived.gmap.peel_depths()
    hist = histogram(derived.field, 100)
    entries.append(
        (
            "meta.json",
            json.dumps(
                {
                    "mesh": status.mesh or mesh.name,
                    "cells": mesh.num_cells,
                    "vertices": mesh.num_vertices,
                    "visible_cells": int((~derived.state.hidden).sum()),
                    "bounds": [lo.tolist(), hi.tolist()],
                    "max_peel_depth": int(depths.max()),
                    "metric": status.metric,
                    "q_min": derived.field.q_min,
                    "q_max": derived.field.q_max,
                    "summary": summary(derived.field).as_dict(),
                    "histogram": {
                        "raw_lo": hist.raw_lo.tolist(),
                        "raw_hi": hist.raw_hi.tolist(),
                        "counts": hist.counts.tolist(),
                        "normalized_mid": hist.normalized_mid.tolist(),
                    },
                    "ao_baked": bool(with_ao),
                }
            ).encode(),
        )
    )
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_STORED) as zf:
        for name, payload in entries:
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, payload)
    return buf.getvalue()


def pick_at(mesh: HexMesh, status: Status, screen_xy, gmap: GMap | None = None):
    """Pick the (cell, face) under a normalized screen point, or None.

    ``screen_xy`` is (x, y) in [0, 1] from the top-left of the image the
    status describes; the ray is built from the status camera exactly as
    the renderer frames it.
    """
    from .raster import _Projector
    from .surface import pick

    derived = derive_scene(mesh, status, gmap=gmap)
    if derived.surface.num_triangles == 0:
        return None
    w, h = (int(v) for v in status.image_size)
    camera = frame_camera(
        status.camera_direction, status.camera_up, status.camera_target,
        status.camera_distance, mesh.bounds(),
    )
    proj = _Projector(camera, w, h)
    ndc_x = 2.0 * float(screen_xy[0]) - 1.0
    ndc_y = 1.0 - 2.0 * float(screen_xy[1])
    if proj.persp:
        view_dir = np.array([ndc_x * proj.aspect / proj.f, ndc_y / proj.f, 1.0])
        origin = proj.eye
    else:
        s = camera.ortho_scale
        view_dir = np.array([0.0, 0.0, 1.0])
        origin = proj.eye + proj.right * (ndc_x * s * proj.aspect) + proj.upv * (ndc_y * s)
    direction = (
        proj.right * view_dir[0] + proj.upv * view_dir[1] + proj.fwd * view_dir[2]
    )
    hit = pick(derived.surface, origin, direction)
    if hit is None:
        return None
    cell, face, _ = hit
    return cell, face
