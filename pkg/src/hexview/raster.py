"""Headless z-buffered rasterizer, colormaps and SVG histogram rendering.

The renderer draws, in a fixed pass order: the opaque extracted surface,
the darkness-coded wireframe (depth-biased), the pale silhouette
(alpha-blended, depth-tested, no z-write), depth-tested irregular
geometry, and finally xray-tagged irregular geometry without depth test.
Rasterization is single-sample with a top-left fill rule, so shared
triangle edges are covered exactly once and the opaque pass is
independent of triangle submission order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .pngio import encode_rgba
from .quality import Histogram
from .surface import IrregularGeometry, SurfaceMesh, Wireframe

BACKGROUND = (1.0, 1.0, 1.0, 1.0)
DEFAULT_FOV_DEG = 45.0
LINE_DEPTH_BIAS = 2e-3
COLORMAPS = ("parula", "jet", "redblue")


class RenderError(ValueError):
    pass


# ---------------------------------------------------------------------------
# colormaps
# ---------------------------------------------------------------------------

def _lut(anchors: list[tuple[float, float, float]]) -> np.ndarray:
    pos = np.linspace(0.0, 1.0, len(anchors))
    x = np.linspace(0.0, 1.0, 256)
    a = np.asarray(anchors)
    return np.stack([np.interp(x, pos, a[:, k]) for k in range(3)], axis=1)


# Compact anchor approximations of the widely used tables; value 0 is the
# worst-quality end (dark blue for parula, red for jet and redblue).
_PARULA = _lut([
    (0.2081, 0.1663, 0.5292),
    (0.1128, 0.3242, 0.8303),
    (0.0591, 0.4880, 0.8624),
    (0.0320, 0.6137, 0.8135),
    (0.0704, 0.7457, 0.7258),
    (0.2906, 0.7822, 0.5836),
    (0.6720, 0.7793, 0.4030),
    (0.9956, 0.7434, 0.2371),
    (0.9763, 0.9831, 0.0538),
])
_JET = _lut([
    (0.0, 0.0, 0.5), (0.0, 0.0, 1.0), (0.0, 1.0, 1.0),
    (1.0, 1.0, 0.0), (1.0, 0.0, 0.0), (0.5, 0.0, 0.0),
])[::-1].copy()
_REDBLUE = _lut([(0.698, 0.094, 0.168), (0.969, 0.969, 0.969), (0.020, 0.188, 0.380)])

_LUTS = {"parula": _PARULA, "jet": _JET, "redblue": _REDBLUE}


def colormap_lut(name: str) -> np.ndarray:
    if name not in _LUTS:
        raise RenderError(f"unknown colormap {name!r}; expected one of {COLORMAPS}")
    return _LUTS[name]


def apply_colormap(values, name: str) -> np.ndarray:
    """256-entry LUT lookup with linear interpolation; values clamp to [0, 1]."""
    lut = colormap_lut(name)
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    x = v * 255.0
    i = np.minimum(x.astype(np.int64), 254)
    frac = (x - i)[..., None]
    return lut[i] * (1.0 - frac) + lut[i + 1] * frac


# ---------------------------------------------------------------------------
# camera
# ---------------------------------------------------------------------------

@dataclass
class Camera:
    direction: np.ndarray            # unit forward
    up: np.ndarray                   # unit, not parallel to direction
    target: np.ndarray
    distance: float
    fov_deg: float = DEFAULT_FOV_DEG
    projection: str = "perspective"  # or "orthographic"
    ortho_scale: float = 1.0

    def __post_init__(self):
        self.direction = np.asarray(self.direction, dtype=np.float64).reshape(3)
        self.up = np.asarray(self.up, dtype=np.float64).reshape(3)
        self.target = np.asarray(self.target, dtype=np.float64).reshape(3)
        self.direction = self.direction / np.linalg.norm(self.direction)
        self.up = self.up / np.linalg.norm(self.up)
        if abs(float(self.direction @ self.up)) > 1.0 - 1e-9:
            raise RenderError("camera view direction and up vector are parallel")

    @property
    def eye(self) -> np.ndarray:
        return self.target - self.direction * self.distance

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        fwd = self.direction
        right = np.cross(fwd, self.up)
        right = right / np.linalg.norm(right)
        up = np.cross(right, fwd)
        return right, up, fwd


def frame_camera(direction, up, target, distance, bounds, fov_deg=DEFAULT_FOV_DEG) -> Camera:
    """Build a camera; non-positive distance auto-frames the given bounds."""
    lo, hi = bounds
    diag = float(np.linalg.norm(np.asarray(hi) - np.asarray(lo)))
    if diag <= 0:
        diag = 1.0
    if distance is None or distance <= 0:
        target = (np.asarray(lo) + np.asarray(hi)) / 2.0
        distance = 0.5 * diag / math.tan(math.radians(fov_deg) / 2.0) * 1.25 + 0.05 * diag
    return Camera(direction, up, target, float(distance), fov_deg)


@dataclass
class RenderOptions:
    lighting: str = "ao"                      # "ao" | "direct"
    colormap: str | None = None               # None keeps base colors
    background: tuple = BACKGROUND
    silhouette_alpha: float = 1.0
    image_size: tuple[int, int] = (640, 480)

    def __post_init__(self):
        if self.lighting not in ("ao", "direct"):
            raise RenderError(f"unknown lighting mode {self.lighting!r}")
        if not 0.0 <= self.silhouette_alpha <= 1.0:
            raise RenderError("silhouette alpha must be in [0, 1]")


@dataclass
class Scene:
    surface: SurfaceMesh | None = None
    wireframe: Wireframe | None = None
    silhouette: SurfaceMesh | None = None
    irregular: IrregularGeometry | None = None
    extra_meshes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# numba raster kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def _edge_accept(e, dx, dy):
    if e > 0.0:
        return True
    if e < 0.0:
        return False
    return dy < 0.0 or (dy == 0.0 and dx > 0.0)


@njit(cache=True)
def _raster_tris(sx, sy, depth, q, rgb, tris, fb, zbuf, cov,
                 alpha, depth_test, write_z, two_sided):
    h, w = zbuf.shape
    for m in range(tris.shape[0]):
        ia, ib, ic = tris[m, 0], tris[m, 1], tris[m, 2]
        x0, y0 = sx[ia], sy[ia]
        x1, y1 = sx[ib], sy[ib]
        x2, y2 = sx[ic], sy[ic]
        area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if area <= 0.0:
            if not two_sided or area == 0.0:
                continue
            ib, ic = ic, ib
            x1, y1, x2, y2 = x2, y2, x1, y1
            area = -area
        lox = max(0, int(math.floor(min(x0, min(x1, x2)))))
        hix = min(w - 1, int(math.ceil(max(x0, max(x1, x2)))))
        loy = max(0, int(math.floor(min(y0, min(y1, y2)))))
        hiy = min(h - 1, int(math.ceil(max(y0, max(y1, y2)))))
        if lox > hix or loy > hiy:
            continue
        dx0, dy0 = x2 - x1, y2 - y1  # edge b->c (weight of a)
        dx1, dy1 = x0 - x2, y0 - y2  # edge c->a
        dx2, dy2 = x1 - x0, y1 - y0  # edge a->b
        za, zb, zc = depth[ia], depth[ib], depth[ic]
        qa, qb, qc = q[ia], q[ib], q[ic]
        for py in range(loy, hiy + 1):
            cy = py + 0.5
            for px in range(lox, hix + 1):
                cx = px + 0.5
                w0 = dx0 * (cy - y1) - dy0 * (cx - x1)
                if not _edge_accept(w0, dx0, dy0):
                    continue
                w1 = dx1 * (cy - y2) - dy1 * (cx - x2)
                if not _edge_accept(w1, dx1, dy1):
                    continue
                w2 = dx2 * (cy - y0) - dy2 * (cx - x0)
                if not _edge_accept(w2, dx2, dy2):
                    continue
                l0 = w0 / area
                l1 = w1 / area
                l2 = w2 / area
                zi = l0 * za + l1 * zb + l2 * zc
                if depth_test and zi <= zbuf[py, px]:
                    continue
                qi = l0 * qa + l1 * qb + l2 * qc
                if qi <= 0.0:
                    continue
                r = (l0 * rgb[ia, 0] * qa + l1 * rgb[ib, 0] * qb + l2 * rgb[ic, 0] * qc) / qi
                g = (l0 * rgb[ia, 1] * qa + l1 * rgb[ib, 1] * qb + l2 * rgb[ic, 1] * qc) / qi
                bl = (l0 * rgb[ia, 2] * qa + l1 * rgb[ib, 2] * qb + l2 * rgb[ic, 2] * qc) / qi
                fb[py, px, 0] = alpha * r + (1.0 - alpha) * fb[py, px, 0]
                fb[py, px, 1] = alpha * g + (1.0 - alpha) * fb[py, px, 1]
                fb[py, px, 2] = alpha * bl + (1.0 - alpha) * fb[py, px, 2]
                if cov[py, px] < alpha:
                    cov[py, px] = alpha
                if write_z and zi > zbuf[py, px]:
                    zbuf[py, px] = zi


@njit(cache=True)
def _raster_lines(sx0, sy0, z0, sx1, sy1, z1, rgb, alpha, fb, zbuf, cov, depth_test):
    h, w = zbuf.shape
    for s in range(sx0.shape[0]):
        a = alpha[s]
        if a <= 0.0:
            continue
        dx = sx1[s] - sx0[s]
        dy = sy1[s] - sy0[s]
        steps = int(max(abs(dx), abs(dy))) + 1
        for k in range(steps + 1):
            t = k / steps
            px = int(math.floor(sx0[s] + t * dx))
            py = int(math.floor(sy0[s] + t * dy))
            if px < 0 or px >= w or py < 0 or py >= h:
                continue
            zi = (z0[s] + t * (z1[s] - z0[s])) * (1.0 + LINE_DEPTH_BIAS)
            if depth_test and zi <= zbuf[py, px]:
                continue
            fb[py, px, 0] = a * rgb[s, 0] + (1.0 - a) * fb[py, px, 0]
            fb[py, px, 1] = a * rgb[s, 1] + (1.0 - a) * fb[py, px, 1]
            fb[py, px, 2] = a * rgb[s, 2] + (1.0 - a) * fb[py, px, 2]
            if cov[py, px] < a:
                cov[py, px] = a


# ---------------------------------------------------------------------------
# geometry -> screen
# ---------------------------------------------------------------------------

class _Projector:
    def __init__(self, camera: Camera, width: int, height: int):
        self.camera = camera
        self.width = width
        self.height = height
        self.right, self.upv, self.fwd = camera.basis()
        self.eye = camera.eye
        self.near = max(1e-9, 1e-3 * max(camera.distance, 1e-6))
        f = 1.0 / math.tan(math.radians(camera.fov_deg) / 2.0)
        self.aspect = width / height
        self.f = f
        self.persp = camera.projection == "perspective"

    def to_view(self, positions: np.ndarray) -> np.ndarray:
        rel = positions - self.eye
        return np.stack([rel @ self.right, rel @ self.upv, rel @ self.fwd], axis=1)

    def view_to_screen(self, view: np.ndarray):
        z = view[:, 2]
        if self.persp:
            ndc_x = (self.f / self.aspect) * view[:, 0] / z
            ndc_y = self.f * view[:, 1] / z
            q = 1.0 / z
        else:
            s = self.camera.ortho_scale
            ndc_x = view[:, 0] / (s * self.aspect)
            ndc_y = view[:, 1] / s
            q = np.ones_like(z)
        sx = (ndc_x + 1.0) * 0.5 * self.width
        sy = (1.0 - ndc_y) * 0.5 * self.height
        return sx, sy, 1.0 / z, q


def _clip_triangles_near(view, rgb, tris, near):
    """Split triangles crossing the near plane; returns (view, rgb, tris)."""
    z = view[:, 2]
    bad_v = z < near
    bad_tri = bad_v[tris].any(axis=1)
    if not bad_tri.any():
        return view, rgb, tris
    keep = tris[~bad_tri]
    out_v = [view]
    out_c = [rgb]
    new_tris = []
    base = len(view)
    for t in tris[bad_tri]:
        poly_v = [view[i] for i in t]
        poly_c = [rgb[i] for i in t]
        clipped_v, clipped_c = [], []
        n = len(poly_v)
        for i in range(n):
            a_v, b_v = poly_v[i], poly_v[(i + 1) % n]
            a_c, b_c = poly_c[i], poly_c[(i + 1) % n]
            a_in, b_in = a_v[2] >= near, b_v[2] >= near
            if a_in:
                clipped_v.append(a_v)
                clipped_c.append(a_c)
            if a_in != b_in:
                s = (near - a_v[2]) / (b_v[2] - a_v[2])
                clipped_v.append(a_v + s * (b_v - a_v))
                clipped_c.append(a_c + s * (b_c - a_c))
        if len(clipped_v) < 3:
            continue
        start = base + 0
        for v_new, c_new in zip(clipped_v, clipped_c):
            out_v.append(v_new[None])
            out_c.append(c_new[None])
        for k in range(1, len(clipped_v) - 1):
            new_tris.append((base, base + k, base + k + 1))
        base += len(clipped_v)
    view = np.vstack(out_v)
    rgb = np.vstack(out_c)
    if new_tris:
        keep = np.vstack([keep, np.asarray(new_tris, dtype=np.int64)]) if len(keep) else np.asarray(new_tris, dtype=np.int64)
    return view, rgb, keep


def _shade(mesh: SurfaceMesh, lighting: str, forward: np.ndarray) -> np.ndarray:
    if lighting == "ao":
        return mesh.colors * mesh.ao[:, None]
    lambert = np.maximum(0.0, mesh.normals @ (-forward))
    return mesh.colors * lambert[:, None]


def _draw_mesh(proj, mesh, lighting, fb, zbuf, cov, alpha=1.0,
               depth_test=True, write_z=True, shaded=True):
    if mesh is None or mesh.num_triangles == 0:
        return
    rgb = _shade(mesh, lighting, proj.fwd) if shaded else mesh.colors.copy()
    view = proj.to_view(mesh.positions)
    view, rgb, tris = _clip_triangles_near(view, rgb, mesh.triangles, proj.near)
    if len(tris) == 0:
        return
    sx, sy, depth, q = proj.view_to_screen(view)
    _raster_tris(sx, sy, depth, q, np.ascontiguousarray(rgb),
                 np.ascontiguousarray(tris), fb, zbuf, cov,
                 float(alpha), depth_test, write_z, mesh.two_sided)


def _draw_wire(proj, wire: Wireframe, fb, zbuf, cov, depth_test=True, alpha_scale=1.0):
    if wire is None or wire.num_segments == 0:
        return
    p0 = wire.segments[:, 0]
    p1 = wire.segments[:, 1]
    v0 = proj.to_view(p0)
    v1 = proj.to_view(p1)
    # clip segments at the near plane
    keep = ~((v0[:, 2] < proj.near) & (v1[:, 2] < proj.near))
    v0, v1 = v0[keep].copy(), v1[keep].copy()
    cols = wire.colors[keep]
    alpha = np.clip(wire.opacity[keep] * alpha_scale, 0.0, 1.0)
    cross = (v0[:, 2] < proj.near) != (v1[:, 2] < proj.near)
    if cross.any():
        s = (proj.near - v0[cross, 2]) / (v1[cross, 2] - v0[cross, 2])
        mid = v0[cross] + s[:, None] * (v1[cross] - v0[cross])
        swap = v0[cross, 2] < proj.near
        v0c = v0[cross]
        v0c[swap] = mid[swap]
        v1c = v1[cross]
        v1c[~swap] = mid[~swap]
        v0[cross] = v0c
        v1[cross] = v1c
    sx0, sy0, z0, _ = proj.view_to_screen(v0)
    sx1, sy1, z1, _ = proj.view_to_screen(v1)
    _raster_lines(sx0, sy0, z0, sx1, sy1, z1,
                  np.ascontiguousarray(cols), np.ascontiguousarray(alpha),
                  fb, zbuf, cov, depth_test)


def render(scene: Scene, camera: Camera, options: RenderOptions) -> np.ndarray:
    """Rasterize the scene to an (H, W, 4) uint8 RGBA image."""
    w, h = options.image_size
    if w < 1 or h < 1:
        raise RenderError("image size must be positive")
    proj = _Projector(camera, w, h)
    bg = np.asarray(options.background, dtype=np.float64)
    fb = np.empty((h, w, 3), dtype=np.float64)
    fb[:, :] = bg[:3]
    zbuf = np.zeros((h, w), dtype=np.float64)
    cov = np.zeros((h, w), dtype=np.float64)

    _draw_mesh(proj, scene.surface, options.lighting, fb, zbuf, cov)
    for mesh in scene.extra_meshes:
        _draw_mesh(proj, mesh, options.lighting, fb, zbuf, cov)
    _draw_wire(proj, scene.wireframe, fb, zbuf, cov, depth_test=True)
    if scene.silhouette is not None and options.silhouette_alpha > 0:
        _draw_mesh(proj, scene.silhouette, options.lighting, fb, zbuf, cov,
                   alpha=options.silhouette_alpha, depth_test=True,
                   write_z=False, shaded=False)
    if scene.irregular is not None and scene.irregular.mode != "off":
        depth_test = not scene.irregular.xray
        if scene.irregular.faces is not None:
            _draw_mesh(proj, scene.irregular.faces, options.lighting, fb, zbuf, cov,
                       alpha=0.5, depth_test=depth_test, write_z=False, shaded=False)
        _draw_wire(proj, scene.irregular.wire, fb, zbuf, cov, depth_test=depth_test)

    out = np.empty((h, w, 4), dtype=np.uint8)
    out[:, :, :3] = np.clip(fb * 255.0 + 0.5, 0.0, 255.0).astype(np.uint8)
    a = bg[3] + (1.0 - bg[3]) * cov
    out[:, :, 3] = np.clip(a * 255.0 + 0.5, 0.0, 255.0).astype(np.uint8)
    return out


def render_png(scene: Scene, camera: Camera, options: RenderOptions) -> bytes:
    return encode_rgba(render(scene, camera, options))


# ---------------------------------------------------------------------------
# histogram rendering (SVG)
# ---------------------------------------------------------------------------

def _hex_color(rgb) -> str:
    r, g, b = (int(round(float(c) * 255)) for c in rgb)
    return f"#{r:02x}{g:02x}{b:02x}"


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def render_histogram(hist: Histogram, colormap: str | None = "parula",
                     orientation: str | None = None) -> str:
    """Color-coded histogram as SVG text, labelled in raw metric units.

    Bars are ordered from best quality to worst, so the worst elements
    always sit at the right (vertical bars) or bottom (horizontal bars);
    the bar colors double as a legend for the surface color-coding.
    """
    orientation = orientation or hist.orientation
    if orientation not in ("vertical", "horizontal"):
        raise RenderError("orientation must be 'vertical' or 'horizontal'")
    order = np.argsort(-hist.normalized_mid, kind="stable")
    counts = hist.counts[order]
    mids = hist.normalized_mid[order]
    n = len(counts)
    # raw-unit boundary labels along the quality axis, best end first
    lo, hi = hist.raw_lo[order], hist.raw_hi[order]
    descending = n > 1 and lo[0] > lo[-1]
    edges = [hi[0]] if descending else [lo[0]]
    for k in range(n):
        edges.append(lo[k] if descending else hi[k])

    max_count = max(1, int(counts.max()))
    width, height = 520, 340
    ml, mr, mt, mb = 64, 14, 16, 46
    plot_w, plot_h = width - ml - mr, height - mt - mb
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    colors = (
        apply_colormap(mids, colormap)
        if colormap in COLORMAPS
        else np.broadcast_to(np.asarray((0.55, 0.58, 0.62)), (n, 3))
    )
    if orientation == "vertical":
        bw = plot_w / n
        for k in range(n):
            bh = plot_h * counts[k] / max_count
            x = ml + k * bw
            y = mt + plot_h - bh
            parts.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{bw:.2f}" height="{bh:.2f}" '
                f'fill="{_hex_color(colors[k])}"/>'
            )
        parts.append(
            f'<line x1="{ml}" y1="{mt + plot_h}" x2="{ml + plot_w}" y2="{mt + plot_h}" '
            'stroke="black" stroke-width="1"/>'
        )
        for j in range(5):
            frac = j / 4
            label = _fmt(edges[int(round(frac * n))])
            x = ml + frac * plot_w
            parts.append(
                f'<text x="{x:.2f}" y="{height - 22}" font-family="monospace" '
                f'font-size="11" text-anchor="middle">{label}</text>'
            )
        parts.append(
            f'<text x="{ml - 8}" y="{mt + 10}" font-family="monospace" font-size="11" '
            f'text-anchor="end">{max_count}</text>'
        )
        parts.append(
            f'<text x="{ml - 8}" y="{mt + plot_h}" font-family="monospace" font-size="11" '
            f'text-anchor="end">0</text>'
        )
    else:
        bh = plot_h / n
        for k in range(n):
            bw_k = plot_w * counts[k] / max_count
            y = mt + k * bh
            parts.append(
                f'<rect x="{ml}" y="{y:.2f}" width="{bw_k:.2f}" height="{bh:.2f}" '
                f'fill="{_hex_color(colors[k])}"/>'
            )
        parts.append(
            f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + plot_h}" '
            'stroke="black" stroke-width="1"/>'
        )
        for j in range(5):
            frac = j / 4
            label = _fmt(edges[int(round(frac * n))])
            y = mt + frac * plot_h
            parts.append(
                f'<text x="{ml - 8}" y="{y + 4:.2f}" font-family="monospace" '
                f'font-size="11" text-anchor="end">{label}</text>'
            )
        parts.append(
            f'<text x="{ml + plot_w}" y="{height - 22}" font-family="monospace" '
            f'font-size="11" text-anchor="middle">{max_count}</text>'
        )
        parts.append(
            f'<text x="{ml}" y="{height - 22}" font-family="monospace" '
            f'font-size="11" text-anchor="middle">0</text>'
        )
    parts.append(
        f'<text x="{ml}" y="{height - 8}" font-family="monospace" font-size="11">'
        f'{hist.metric_id} (raw units)</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)
