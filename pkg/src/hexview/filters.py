"""Per-cell visibility filters and their composition.

Four hiding sources exist: a slicing plane (cells whose barycenter falls
strictly behind it), boundary peeling (cells closer than a minimal hop
depth), quality thresholding (cells whose normalized quality is at least
the threshold), and manual dig/undig/isolate edits.  The plane and peel
sets are optionally regularized with n dilations followed by n erosions
over vertex adjacency before the quality set and manual overrides apply.

Tie-breaking is strict everywhere: a barycenter exactly on the plane, a
depth equal to the minimum, stay visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .gmap import GMap

# Smallest threshold that hides nothing: even cells at normalized quality
# exactly 1 stay visible.  This is the quality slider's left extreme.
QUALITY_NULL_THRESHOLD = math.nextafter(1.0, math.inf)

# Tightest threshold that still shows cells at exactly 0 (inverted or
# degenerate cells under the scaled-jacobian clamp): the right extreme.
QUALITY_COMPLETE_THRESHOLD = math.nextafter(0.0, 1.0)

PLANE_INVERT_TOLERANCE_DEG = 20.0
REGULARIZATION_MAX = 5


@dataclass
class Plane:
    normal: np.ndarray  # unit length when enabled
    offset: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        self.normal = np.asarray(self.normal, dtype=np.float64).reshape(3)
        if self.enabled:
            n = np.linalg.norm(self.normal)
            if not n > 0:
                raise ValueError("enabled plane requires a nonzero normal")
            self.normal = self.normal / n


def default_plane() -> Plane:
    return Plane(np.array([1.0, 0.0, 0.0]), 0.0, enabled=False)


@dataclass
class FilterParams:
    plane: Plane = field(default_factory=default_plane)
    peel_min_depth: int = 0
    quality_threshold: float = QUALITY_NULL_THRESHOLD
    regularization: int = 0
    dug: list[int] = field(default_factory=list)
    undug: list[int] = field(default_factory=list)
    isolated: int | None = None

    def __post_init__(self):
        if self.peel_min_depth < 0:
            raise ValueError("peel_min_depth must be >= 0")
        if not 0 <= self.regularization <= REGULARIZATION_MAX:
            raise ValueError(f"regularization must be in [0, {REGULARIZATION_MAX}]")

    def copy(self) -> "FilterParams":
        return replace(
            self,
            plane=Plane(self.plane.normal.copy(), self.plane.offset, self.plane.enabled),
            dug=list(self.dug),
            undug=list(self.undug),
        )


@dataclass
class FilterState:
    hidden: np.ndarray       # (C,) bool
    params: FilterParams     # snapshot of what produced the flags


# ---------------------------------------------------------------------------
# individual filters
# ---------------------------------------------------------------------------

def plane_filter(gmap: GMap, plane: Plane) -> np.ndarray:
    """Hide cells whose barycenter falls strictly behind the plane."""
    n_cells = gmap.mesh.num_cells
    if not plane.enabled:
        return np.zeros(n_cells, dtype=bool)
    bary = gmap.mesh.barycenters()
    return bary @ plane.normal - plane.offset < 0.0


def peel_filter(depths: np.ndarray, min_depth: int) -> np.ndarray:
    """Hide cells with hop depth strictly smaller than ``min_depth``."""
    return np.asarray(depths) < min_depth


def quality_filter(normalized: np.ndarray, threshold: float) -> np.ndarray:
    """Hide cells whose normalized quality is not worse than the threshold."""
    return np.asarray(normalized) >= threshold


def dilate(gmap: GMap, flags: np.ndarray) -> np.ndarray:
    """Add every visible cell sharing a vertex with the hidden set."""
    flags = np.asarray(flags, dtype=bool)
    if not flags.any():
        return flags.copy()
    touched = np.zeros(gmap.mesh.num_vertices, dtype=bool)
    touched[gmap.mesh.cells[flags].ravel()] = True
    out = touched[gmap.mesh.cells].any(axis=1)
    return out


def erode(gmap: GMap, flags: np.ndarray) -> np.ndarray:
    """Remove every hidden cell with a vertex on the hidden/visible boundary."""
    flags = np.asarray(flags, dtype=bool)
    if flags.all() or not flags.any():
        return flags.copy()
    visible_touch = np.zeros(gmap.mesh.num_vertices, dtype=bool)
    visible_touch[gmap.mesh.cells[~flags].ravel()] = True
    on_boundary = visible_touch[gmap.mesh.cells].any(axis=1)
    return flags & ~on_boundary


def regularize(gmap: GMap, flags: np.ndarray, n: int) -> np.ndarray:
    """Morphological closing of the hidden set: n dilations, then n erosions."""
    if not 0 <= n <= REGULARIZATION_MAX:
        raise ValueError(f"regularization strength must be in [0, {REGULARIZATION_MAX}]")
    out = np.asarray(flags, dtype=bool).copy()
    for _ in range(n):
        out = dilate(gmap, out)
    for _ in range(n):
        out = erode(gmap, out)
    return out


# ---------------------------------------------------------------------------
# manual edits
# ---------------------------------------------------------------------------

class NoHiddenCellError(ValueError):
    """Undig pointed at a face without a hidden incident cell (no-op)."""


def manual_edit(
    gmap: GMap,
    state: FilterState,
    action: str,
    target: int,
) -> FilterParams:
    """Apply dig/undig (``target`` is a face id) or isolate (a cell id).

    Returns updated params; composition must be re-run to refresh flags.
    Undug entries override every other hiding source and dug entries every
    other showing source; isolate clears both lists and hides everything
    except the selected cell.
    """
    params = state.params.copy()
    if action == "isolate":
        if not 0 <= target < gmap.mesh.num_cells:
            raise ValueError(f"cell id {target} out of range")
        params.isolated = int(target)
        params.dug.clear()
        params.undug.clear()
        return params

    c0, c1 = (int(c) for c in gmap.face_cells[target])
    hid = state.hidden
    if action == "dig":
        vis = [c for c in (c0, c1) if c >= 0 and not hid[c]]
        if not vis:
            raise ValueError(f"face {target} has no visible incident cell")
        cell = vis[0]
        if cell in params.undug:
            params.undug.remove(cell)
        if cell not in params.dug:
            params.dug.append(cell)
        return params
    if action == "undig":
        hidden_cells = [c for c in (c0, c1) if c >= 0 and hid[c]]
        if not hidden_cells:
            raise NoHiddenCellError(f"face {target} has no hidden incident cell")
        cell = hidden_cells[0]
        if cell in params.dug:
            params.dug.remove(cell)
        if cell not in params.undug:
            params.undug.append(cell)
        return params
    raise ValueError(f"unknown manual action {action!r}")


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def compose(
    gmap: GMap,
    params: FilterParams,
    depths: np.ndarray | None = None,
    normalized_quality: np.ndarray | None = None,
) -> FilterState:
    """Combine all filters into per-cell hidden flags.

    hidden = regularize(plane | peel) | quality, then manual overrides:
    dug forced hidden, undug forced visible, isolate wins over both but
    later undug entries still reveal neighbors.
    """
    n_cells = gmap.mesh.num_cells
    if depths is None:
        depths = gmap.peel_depths()
    base = plane_filter(gmap, params.plane) | peel_filter(depths, params.peel_min_depth)
    if params.regularization:
        base = regularize(gmap, base, params.regularization)
    if normalized_quality is not None:
        base = base | quality_filter(normalized_quality, params.quality_threshold)
    hidden = base
    if params.isolated is not None:
        hidden = np.ones(n_cells, dtype=bool)
        hidden[params.isolated] = False
    else:
        hidden = hidden.copy()
    if params.dug:
        hidden[np.asarray(params.dug, dtype=np.int64)] = True
    if params.undug:
        hidden[np.asarray(params.undug, dtype=np.int64)] = False
    return FilterState(hidden, params.copy())


# ---------------------------------------------------------------------------
# plane placement from the view, and slider mappings
# ---------------------------------------------------------------------------

def plane_from_view(view_dir: np.ndarray, current: Plane, snap_axis: bool = False) -> Plane:
    """Place the slicing plane from the camera's forward direction.

    If the view now faces the current plane from behind (within 20
    degrees of the opposite normal), the plane is exactly inverted.
    Otherwise the normal becomes the view direction (snapped to the
    nearest signed axis when requested); the hidden half-space is the one
    nearer the viewer, so the cut surface faces the camera.
    """
    v = np.asarray(view_dir, dtype=np.float64).reshape(3)
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise ValueError("view direction must be nonzero")
    v = v / norm
    if current.enabled:
        cos_tol = math.cos(math.radians(PLANE_INVERT_TOLERANCE_DEG))
        if float(v @ -current.normal) >= cos_tol:
            return Plane(-current.normal.copy(), -current.offset, enabled=True)
    if snap_axis:
        axis = int(np.argmax(np.abs(v)))
        snapped = np.zeros(3)
        snapped[axis] = 1.0 if v[axis] >= 0 else -1.0
        v = snapped
    return Plane(v, current.offset, enabled=True)


def plane_offset_from_slider(gmap: GMap, normal: np.ndarray, t: float) -> float:
    """Map slider position [0, 1] over the mesh extent along the normal.

    0 hides nothing (offset at the nearest bounding-box corner) and 1
    hides everything.
    """
    lo, hi = gmap.mesh.bounds()
    corners = np.array(
        [[x, y, z] for x in (lo[0], hi[0]) for y in (lo[1], hi[1]) for z in (lo[2], hi[2])]
    )
    proj = corners @ np.asarray(normal, dtype=np.float64)
    return float(proj.min() + t * (proj.max() - proj.min()))


def peel_depth_from_slider(max_depth: int, t: float) -> int:
    """Map slider position [0, 1] to a minimal depth in [0, max_depth + 1]."""
    return int(round(t * (max_depth + 1)))


def quality_threshold_from_slider(t: float) -> float:
    """Map slider position [0, 1] to a normalized quality threshold.

    The left extreme hides nothing; the right extreme hides every cell
    except those at exactly 0 (inverted/degenerate under the clamped
    scaled jacobian), which realizes both the complete-filter contract
    and the worst-cells-only behavior of the quality filter.
    """
    value = (1.0 - t) * QUALITY_NULL_THRESHOLD
    return max(value, QUALITY_COMPLETE_THRESHOLD)
