"""Extraction of the renderable boundary surface from the filtered mesh.

Three modes are supported:

* ``flat``: one quad per face separating a visible cell from a hidden one
  (or from the outside), flat-shaded, plus a wireframe whose per-edge
  opacity encodes how many visible cells share the edge.
* ``fissure``: per-cell quads with exposed corners pulled toward the cell
  barycenter by a fraction ``g``, opening gaps between cells near the
  visible boundary; gaps close toward the interior, keeping the surface
  watertight.
* ``rounded``: per-cell 3x3 sub-faced shells with chamfered edges and
  corners (lattice parameters {0, r, 1-r, 1} per axis, edge/corner points
  pulled inward to r/2), smooth-shaded within a cell.

All shared positions are computed from a single canonical source (mesh
vertices, or per-face canonical lattice points), so welding by exact
position yields a closed surface in every mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gmap import INVALID, GMap
from .mesh import EDGES, FACE_EDGES, FACES

OUTER_COLOR = (1.0, 1.0, 1.0)
INNER_COLOR = (1.0, 0.85, 0.25)
SILHOUETTE_COLOR = (0.80, 0.82, 0.88)
WIRE_COLOR = (0.08, 0.08, 0.08)
BARB_COLOR = (0.35, 0.35, 0.35)
PAPER_FACE_COLOR = (0.95, 0.80, 0.55)
PAPER_FACE_INSET = 0.15

VALENCE_COLORS = {3: (0.85, 0.10, 0.10), 5: (0.10, 0.65, 0.15)}
VALENCE_OTHER_COLOR = (0.15, 0.25, 0.85)

MODES = ("flat", "fissure", "rounded")
IRREGULAR_MODES = ("off", "wire", "barbed", "paper")


@dataclass
class SurfaceMesh:
    positions: np.ndarray   # (N, 3) float64
    normals: np.ndarray     # (N, 3) float64
    colors: np.ndarray      # (N, 3) float64
    ao: np.ndarray          # (N,) float64, 1 = fully lit
    triangles: np.ndarray   # (M, 3) int64
    tri_source: np.ndarray  # (M, 2) int64: (cell id, face id)
    shading: str = "flat"
    two_sided: bool = False

    @property
    def num_vertices(self) -> int:
        return len(self.positions)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def recolor_by_cell(self, cell_colors: np.ndarray) -> None:
        """Replace vertex colors with the source cell's color per triangle."""
        ok = self.tri_source[:, 0] >= 0
        tris = self.triangles[ok]
        cols = np.asarray(cell_colors)[self.tri_source[ok, 0]]
        for k in range(3):
            self.colors[tris[:, k]] = cols


def empty_surface(shading: str = "flat") -> SurfaceMesh:
    return SurfaceMesh(
        np.zeros((0, 3)), np.zeros((0, 3)), np.zeros((0, 3)), np.zeros(0),
        np.zeros((0, 3), dtype=np.int64), np.zeros((0, 2), dtype=np.int64), shading,
    )


@dataclass
class Wireframe:
    segments: np.ndarray  # (K, 2, 3) endpoint positions
    opacity: np.ndarray   # (K,) in [0, 1]
    colors: np.ndarray    # (K, 3)

    @property
    def num_segments(self) -> int:
        return len(self.segments)


def empty_wireframe() -> Wireframe:
    return Wireframe(np.zeros((0, 2, 3)), np.zeros(0), np.zeros((0, 3)))


@dataclass
class IrregularGeometry:
    wire: Wireframe
    faces: SurfaceMesh | None
    mode: str
    xray: bool


@dataclass
class ExtractionOptions:
    mode: str = "flat"
    parameter: float = 0.35  # opacity multiplier / gap fraction / round radius

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode in ("fissure", "rounded") and not 0.0 < self.parameter < 0.5:
            raise ValueError(f"{self.mode} parameter must be in (0, 0.5)")
        if self.mode == "flat" and not 0.0 < self.parameter <= 1.0:
            raise ValueError("flat-mode opacity multiplier must be in (0, 1]")


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def exposed_vertices(gmap: GMap, hidden: np.ndarray) -> np.ndarray:
    """Vertices lying on a face of the current visible boundary."""
    out = np.zeros(gmap.mesh.num_vertices, dtype=bool)
    face_ids, _ = gmap.current_boundary_faces(hidden)
    out[gmap.faces[face_ids].ravel()] = True
    return out


def _quad_normals(quads: np.ndarray) -> np.ndarray:
    """Per-quad normal from the diagonals; quads shape (K, 4, 3)."""
    n = np.cross(quads[:, 2] - quads[:, 0], quads[:, 3] - quads[:, 1])
    length = np.linalg.norm(n, axis=1, keepdims=True)
    return np.divide(n, length, out=np.zeros_like(n), where=length > 0)


def _quads_to_triangles(n_quads: int, base: int = 0) -> np.ndarray:
    """Index pairs splitting quads on the (0, 2) diagonal."""
    q = np.arange(n_quads) * 4 + base
    tris = np.empty((2 * n_quads, 3), dtype=np.int64)
    tris[0::2] = np.stack([q, q + 1, q + 2], axis=1)
    tris[1::2] = np.stack([q, q + 2, q + 3], axis=1)
    return tris


# ---------------------------------------------------------------------------
# flat mode
# ---------------------------------------------------------------------------

def extract_flat(
    gmap: GMap,
    hidden: np.ndarray,
    alpha0: float = 0.35,
    outer_color=OUTER_COLOR,
    inner_color=INNER_COLOR,
) -> tuple[SurfaceMesh, Wireframe]:
    """Current-boundary quads with flat shading plus darkness-coded edges."""
    face_ids, cells = gmap.current_boundary_faces(hidden)
    if len(face_ids) == 0:
        return empty_surface(), empty_wireframe()

    lf = (gmap.cell_faces[cells] == face_ids[:, None]).argmax(axis=1)
    corner_ids = gmap.mesh.cells[cells[:, None], FACES[lf]]          # (K, 4)
    quads = gmap.mesh.vertices[corner_ids]                           # (K, 4, 3)
    normals = _quad_normals(quads)
    is_outer = gmap.face_boundary[face_ids]
    face_col = np.where(is_outer[:, None], outer_color, inner_color)

    positions = quads.reshape(-1, 3)
    vnormals = np.repeat(normals, 4, axis=0)
    vcolors = np.repeat(face_col, 4, axis=0)
    triangles = _quads_to_triangles(len(face_ids))
    source = np.stack([cells, face_ids], axis=1)
    tri_source = np.repeat(source, 2, axis=0)

    surface = SurfaceMesh(
        positions, vnormals, vcolors, np.ones(len(positions)), triangles, tri_source, "flat"
    )

    # wireframe: unique edges of the boundary faces, opacity by the number
    # of visible cells sharing each edge
    edge_ids = np.unique(gmap.face_edges[face_ids].ravel())
    vis_count = np.bincount(
        gmap.cell_edges[~np.asarray(hidden, dtype=bool)].ravel(), minlength=len(gmap.edges)
    )
    opacity = np.minimum(1.0, alpha0 * vis_count[edge_ids])
    segments = gmap.mesh.vertices[gmap.edges[edge_ids]]
    colors = np.broadcast_to(np.asarray(WIRE_COLOR), (len(edge_ids), 3)).copy()
    return surface, Wireframe(segments, opacity, colors)


# ---------------------------------------------------------------------------
# fissure mode
# ---------------------------------------------------------------------------

def extract_fissure(
    gmap: GMap,
    hidden: np.ndarray,
    gap: float,
    outer_color=OUTER_COLOR,
    inner_color=INNER_COLOR,
) -> SurfaceMesh:
    """Per-cell quads with exposed corners pulled toward the barycenter."""
    if not 0.0 < gap < 0.5:
        raise ValueError("gap fraction must be in (0, 0.5)")
    exposed = exposed_vertices(gmap, hidden)
    cell_exposed = exposed[gmap.mesh.cells]                      # (C, 8)
    sel = np.nonzero(cell_exposed.any(axis=1) & ~np.asarray(hidden, dtype=bool))[0]
    if len(sel) == 0:
        return empty_surface()

    corners = gmap.mesh.vertices[gmap.mesh.cells[sel]]           # (S, 8, 3)
    bary = corners.mean(axis=1, keepdims=True)
    moved = np.where(
        cell_exposed[sel][:, :, None], corners + gap * (bary - corners), corners
    )

    emit = cell_exposed[sel][:, FACES].any(axis=2)               # (S, 6)
    s_idx, lf_idx = np.nonzero(emit)
    quads = moved[s_idx[:, None], FACES[lf_idx]]                 # (K, 4, 3)
    face_ids = gmap.cell_faces[sel[s_idx], lf_idx]
    normals = _quad_normals(quads)
    is_outer = gmap.face_boundary[face_ids]
    face_col = np.where(is_outer[:, None], outer_color, inner_color)

    positions = quads.reshape(-1, 3)
    triangles = _quads_to_triangles(len(quads))
    source = np.stack([sel[s_idx], face_ids], axis=1)
    return SurfaceMesh(
        positions,
        np.repeat(normals, 4, axis=0),
        np.repeat(face_col, 4, axis=0),
        np.ones(len(positions)),
        triangles,
        np.repeat(source, 2, axis=0),
        "flat",
    )


# ---------------------------------------------------------------------------
# rounded mode
# ---------------------------------------------------------------------------

_CORNER_PARAMS = np.array(
    [
        (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
        (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
    ],
    dtype=np.float64,
)


def _trilinear_weights(params: np.ndarray) -> np.ndarray:
    """Weights over the 8 cell corners for points given in (u, v, w)."""
    u = params[:, None, :]
    s = _CORNER_PARAMS[None, :, :]
    return np.prod(np.where(s > 0.5, u, 1.0 - u), axis=2)  # (P, 8)


def _edge_point_params(r: float) -> np.ndarray:
    """Parameters of the 24 chamfered edge points (edge index, end)."""
    pts = np.empty((12, 2, 3))
    for e, (a, b) in enumerate(EDGES.tolist()):
        sa, sb = _CORNER_PARAMS[a], _CORNER_PARAMS[b]
        axis = int(np.nonzero(sa != sb)[0][0])
        for end, s_end in ((0, sa), (1, sb)):
            p = np.where(s_end > 0.5, 1.0 - r / 2.0, r / 2.0)
            p[axis] = r if s_end[axis] < 0.5 else 1.0 - r
            pts[e, end] = p
    return pts.reshape(24, 3)


def _face_point_weights(r: float) -> np.ndarray:
    """Bilinear weights of the 4 canonical in-face points over face corners.

    Point k sits at parameter r from corner k toward both its winding
    neighbors; weights are cyclic in the face's stored corner order.
    """
    w = np.array([(1 - r) * (1 - r), r * (1 - r), r * r, r * (1 - r)])
    out = np.empty((4, 4))
    for k in range(4):
        out[k] = np.roll(w, k)
    return out


# static incidence tables over the local cell topology
def _corner_face_positions() -> list[list[tuple[int, int]]]:
    """For each local corner, its (local face, position in winding) pairs."""
    out: list[list[tuple[int, int]]] = [[] for _ in range(8)]
    for f in range(6):
        for j in range(4):
            out[int(FACES[f, j])].append((f, j))
    return out


def _edge_face_slots() -> list[list[tuple[int, int]]]:
    """For each local edge, its two (local face, border index) locations."""
    out: list[list[tuple[int, int]]] = [[] for _ in range(12)]
    for f in range(6):
        for k in range(4):
            out[int(FACE_EDGES[f, k])].append((f, k))
    return out


_CORNER_FACES = _corner_face_positions()
_EDGE_FACE_SLOTS = _edge_face_slots()


class _Builder:
    """Accumulates vertex instances and triangles for one extraction."""

    def __init__(self, shading: str):
        self.positions: list[np.ndarray] = []
        self.normals: list = []
        self.colors: list = []
        self.triangles: list[tuple[int, int, int]] = []
        self.tri_source: list[tuple[int, int]] = []
        self.smooth: list[bool] = []
        self.shading = shading

    def add_vertex(self, pos, color, normal=None, smooth=True) -> int:
        self.positions.append(np.asarray(pos, dtype=np.float64))
        self.normals.append(np.zeros(3) if normal is None else np.asarray(normal, dtype=np.float64))
        self.colors.append(np.asarray(color, dtype=np.float64))
        self.smooth.append(smooth)
        return len(self.positions) - 1

    def add_quad(self, idx: tuple[int, int, int, int], cell: int, face: int) -> None:
        a, b, c, d = idx
        for tri in ((a, b, c), (a, c, d)):
            if tri[0] != tri[1] and tri[1] != tri[2] and tri[0] != tri[2]:
                self.triangles.append(tri)
                self.tri_source.append((cell, face))

    def finish(self) -> SurfaceMesh:
        if not self.triangles:
            return empty_surface(self.shading)
        pos = np.vstack(self.positions)
        nrm = np.vstack(self.normals)
        col = np.vstack(self.colors)
        tris = np.asarray(self.triangles, dtype=np.int64)
        smooth = np.asarray(self.smooth, dtype=bool)
        # accumulate area-weighted normals on smooth vertices
        e1 = pos[tris[:, 1]] - pos[tris[:, 0]]
        e2 = pos[tris[:, 2]] - pos[tris[:, 0]]
        tn = np.cross(e1, e2)
        acc = np.zeros_like(pos)
        for k in range(3):
            np.add.at(acc, tris[:, k], tn)
        length = np.linalg.norm(acc, axis=1, keepdims=True)
        acc = np.divide(acc, length, out=np.zeros_like(acc), where=length > 0)
        nrm[smooth] = acc[smooth]
        return SurfaceMesh(
            pos, nrm, col, np.ones(len(pos)), tris,
            np.asarray(self.tri_source, dtype=np.int64), self.shading,
        )


def extract_rounded(
    gmap: GMap,
    hidden: np.ndarray,
    radius: float,
    outer_color=OUTER_COLOR,
    inner_color=INNER_COLOR,
) -> SurfaceMesh:
    """Chamfered 3x3 sub-faced shells for cells with exposed vertices."""
    if not 0.0 < radius < 0.5:
        raise ValueError("round radius must be in (0, 0.5)")
    r = radius
    exposed = exposed_vertices(gmap, hidden)
    cell_exposed = exposed[gmap.mesh.cells]
    sel = np.nonzero(cell_exposed.any(axis=1) & ~np.asarray(hidden, dtype=bool))[0]
    if len(sel) == 0:
        return empty_surface("smooth")

    mesh = gmap.mesh
    # canonical in-face lattice points, shared by both incident cells
    face_pts = np.einsum("pk,fkx->fpx", _face_point_weights(r), mesh.vertices[gmap.faces])

    w_corner = _trilinear_weights(_CORNER_PARAMS * (1.0 - r) + r / 2.0)
    w_edge = _trilinear_weights(_edge_point_params(r))

    corners_sel = mesh.vertices[mesh.cells[sel]]              # (S, 8, 3)
    corner_pts = np.einsum("pk,skx->spx", w_corner, corners_sel)
    edge_pts = np.einsum("pk,skx->spx", w_edge, corners_sel).reshape(len(sel), 12, 2, 3)

    # canonical index of each cell-face corner inside the face's winding
    cell_face_ids = gmap.cell_faces[sel]                      # (S, 6)
    canon = (
        mesh.cells[sel][:, FACES][:, :, :, None] == gmap.faces[cell_face_ids][:, :, None, :]
    ).argmax(axis=3)                                          # (S, 6, 4)

    b = _Builder("smooth")
    colors = np.where(gmap.face_boundary[:, None], outer_color, inner_color)

    for s, c in enumerate(sel):
        exp = cell_exposed[c]
        cache: dict[tuple, int] = {}

        def fp(lf: int, j: int, flat_normal=None, color=None):
            f = int(cell_face_ids[s, lf])
            ci = int(canon[s, lf, j])
            if flat_normal is not None:
                return b.add_vertex(face_pts[f, ci], color, flat_normal, smooth=False)
            key = ("f", f, ci)
            if key not in cache:
                cache[key] = b.add_vertex(face_pts[f, ci], colors[f])
            return cache[key]

        def ep(e: int, end: int, f: int):
            key = ("e", e, end)
            if key not in cache:
                cache[key] = b.add_vertex(edge_pts[s, e, end], colors[f])
            return cache[key]

        def cp(k: int, f: int):
            key = ("c", k)
            if key not in cache:
                cache[key] = b.add_vertex(corner_pts[s, k], colors[f])
            return cache[key]

        def op(k: int, f: int):
            key = ("o", k)
            if key not in cache:
                cache[key] = b.add_vertex(mesh.vertices[mesh.cells[c, k]], colors[f])
            return cache[key]

        # side faces: all four corners exposed
        for lf in range(6):
            quad_corners = FACES[lf]
            if not all(exp[q] for q in quad_corners):
                continue
            f = int(cell_face_ids[s, lf])
            pts = face_pts[f, canon[s, lf]]
            normal = _quad_normals(pts[None])[0]
            idx = tuple(fp(lf, j, normal, colors[f]) for j in range(4))
            b.add_quad(idx, int(c), f)

        # edge tubes: two quads per edge with an exposed endpoint
        for e in range(12):
            a_loc, b_loc = int(EDGES[e, 0]), int(EDGES[e, 1])
            ea, eb = bool(exp[a_loc]), bool(exp[b_loc])
            if not (ea or eb):
                continue
            for lf, k in _EDGE_FACE_SLOTS[e]:
                f = int(cell_face_ids[s, lf])
                start = int(FACES[lf, k])          # border k runs start -> stop
                stop = int(FACES[lf, (k + 1) % 4])
                j_start, j_stop = k, (k + 1) % 4
                end_start = 0 if start == a_loc else 1
                end_stop = 1 - end_start
                if ea and eb:
                    idx = (
                        fp(lf, j_start), ep(e, end_start, f),
                        ep(e, end_stop, f), fp(lf, j_stop),
                    )
                elif exp[start]:                   # stop end collapses
                    idx = (fp(lf, j_start), ep(e, end_start, f), op(stop, f), op(stop, f))
                else:                              # start end collapses
                    idx = (op(start, f), op(start, f), ep(e, end_stop, f), fp(lf, j_stop))
                b.add_quad(idx, int(c), f)

        # corner fans: three quads per exposed corner
        for k in range(8):
            if not exp[k]:
                continue
            for lf, j in _CORNER_FACES[k]:
                f = int(cell_face_ids[s, lf])
                e_dep = int(FACE_EDGES[lf, j])
                e_arr = int(FACE_EDGES[lf, (j - 1) % 4])
                end_dep = 0 if int(EDGES[e_dep, 0]) == k else 1
                end_arr = 0 if int(EDGES[e_arr, 0]) == k else 1
                idx = (fp(lf, j), ep(e_arr, end_arr, f), cp(k, f), ep(e_dep, end_dep, f))
                b.add_quad(idx, int(c), f)

    return b.finish()


def extract(
    gmap: GMap,
    hidden: np.ndarray,
    options: ExtractionOptions,
    outer_color=OUTER_COLOR,
    inner_color=INNER_COLOR,
):
    """Dispatch to the mode-specific extraction.

    Returns (surface, wireframe); the wireframe is empty outside flat mode.
    """
    if options.mode == "flat":
        return extract_flat(gmap, hidden, options.parameter, outer_color, inner_color)
    if options.mode == "fissure":
        return (
            extract_fissure(gmap, hidden, options.parameter, outer_color, inner_color),
            empty_wireframe(),
        )
    return (
        extract_rounded(gmap, hidden, options.parameter, outer_color, inner_color),
        empty_wireframe(),
    )


# ---------------------------------------------------------------------------
# silhouette and irregular structure
# ---------------------------------------------------------------------------

def silhouette_mesh(gmap: GMap, hidden: np.ndarray) -> SurfaceMesh:
    """Original-boundary faces of hidden cells, for pale context rendering."""
    hidden = np.asarray(hidden, dtype=bool)
    sel = np.nonzero(gmap.face_boundary & hidden[gmap.face_cells[:, 0]])[0]
    if len(sel) == 0:
        return empty_surface()
    cells = gmap.face_cells[sel, 0]
    lf = (gmap.cell_faces[cells] == sel[:, None]).argmax(axis=1)
    quads = gmap.mesh.vertices[gmap.mesh.cells[cells[:, None], FACES[lf]]]
    normals = _quad_normals(quads)
    positions = quads.reshape(-1, 3)
    color = np.broadcast_to(np.asarray(SILHOUETTE_COLOR), (len(positions), 3)).copy()
    return SurfaceMesh(
        positions,
        np.repeat(normals, 4, axis=0),
        color,
        np.ones(len(positions)),
        _quads_to_triangles(len(sel)),
        np.repeat(np.stack([cells, sel], axis=1), 2, axis=0),
        "flat",
    )


def irregular_geometry(
    gmap: GMap,
    hidden: np.ndarray | None,
    mode: str = "wire",
    xray: bool = False,
    include_boundary: bool = False,
    valence_colors: dict | None = None,
    other_color=VALENCE_OTHER_COLOR,
) -> IrregularGeometry:
    """Line/face geometry depicting irregular edges, colored by valence.

    Visibility against the surface is a rendering concern (depth test or
    the xray overlay), so the full structure is emitted regardless of the
    current filter.
    """
    if mode not in IRREGULAR_MODES:
        raise ValueError(f"unknown irregular mode {mode!r}; expected one of {IRREGULAR_MODES}")
    if mode == "off":
        return IrregularGeometry(empty_wireframe(), None, mode, xray)

    irr = gmap.irregular_elements(include_boundary=include_boundary)
    edge_ids = irr.edge_ids
    if len(edge_ids) == 0:
        return IrregularGeometry(empty_wireframe(), None, mode, xray)

    vcolors = VALENCE_COLORS if valence_colors is None else valence_colors
    segments = [gmap.mesh.vertices[gmap.edges[edge_ids]]]
    colors = [
        np.array([vcolors.get(int(v), other_color) for v in irr.edge_valence])
    ]
    opacity = [np.ones(len(edge_ids))]

    if mode in ("barbed", "paper"):
        endpoints = np.unique(gmap.edges[edge_ids].ravel())
        extra = np.unique(
            np.concatenate(
                [
                    gmap.vertex_edge_ids[gmap.vertex_edge_offsets[v]:gmap.vertex_edge_offsets[v + 1]]
                    for v in endpoints
                ]
            )
        )
        extra = np.setdiff1d(extra, edge_ids)
        if len(extra):
            segments.append(gmap.mesh.vertices[gmap.edges[extra]])
            colors.append(np.broadcast_to(np.asarray(BARB_COLOR), (len(extra), 3)).copy())
            opacity.append(np.full(len(extra), 0.8))

    wire = Wireframe(np.vstack(segments), np.concatenate(opacity), np.vstack(colors))

    faces = None
    if mode == "paper":
        face_ids = np.unique(
            np.concatenate(
                [
                    gmap.edge_face_ids[gmap.edge_face_offsets[e]:gmap.edge_face_offsets[e + 1]]
                    for e in edge_ids
                ]
            )
        )
        quads = gmap.mesh.vertices[gmap.faces[face_ids]]        # (K, 4, 3)
        centroid = quads.mean(axis=1, keepdims=True)
        # inset corners toward the centroid by a fraction of the inradius
        edge_mids = (quads + np.roll(quads, -1, axis=1)) / 2.0
        inradius = np.linalg.norm(edge_mids - centroid, axis=2).min(axis=1, keepdims=True)
        towards = centroid - quads
        dist = np.linalg.norm(towards, axis=2, keepdims=True)
        shift = np.divide(towards, dist, out=np.zeros_like(towards), where=dist > 0)
        quads = quads + shift * (PAPER_FACE_INSET * inradius[..., None])
        normals = _quad_normals(quads)
        positions = quads.reshape(-1, 3)
        color = np.broadcast_to(np.asarray(PAPER_FACE_COLOR), (len(positions), 3)).copy()
        faces = SurfaceMesh(
            positions,
            np.repeat(normals, 4, axis=0),
            color,
            np.ones(len(positions)),
            _quads_to_triangles(len(face_ids)),
            np.stack([np.full(2 * len(face_ids), INVALID, dtype=np.int64),
                      np.repeat(face_ids, 2)], axis=1),
            "flat",
            two_sided=True,
        )
    return IrregularGeometry(wire, faces, mode, xray)


# ---------------------------------------------------------------------------
# picking
# ---------------------------------------------------------------------------

def pick(surface: SurfaceMesh, origin, direction) -> tuple[int, int, float] | None:
    """Nearest triangle hit along a ray; returns (cell id, face id, t)."""
    if surface.num_triangles == 0:
        return None
    o = np.asarray(origin, dtype=np.float64).reshape(3)
    d = np.asarray(direction, dtype=np.float64).reshape(3)
    d = d / np.linalg.norm(d)
    v0 = surface.positions[surface.triangles[:, 0]]
    e1 = surface.positions[surface.triangles[:, 1]] - v0
    e2 = surface.positions[surface.triangles[:, 2]] - v0
    pvec = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, pvec)
    ok = np.abs(det) > 1e-14
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    tvec = o - v0
    u = np.einsum("ij,ij->i", tvec, pvec) * inv
    qvec = np.cross(tvec, e1)
    v = np.einsum("j,ij->i", d, qvec) * inv
    t = np.einsum("ij,ij->i", e2, qvec) * inv
    mask = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 1e-12)
    if not mask.any():
        return None
    idx = np.nonzero(mask)[0]
    best = idx[np.argmin(t[idx])]
    return int(surface.tri_source[best, 0]), int(surface.tri_source[best, 1]), float(t[best])


# ---------------------------------------------------------------------------
# watertightness check (shared by tests and debugging)
# ---------------------------------------------------------------------------

def boundary_edge_count(surface: SurfaceMesh) -> int:
    """Number of undirected edges with an odd triangle count after welding
    vertices by exact position."""
    if surface.num_triangles == 0:
        return 0
    keys = np.ascontiguousarray(surface.positions).view(
        np.dtype((np.void, surface.positions.dtype.itemsize * 3))
    ).ravel()
    _, remap = np.unique(keys, return_inverse=True)
    tris = remap[surface.triangles]
    edges = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    _, counts = np.unique(edges, axis=0, return_counts=True)
    return int((counts % 2 != 0).sum())
