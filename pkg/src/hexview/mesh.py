"""Hexahedral mesh container and the canonical corner conventions.

A hexahedral cell is stored as 8 vertex indices: corners 0..3 form the
bottom quad (counter-clockwise when seen from outside the bottom face)
and corners 4..7 the matching top quad.  This is the VTK hexahedron
ordering; MEDIT hexahedra use the same bottom-then-top layout, so both
importers map indices one-to-one.

Every module downstream of import uses the fixed face and edge tables
below; they are part of the public contract (see docs/conventions.md).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Local faces of a cell, corners listed counter-clockwise seen from
# outside the cell (right-hand normal points outward).
FACES = np.array(
    [
        (0, 3, 2, 1),  # bottom
        (4, 5, 6, 7),  # top
        (0, 1, 5, 4),
        (1, 2, 6, 5),
        (2, 3, 7, 6),
        (3, 0, 4, 7),
    ],
    dtype=np.int64,
)

# Local edges of a cell: 4 bottom, 4 top, 4 vertical.
EDGES = np.array(
    [
        (0, 1), (1, 2), (2, 3), (3, 0),
        (4, 5), (5, 6), (6, 7), (7, 4),
        (0, 4), (1, 5), (2, 6), (3, 7),
    ],
    dtype=np.int64,
)


def _local_face_edges() -> np.ndarray:
    """For each (local face, edge-in-face) pair, the local cell-edge index."""
    key = {tuple(sorted(e)): i for i, e in enumerate(EDGES.tolist())}
    out = np.empty((6, 4), dtype=np.int64)
    for f, quad in enumerate(FACES.tolist()):
        for k in range(4):
            out[f, k] = key[tuple(sorted((quad[k], quad[(k + 1) % 4])))]
    return out


# FACE_EDGES[f, k] = local edge index of the k-th border edge of local face f
# (border edge k connects FACES[f, k] to FACES[f, (k+1) % 4]).
FACE_EDGES = _local_face_edges()


class MeshError(ValueError):
    """Invalid mesh content (bad connectivity, indices out of range)."""


@dataclass
class HexMesh:
    """Raw hexahedral mesh: vertex positions plus 8-corner cells."""

    vertices: np.ndarray  # (V, 3) float64
    cells: np.ndarray     # (C, 8) integer, canonical corner order
    name: str = ""
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=np.float64)
        self.cells = np.ascontiguousarray(self.cells, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise MeshError("vertices must be an (N, 3) array")
        if self.cells.size and (self.cells.ndim != 2 or self.cells.shape[1] != 8):
            raise MeshError("cells must be an (N, 8) array")
        if self.cells.size == 0:
            self.cells = self.cells.reshape(0, 8)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    def validate(self) -> None:
        """Check index ranges and per-cell connectivity degeneracy."""
        if self.cells.size:
            if self.cells.min() < 0 or self.cells.max() >= self.num_vertices:
                raise MeshError("cell vertex index out of range")
            sorted_corners = np.sort(self.cells, axis=1)
            if (sorted_corners[:, 1:] == sorted_corners[:, :-1]).any():
                bad = int(
                    np.nonzero((sorted_corners[:, 1:] == sorted_corners[:, :-1]).any(axis=1))[0][0]
                )
                raise MeshError(f"cell {bad} repeats a vertex index")

    def cell_corners(self) -> np.ndarray:
        """Corner coordinates per cell, shape (C, 8, 3)."""
        return self.vertices[self.cells]

    def barycenters(self) -> np.ndarray:
        """Mean of the 8 corners per cell, shape (C, 3)."""
        return self.cell_corners().mean(axis=1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Axis-aligned bounding box (lo, hi) over all vertices."""
        if self.num_vertices == 0:
            z = np.zeros(3)
            return z, z
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def bbox_diagonal(self) -> float:
        lo, hi = self.bounds()
        return float(np.linalg.norm(hi - lo))


def corner_tet_volumes(mesh: HexMesh) -> np.ndarray:
    """Signed volume of the tetrahedron (v0; v1-v0, v3-v0, v4-v0) per cell.

    Positive for a positively oriented cell in canonical corner order.
    """
    p = mesh.cell_corners()
    a = p[:, 1] - p[:, 0]
    b = p[:, 3] - p[:, 0]
    c = p[:, 4] - p[:, 0]
    return np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0
