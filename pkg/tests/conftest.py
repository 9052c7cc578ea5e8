import sys
from pathlib import Path

import numpy as np
import pytest

from hexview.mesh import HexMesh

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def grid_mesh(nx, ny, nz, spacing=1.0, jitter=0.0, seed=0, name="grid"):
    """Structured grid of nx*ny*nz cells; optional interior-vertex jitter."""
    xs = np.arange(nx + 1) * spacing
    ys = np.arange(ny + 1) * spacing
    zs = np.arange(nz + 1) * spacing
    gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
    verts = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1).astype(float)

    def vid(i, j, k):
        return (i * (ny + 1) + j) * (nz + 1) + k

    cells = []
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                cells.append(
                    [
                        vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k),
                        vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j + 1, k + 1),
                        vid(i, j + 1, k + 1),
                    ]
                )
    if jitter:
        rng = np.random.default_rng(seed)
        verts = verts + rng.uniform(-jitter, jitter, verts.shape) * spacing
    return HexMesh(verts, np.asarray(cells, dtype=np.int64), name=name)


def subgrid_mesh(nx, ny, nz, keep=0.7, seed=0, jitter=0.0, name="subgrid"):
    """Random sub-selection of a grid's cells (at least one kept)."""
    mesh = grid_mesh(nx, ny, nz, jitter=jitter, seed=seed + 1, name=name)
    rng = np.random.default_rng(seed)
    mask = rng.random(mesh.num_cells) < keep
    if not mask.any():
        mask[0] = True
    return HexMesh(mesh.vertices, mesh.cells[mask], name=name)


def single_cube(name="cube"):
    return grid_mesh(1, 1, 1, name=name)


def mirrored_cube():
    """Unit cube with top and bottom corner quads swapped (inverted cell)."""
    mesh = single_cube("mirrored")
    cells = mesh.cells.copy()
    cells[0] = np.concatenate([cells[0, 4:], cells[0, :4]])
    return HexMesh(mesh.vertices, cells, name="mirrored")


def pie_mesh(sectors=3, name="pie"):
    """Cells arranged around a central axis edge; the axis edge is interior
    with valence equal to ``sectors``."""
    angles = np.linspace(0.0, 2 * np.pi, 2 * sectors, endpoint=False)
    ring = np.stack([np.cos(angles), np.sin(angles), np.zeros_like(angles)], axis=1)
    base = np.vstack([[0.0, 0.0, 0.0], ring])            # center + ring points
    verts = np.vstack([base, base + (0.0, 0.0, 1.0)])
    top = len(base)
    cells = []
    for s in range(sectors):
        a = 1 + (2 * s) % (2 * sectors)
        m = 1 + (2 * s + 1) % (2 * sectors)
        b = 1 + (2 * s + 2) % (2 * sectors)
        quad = [0, a, m, b]
        cells.append(quad + [v + top for v in quad])
    return HexMesh(verts, np.asarray(cells, dtype=np.int64), name=name)


def mesh_to_medit(mesh: HexMesh) -> bytes:
    lines = ["MeshVersionFormatted 2", "Dimension 3", "Vertices", str(mesh.num_vertices)]
    for v in mesh.vertices:
        lines.append(f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g} 0")
    lines += ["Hexahedra", str(mesh.num_cells)]
    for c in mesh.cells:
        lines.append(" ".join(str(int(i) + 1) for i in c) + " 0")
    lines.append("End")
    return ("\n".join(lines) + "\n").encode()


@pytest.fixture
def cube():
    return single_cube()


@pytest.fixture
def grid333():
    return grid_mesh(3, 3, 3)


@pytest.fixture
def data_dir():
    return DATA
