"""hexview: hexahedral-mesh inspection toolkit.

Load MEDIT/VTK hex meshes, query their generalized-map connectivity,
evaluate per-cell quality metrics, filter cells to expose internal
structure, extract renderable boundary surfaces, bake object-space
ambient occlusion, render headlessly to PNG, and capture the whole
visualization state as a reproducible JSON snapshot embedded in images.
"""

from .mesh import EDGES, FACES, HexMesh, MeshError
from .mesh_io import MeshSource, load_mesh, parse_medit, parse_vtk, read_archive, write_surface
from .gmap import GMap, StructureError, build_gmap
from .quality import METRICS, QualityField, evaluate_metric, histogram, phi, phi_inv, summary
from .filters import FilterParams, FilterState, Plane, compose, plane_from_view, regularize
from .surface import (
    ExtractionOptions,
    SurfaceMesh,
    Wireframe,
    extract,
    extract_fissure,
    extract_flat,
    extract_rounded,
    irregular_geometry,
    pick,
    silhouette_mesh,
)
from .ao import AoAccumulator, ProbeSet, compute_ao, probe_directions
from .raster import Camera, RenderOptions, Scene, apply_colormap, render, render_histogram
from .snapshot import Status, embed_png, extract_png, parse, serialize
from .pipeline import derive_scene, render_status

__version__ = "0.1.0"
