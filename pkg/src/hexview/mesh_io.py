"""Import of MEDIT (.mesh) and legacy VTK (.vtk) hex meshes, zip archives,
and export of extracted surfaces as OBJ/PLY.

Both importers are ASCII only and keep only hexahedral elements; every
other element section/cell type is skipped.  Vertex indices are converted
to 0-based and corners are stored in the canonical order of
:mod:`hexview.mesh` (both formats already list bottom quad then top quad,
so no permutation is applied).  Orientation is preserved as found in the
file; inverted cells survive import so that quality metrics can flag them.
"""

from __future__ import annotations

import io
import zipfile
from dataclasses import dataclass

import numpy as np

from .mesh import HexMesh, MeshError

SUPPORTED_EXTENSIONS = (".mesh", ".vtk")

# Non-hex MEDIT element sections we know how to skip: keyword -> values per line
# (vertex indices + reference tag).
_MEDIT_SKIP = {
    "edges": 3,
    "triangles": 4,
    "quadrilaterals": 5,
    "tetrahedra": 5,
    "pentahedra": 7,
    "prisms": 7,
    "pyramids": 6,
    "corners": 1,
    "ridges": 1,
    "requiredvertices": 1,
    "requirededges": 1,
    "normals": 3,
    "tangents": 3,
}


class ParseError(MeshError):
    """Malformed mesh file; carries the 1-based source line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ArchiveError(MeshError):
    """Unreadable or empty mesh archive."""


@dataclass
class MeshSource:
    """Raw mesh bytes with a declared (or sniffable) format."""

    data: bytes
    fmt: str = "auto"  # "medit" | "vtk" | "auto"
    name: str = ""


class _Tokens:
    """Whitespace token stream over text that remembers line numbers."""

    def __init__(self, text: str):
        self._items: list[tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            hash_pos = line.find("#")
            if hash_pos >= 0:
                line = line[:hash_pos]
            for tok in line.split():
                self._items.append((tok, lineno))
        self._pos = 0
        self.line = 1

    def __bool__(self) -> bool:
        return self._pos < len(self._items)

    def peek(self) -> str | None:
        if self._pos < len(self._items):
            return self._items[self._pos][0]
        return None

    def next(self, what: str) -> str:
        if self._pos >= len(self._items):
            raise ParseError(f"unexpected end of file while reading {what}", self.line)
        tok, self.line = self._items[self._pos]
        self._pos += 1
        return tok

    def next_int(self, what: str) -> int:
        tok = self.next(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer for {what}, got {tok!r}", self.line) from None

    def next_float(self, what: str) -> float:
        tok = self.next(what)
        try:
            return float(tok)
        except ValueError:
            raise ParseError(f"expected number for {what}, got {tok!r}", self.line) from None


def _decode(source: bytes) -> str:
    try:
        return source.decode("utf-8")
    except UnicodeDecodeError:
        return source.decode("latin-1")


def _finalize(vertices, cells, name, warnings, line_of_cells) -> HexMesh:
    verts = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    raw = np.asarray(cells, dtype=np.int64).reshape(-1, 8)
    mesh = HexMesh(verts, raw, name=name, warnings=warnings)
    try:
        mesh.validate()
    except MeshError as exc:
        raise ParseError(str(exc), line_of_cells) from None
    if mesh.num_cells == 0:
        mesh.warnings.append("no hexahedra found")
    return mesh


def parse_medit(source: bytes, name: str = "") -> HexMesh:
    """Parse an ASCII MEDIT file, keeping only the Hexahedra section."""
    toks = _Tokens(_decode(source))
    first = toks.next("header keyword")
    if first.lower() != "meshversionformatted":
        raise ParseError(f"expected MeshVersionFormatted, got {first!r}", toks.line)
    toks.next_int("mesh version")

    dim = 3
    vertices: list[float] = []
    cells: list[int] = []
    warnings: list[str] = []
    seen_vertices = False
    hexa_line = None

    while toks:
        keyword = toks.next("section keyword").lower()
        if keyword == "end":
            break
        if keyword == "dimension":
            dim = toks.next_int("dimension")
            if dim != 3:
                raise ParseError(f"unsupported dimension {dim}", toks.line)
        elif keyword == "vertices":
            count = toks.next_int("vertex count")
            for _ in range(count):
                for axis in ("x", "y", "z"):
                    vertices.append(toks.next_float(f"vertex {axis}"))
                toks.next("vertex reference")
            seen_vertices = True
        elif keyword == "hexahedra":
            count = toks.next_int("hexahedron count")
            hexa_line = toks.line
            for _ in range(count):
                for k in range(8):
                    cells.append(toks.next_int(f"hexahedron corner {k}") - 1)
                toks.next("hexahedron reference")
        elif keyword in _MEDIT_SKIP:
            count = toks.next_int(f"{keyword} count")
            for _ in range(count * _MEDIT_SKIP[keyword]):
                toks.next(f"{keyword} entry")
        else:
            raise ParseError(f"unknown MEDIT section {keyword!r}", toks.line)

    if not seen_vertices:
        raise ParseError("missing Vertices section", toks.line)
    return _finalize(vertices, cells, name, warnings, hexa_line)


VTK_HEXAHEDRON = 12


def parse_vtk(source: bytes, name: str = "") -> HexMesh:
    """Parse a legacy ASCII VTK unstructured grid, keeping hexahedra only."""
    text = _decode(source)
    lines = text.splitlines()
    if not lines or not lines[0].lstrip().startswith("# vtk DataFile"):
        raise ParseError("missing '# vtk DataFile' header", 1)
    # line 2 is a free-form title
    mode_line = None
    for lineno in range(2, min(len(lines), 6)):
        stripped = lines[lineno].strip().upper()
        if stripped in ("ASCII", "BINARY"):
            mode_line = lineno
            if stripped == "BINARY":
                raise ParseError("binary VTK is not supported; convert to ASCII", lineno + 1)
            break
    if mode_line is None:
        raise ParseError("missing ASCII/BINARY marker", 3)

    toks = _Tokens("\n".join([""] * (mode_line + 1) + lines[mode_line + 1:]))
    kw = toks.next("DATASET keyword").upper()
    if kw != "DATASET":
        raise ParseError(f"expected DATASET, got {kw!r}", toks.line)
    ds = toks.next("dataset type").upper()
    if ds != "UNSTRUCTURED_GRID":
        raise ParseError(f"unsupported dataset type {ds!r}", toks.line)

    points: np.ndarray | None = None
    conn: list[list[int]] = []
    cell_types: list[int] = []
    cells_line = None
    warnings: list[str] = []

    while toks:
        section = toks.next("section keyword").upper()
        if section == "POINTS":
            n = toks.next_int("point count")
            toks.next("point data type")
            flat = [toks.next_float("point coordinate") for _ in range(3 * n)]
            points = np.asarray(flat, dtype=np.float64).reshape(-1, 3)
        elif section == "CELLS":
            n = toks.next_int("cell count")
            total = toks.next_int("cell index total")
            cells_line = toks.line
            read = 0
            for _ in range(n):
                k = toks.next_int("cell corner count")
                conn.append([toks.next_int("cell corner") for _ in range(k)])
                read += 1 + k
            if read != total:
                raise ParseError(
                    f"CELLS declares {total} values but contains {read}", toks.line
                )
        elif section == "CELL_TYPES":
            n = toks.next_int("cell type count")
            cell_types = [toks.next_int("cell type") for _ in range(n)]
        elif section in ("POINT_DATA", "CELL_DATA", "FIELD"):
            break  # attributes are not imported
        else:
            raise ParseError(f"unknown VTK section {section!r}", toks.line)

    if points is None:
        raise ParseError("missing POINTS section", toks.line)
    if len(cell_types) != len(conn):
        raise ParseError(
            f"CELL_TYPES declares {len(cell_types)} cells but CELLS holds {len(conn)}",
            toks.line,
        )

    hexes = []
    for c, t in zip(conn, cell_types):
        if t != VTK_HEXAHEDRON:
            continue
        if len(c) != 8:
            raise ParseError(f"hexahedron with {len(c)} corners", cells_line)
        hexes.append(c)
    return _finalize(points.ravel(), [i for cell in hexes for i in cell], name, warnings, cells_line)


def _sniff(source: MeshSource) -> str:
    lowered = source.name.lower()
    if lowered.endswith(".mesh"):
        return "medit"
    if lowered.endswith(".vtk"):
        return "vtk"
    head = source.data[:256].lstrip()
    if head.startswith(b"# vtk"):
        return "vtk"
    if head.lower().startswith(b"meshversionformatted"):
        return "medit"
    raise MeshError(
        f"unrecognized mesh format for {source.name or '<bytes>'} "
        "(expected MEDIT .mesh or legacy VTK .vtk)"
    )


def load_mesh(source: MeshSource) -> HexMesh:
    """Dispatch to the right parser based on declared format or sniffing."""
    fmt = source.fmt
    if fmt == "auto":
        fmt = _sniff(source)
    if fmt == "medit":
        return parse_medit(source.data, name=source.name)
    if fmt == "vtk":
        return parse_vtk(source.data, name=source.name)
    raise MeshError(f"unknown format {fmt!r} (expected medit, vtk or auto)")


def read_archive(data: bytes) -> tuple[list[tuple[str, HexMesh]], list[str]]:
    """Parse every supported entry of a zip archive, in name order.

    Returns (named meshes, skip warnings).  Raises ArchiveError for a
    corrupt container or when nothing in it parses.
    """
    try:
        zf = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise ArchiveError(f"not a readable zip archive: {exc}") from exc

    meshes: list[tuple[str, HexMesh]] = []
    skipped: list[str] = []
    with zf:
        for entry in sorted(zf.namelist()):
            if entry.endswith("/"):
                continue
            if not entry.lower().endswith(SUPPORTED_EXTENSIONS):
                skipped.append(f"skipped unsupported entry {entry!r}")
                continue
            raw = zf.read(entry)
            meshes.append((entry, load_mesh(MeshSource(raw, "auto", entry))))
    if not meshes:
        raise ArchiveError("archive contains no parseable meshes")
    return meshes, skipped


def write_surface(surface, fmt: str, include_ao: bool = False) -> bytes:
    """Serialize a SurfaceMesh (positions, normals, colors, triangles).

    PLY output can carry the per-vertex ambient-occlusion slot as an
    extra float property named ``ao``.
    """
    if len(surface.positions) == 0 or len(surface.triangles) == 0:
        raise MeshError("cannot export an empty surface")
    if fmt == "obj":
        return _write_obj(surface)
    if fmt == "ply":
        return _write_ply(surface, include_ao)
    raise MeshError(f"unknown surface format {fmt!r} (expected obj or ply)")


def _write_obj(surface) -> bytes:
    out = ["# hexview surface export"]
    for p, c in zip(surface.positions, surface.colors):
        out.append(f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g} {c[0]:.6g} {c[1]:.6g} {c[2]:.6g}")
    for n in surface.normals:
        out.append(f"vn {n[0]:.9g} {n[1]:.9g} {n[2]:.9g}")
    for t in surface.triangles:
        a, b, c = (int(i) + 1 for i in t)
        out.append(f"f {a}//{a} {b}//{b} {c}//{c}")
    return ("\n".join(out) + "\n").encode()


def _write_ply(surface, include_ao: bool = False) -> bytes:
    n_v = len(surface.positions)
    n_f = len(surface.triangles)
    head = [
        "ply",
        "format ascii 1.0",
        f"element vertex {n_v}",
        "property double x",
        "property double y",
        "property double z",
        "property double nx",
        "property double ny",
        "property double nz",
        "property float red",
        "property float green",
        "property float blue",
    ]
    if include_ao:
        head.append("property float ao")
    head += [
        f"element face {n_f}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    body = []
    for i in range(n_v):
        p, n, c = surface.positions[i], surface.normals[i], surface.colors[i]
        line = (
            f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g} "
            f"{n[0]:.9g} {n[1]:.9g} {n[2]:.9g} "
            f"{c[0]:.6g} {c[1]:.6g} {c[2]:.6g}"
        )
        if include_ao:
            line += f" {surface.ao[i]:.6g}"
        body.append(line)
    for t in surface.triangles:
        body.append(f"3 {int(t[0])} {int(t[1])} {int(t[2])}")
    return ("\n".join(head + body) + "\n").encode()
