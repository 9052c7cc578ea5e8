import numpy as np
import pytest

import oracles
from hexview.gmap import INVALID, StructureError, build_gmap
from hexview.mesh import HexMesh

from conftest import grid_mesh, pie_mesh, single_cube, subgrid_mesh


class TestBuild:
    def test_single_cube_counts(self, cube):
        g = build_gmap(cube)
        assert cube.num_vertices == 8
        assert len(g.edges) == 12
        assert len(g.faces) == 6
        assert g.num_darts == 48
        assert g.face_boundary.all()

    def test_two_cube_counts(self):
        g = build_gmap(grid_mesh(2, 1, 1))
        assert g.mesh.num_vertices == 12
        assert len(g.edges) == 20
        assert len(g.faces) == 11
        assert int((~g.face_boundary).sum()) == 1

    def test_non_manifold_face_rejected(self, cube):
        verts = np.vstack([cube.vertices, cube.vertices[4:] + (0.0, 0.0, 1.0), cube.vertices[:4] - (0.0, 0.0, 1.0)])
        cells = np.array(
            [
                [0, 1, 2, 3, 4, 5, 6, 7],
                [4, 5, 6, 7, 8, 9, 10, 11],   # stacked on the top face
                [12, 13, 14, 15, 4, 5, 6, 7],  # a third cell using the same face
            ]
        )
        with pytest.raises(StructureError, match="non-manifold"):
            build_gmap(HexMesh(verts, cells))

    def test_involutions_are_self_inverse(self):
        g = build_gmap(subgrid_mesh(3, 3, 3, keep=0.8, seed=3))
        ids = np.arange(g.num_darts)
        for i in range(4):
            a = g.alpha[:, i]
            valid = a != INVALID
            assert (g.alpha[a[valid], i] == ids[valid]).all()

    def test_alpha3_invalid_exactly_on_boundary(self, cube):
        g = build_gmap(cube)
        assert (g.alpha[:, 3] == INVALID).all()
        g2 = build_gmap(grid_mesh(2, 1, 1))
        on_boundary = g2.face_boundary[g2.dart_face]
        assert ((g2.alpha[:, 3] == INVALID) == on_boundary).all()

    def test_face_incidence_sums(self):
        g = build_gmap(grid_mesh(3, 2, 2))
        counts = (g.face_cells != INVALID).sum(axis=1)
        assert counts.sum() == 6 * g.mesh.num_cells
        assert set(counts.tolist()) <= {1, 2}

    def test_dart_count_formula(self):
        mesh = subgrid_mesh(4, 3, 2, keep=0.6, seed=1)
        g = build_gmap(mesh)
        assert g.num_darts == 48 * mesh.num_cells

    def test_matches_brute_force_tables(self):
        for seed in range(5):
            mesh = subgrid_mesh(3, 3, 3, keep=0.7, seed=seed)
            g = build_gmap(mesh)
            edges, faces = oracles.unify(mesh.cells.tolist())
            assert len(g.edges) == len(edges)
            assert len(g.faces) == len(faces)
            got = {tuple(sorted(e)): int(c) for e, c in zip(g.edges.tolist(), g.edge_cell_count)}
            want = {k: len(v) for k, v in edges.items()}
            assert got == want

    def test_empty_mesh_rejected(self):
        with pytest.raises(StructureError):
            build_gmap(HexMesh(np.zeros((8, 3)), np.zeros((0, 8), dtype=np.int64)))


class TestPeelDepths:
    def test_single_cube(self, cube):
        assert build_gmap(cube).peel_depths().tolist() == [0]

    def test_grid333_center(self, grid333):
        depths = build_gmap(grid333).peel_depths()
        assert (depths == 0).sum() == 26
        assert (depths == 1).sum() == 1

    def test_grid555_center_depth(self):
        depths = build_gmap(grid_mesh(5, 5, 5)).peel_depths()
        assert depths.max() == 2
        assert (depths == 2).sum() == 1

    def test_matches_brute_force(self):
        for seed in range(8):
            mesh = subgrid_mesh(4, 4, 4, keep=0.75, seed=seed)
            got = build_gmap(mesh).peel_depths().tolist()
            assert got == oracles.peel_depths(mesh.cells.tolist())


class TestIrregular:
    def test_grid_interior_empty(self):
        for n in (2, 3, 4):
            irr = build_gmap(grid_mesh(n, n, n)).irregular_elements()
            assert irr.is_empty()

    def test_single_cube_boundary_rule(self, cube):
        irr = build_gmap(cube).irregular_elements(include_boundary=True)
        assert len(irr.edge_ids) == 12
        assert (irr.edge_valence == 1).all()

    def test_pie_mesh_interior_valence3(self):
        mesh = pie_mesh(3)
        g = build_gmap(mesh)
        irr = g.irregular_elements()
        assert len(irr.edge_ids) == 1
        assert irr.edge_valence[0] == 3
        edge = set(g.edges[irr.edge_ids[0]].tolist())
        assert edge == {0, mesh.num_vertices // 2}  # the central axis edge

    def test_pie5_valence5(self):
        irr = build_gmap(pie_mesh(5)).irregular_elements()
        assert len(irr.edge_ids) == 1
        assert irr.edge_valence[0] == 5

    def test_matches_brute_force(self):
        for seed in range(5):
            for include in (False, True):
                mesh = subgrid_mesh(3, 3, 3, keep=0.65, seed=seed)
                g = build_gmap(mesh)
                irr = g.irregular_elements(include_boundary=include)
                got_edges = {tuple(sorted(g.edges[e].tolist())) for e in irr.edge_ids}
                got_verts = set(irr.vertex_ids.tolist())
                want_edges, want_verts = oracles.irregular(mesh.cells.tolist(), include)
                assert got_edges == want_edges
                assert got_verts == want_verts


class TestCurrentBoundary:
    def test_all_visible_cube(self, cube):
        g = build_gmap(cube)
        faces, sides = g.current_boundary_faces(np.zeros(1, dtype=bool))
        assert len(faces) == 6
        assert (sides == 0).all()

    def test_two_cube_one_hidden(self):
        g = build_gmap(grid_mesh(2, 1, 1))
        hidden = np.array([False, True])
        faces, sides = g.current_boundary_faces(hidden)
        assert len(faces) == 6
        assert (sides == 0).all()
        interior = int(np.nonzero(~g.face_boundary)[0][0])
        assert interior in faces.tolist()

    def test_all_hidden_empty(self, grid333):
        g = build_gmap(grid333)
        faces, _ = g.current_boundary_faces(np.ones(27, dtype=bool))
        assert len(faces) == 0

    def test_all_visible_equals_original_boundary(self):
        mesh = subgrid_mesh(3, 3, 3, keep=0.8, seed=11)
        g = build_gmap(mesh)
        faces, _ = g.current_boundary_faces(np.zeros(mesh.num_cells, dtype=bool))
        assert set(faces.tolist()) == set(np.nonzero(g.face_boundary)[0].tolist())

    def test_matches_brute_force(self):
        rng = np.random.default_rng(5)
        for seed in range(5):
            mesh = subgrid_mesh(3, 3, 2, keep=0.8, seed=seed)
            g = build_gmap(mesh)
            hidden = rng.random(mesh.num_cells) < 0.4
            faces, sides = g.current_boundary_faces(hidden)
            got = {
                tuple(sorted(g.faces[f].tolist())): int(c)
                for f, c in zip(faces, sides)
            }
            assert got == oracles.current_boundary(mesh.cells.tolist(), hidden)


def test_debug_tables_json_friendly(cube):
    import json

    g = build_gmap(cube)
    text = json.dumps(g.debug_tables())
    assert "boundary" in text
