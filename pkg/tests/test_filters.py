import math

import numpy as np
import pytest

import oracles
from hexview.filters import (
    QUALITY_NULL_THRESHOLD,
    FilterParams,
    NoHiddenCellError,
    Plane,
    compose,
    dilate,
    erode,
    manual_edit,
    peel_depth_from_slider,
    peel_filter,
    plane_filter,
    plane_from_view,
    plane_offset_from_slider,
    quality_filter,
    quality_threshold_from_slider,
    regularize,
)
from hexview.gmap import build_gmap
from hexview.quality import evaluate_metric

from conftest import grid_mesh, subgrid_mesh


def _params(**kw):
    return FilterParams(**kw)


class TestPlaneFilter:
    def test_barycenter_on_plane_stays_visible(self, cube):
        g = build_gmap(cube)
        flags = plane_filter(g, Plane(np.array([1.0, 0, 0]), 0.5, True))
        assert not flags.any()

    def test_two_cube_left_hidden(self):
        g = build_gmap(grid_mesh(2, 1, 1))
        flags = plane_filter(g, Plane(np.array([1.0, 0, 0]), 1.0, True))
        assert flags.tolist() == [True, False]

    def test_disabled_plane_hides_nothing(self, grid333):
        g = build_gmap(grid333)
        flags = plane_filter(g, Plane(np.array([1.0, 0, 0]), 100.0, False))
        assert not flags.any()

    def test_offset_monotone(self, grid333):
        g = build_gmap(grid333)
        n = np.array([0.3, 0.5, 0.8])
        n /= np.linalg.norm(n)
        prev = np.zeros(27, dtype=bool)
        for t in np.linspace(0, 1, 9):
            off = plane_offset_from_slider(g, n, float(t))
            cur = plane_filter(g, Plane(n, off, True))
            assert (prev <= cur).all()  # sweeping never reveals
            prev = cur

    def test_slider_extremes(self, grid333):
        g = build_gmap(grid333)
        n = np.array([0.3, -0.5, 0.8])
        n /= np.linalg.norm(n)
        lo = plane_offset_from_slider(g, n, 0.0)
        hi = plane_offset_from_slider(g, n, 1.0)
        assert not plane_filter(g, Plane(n, lo, True)).any()
        assert plane_filter(g, Plane(n, hi, True)).all()


class TestPeelFilter:
    def test_zero_depth_hides_nothing(self, grid333):
        depths = build_gmap(grid333).peel_depths()
        assert not peel_filter(depths, 0).any()

    def test_grid333_depth1(self, grid333):
        depths = build_gmap(grid333).peel_depths()
        flags = peel_filter(depths, 1)
        assert flags.sum() == 26

    def test_beyond_max_hides_all(self, grid333):
        g = build_gmap(grid333)
        depths = g.peel_depths()
        min_depth = peel_depth_from_slider(int(depths.max()), 1.0)
        assert peel_filter(depths, min_depth).all()

    def test_monotone(self, grid333):
        depths = build_gmap(grid333).peel_depths()
        prev = peel_filter(depths, 0)
        for d in range(1, 4):
            cur = peel_filter(depths, d)
            assert (prev <= cur).all()
            prev = cur


class TestQualityFilter:
    def test_fig2_scenario_raw_threshold(self):
        mesh = grid_mesh(4, 4, 3, jitter=0.28, seed=13)
        field = evaluate_metric(mesh, "SJ")
        from hexview.quality import phi

        threshold = float(phi("SJ", 0.96, field.q_min, field.q_max))
        hidden = quality_filter(field.normalized, threshold)
        visible_sj = field.raw[~hidden]
        assert (visible_sj < 0.96).all()
        assert hidden.sum() == int((field.raw >= 0.96).sum())

    def test_threshold_zero_hides_all(self):
        mesh = grid_mesh(2, 2, 2, jitter=0.2, seed=3)
        field = evaluate_metric(mesh, "SJ")
        assert quality_filter(field.normalized, 0.0).all()

    def test_threshold_above_one_hides_none(self):
        mesh = grid_mesh(2, 2, 2)
        field = evaluate_metric(mesh, "SJ")
        assert not quality_filter(field.normalized, QUALITY_NULL_THRESHOLD).any()

    def test_slider_space_monotone(self):
        mesh = grid_mesh(3, 3, 2, jitter=0.25, seed=8)
        normalized = evaluate_metric(mesh, "SJ").normalized
        prev = quality_filter(normalized, quality_threshold_from_slider(0.0))
        for s in np.linspace(0.1, 1.0, 10):
            cur = quality_filter(normalized, quality_threshold_from_slider(float(s)))
            assert (prev <= cur).all()
            prev = cur

    def test_slider_extremes(self):
        mesh = grid_mesh(3, 3, 2, jitter=0.25, seed=8)
        normalized = evaluate_metric(mesh, "SJ").normalized
        assert not quality_filter(normalized, quality_threshold_from_slider(0.0)).any()
        right = quality_filter(normalized, quality_threshold_from_slider(1.0))
        assert (right == (normalized > 0)).all()


class TestRegularize:
    def test_identity_at_zero(self, grid333):
        g = build_gmap(grid333)
        flags = np.zeros(27, dtype=bool)
        flags[13] = True
        assert (regularize(g, flags, 0) == flags).all()

    def test_empty_set_stays_empty(self, grid333):
        g = build_gmap(grid333)
        flags = np.zeros(27, dtype=bool)
        for n in range(6):
            assert not regularize(g, flags, n).any()

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(21)
        mesh = grid_mesh(6, 6, 6)
        g = build_gmap(mesh)
        bary = mesh.barycenters()
        normal = np.array([0.43, 0.62, 0.30])
        normal /= np.linalg.norm(normal)
        flags = bary @ normal - 5.1 < 0
        for n in (1, 2):
            got = set(np.nonzero(regularize(g, flags, n))[0].tolist())
            want = oracles.regularize(
                mesh.cells.tolist(), set(np.nonzero(flags)[0].tolist()), n
            )
            assert got == want

    def test_idempotent(self):
        mesh = grid_mesh(5, 5, 5)
        g = build_gmap(mesh)
        rng = np.random.default_rng(3)
        flags = rng.random(mesh.num_cells) < 0.35
        for n in (1, 2, 3):
            once = regularize(g, flags, n)
            twice = regularize(g, once, n)
            assert (once == twice).all(), n

    def test_dilate_erode_order_monotone(self):
        mesh = grid_mesh(4, 4, 4)
        g = build_gmap(mesh)
        rng = np.random.default_rng(5)
        small = rng.random(mesh.num_cells) < 0.2
        big = small | (rng.random(mesh.num_cells) < 0.2)
        assert (dilate(g, small) <= dilate(g, big)).all()
        assert (erode(g, small) <= erode(g, big)).all()


class TestManualEdits:
    def _state(self, mesh, **kw):
        g = build_gmap(mesh)
        state = compose(g, _params(**kw), g.peel_depths(), None)
        return g, state

    def test_dig_hides_cell(self, cube):
        g, state = self._state(cube)
        face = int(np.nonzero(g.face_boundary)[0][0])
        params = manual_edit(g, state, "dig", face)
        state2 = compose(g, params, g.peel_depths(), None)
        assert state2.hidden.tolist() == [True]

    def test_undig_after_dig_restores(self):
        mesh = grid_mesh(2, 1, 1)
        g, state = self._state(mesh)
        face = int(np.nonzero(g.face_boundary)[0][0])
        params = manual_edit(g, state, "dig", face)
        state2 = compose(g, params, g.peel_depths(), None)
        params = manual_edit(g, state2, "undig", face)
        state3 = compose(g, params, g.peel_depths(), None)
        assert state3.hidden.tolist() == state.hidden.tolist()

    def test_undig_without_hidden_cell_raises(self, cube):
        g, state = self._state(cube)
        face = int(np.nonzero(g.face_boundary)[0][0])
        with pytest.raises(NoHiddenCellError):
            manual_edit(g, state, "undig", face)

    def test_isolate(self, grid333):
        g, state = self._state(grid333)
        params = manual_edit(g, state, "isolate", 5)
        state2 = compose(g, params, g.peel_depths(), None)
        assert state2.hidden.sum() == 26
        assert not state2.hidden[5]

    def test_isolate_then_undig_reveals_neighbor(self, grid333):
        g, state = self._state(grid333)
        params = manual_edit(g, state, "isolate", 13)  # center cell
        state2 = compose(g, params, g.peel_depths(), None)
        faces, sides = g.current_boundary_faces(state2.hidden)
        assert (sides == 13).all() and len(faces) == 6
        params = manual_edit(g, state2, "undig", int(faces[0]))
        state3 = compose(g, params, g.peel_depths(), None)
        assert state3.hidden.sum() == 25

    def test_undug_overrides_all_hiding(self, grid333):
        g = build_gmap(grid333)
        params = _params(peel_min_depth=5, undug=[13])
        state = compose(g, params, g.peel_depths(), None)
        assert not state.hidden[13]
        assert state.hidden.sum() == 26


class TestCompose:
    def test_neutral_params_all_visible(self):
        mesh = subgrid_mesh(3, 3, 3, keep=0.8, seed=2)
        g = build_gmap(mesh)
        state = compose(g, _params(), g.peel_depths(), None)
        assert not state.hidden.any()

    def test_plane_only_equals_plane_filter(self, grid333):
        g = build_gmap(grid333)
        plane = Plane(np.array([0.0, 1.0, 0.0]), 1.2, True)
        state = compose(g, _params(plane=plane), g.peel_depths(), None)
        assert (state.hidden == plane_filter(g, plane)).all()

    def test_union_oracle(self):
        mesh = grid_mesh(4, 4, 3, jitter=0.22, seed=17)
        g = build_gmap(mesh)
        field = evaluate_metric(mesh, "SJ")
        plane = Plane(np.array([0.3, 0.7, 0.2]), 1.5, True)
        params = _params(plane=plane, peel_min_depth=0, quality_threshold=0.97)
        state = compose(g, params, g.peel_depths(), field.normalized)
        want = plane_filter(g, plane) | quality_filter(field.normalized, 0.97)
        assert (state.hidden == want).all()

    def test_quality_independent_of_regularization(self):
        # the quality set joins after morphology, never feeds it
        mesh = grid_mesh(5, 5, 2, jitter=0.2, seed=23)
        g = build_gmap(mesh)
        field = evaluate_metric(mesh, "SJ")
        plane = Plane(np.array([1.0, 0.0, 0.0]), 2.3, True)
        params = _params(plane=plane, regularization=2, quality_threshold=0.9)
        state = compose(g, params, g.peel_depths(), field.normalized)
        want = regularize(g, plane_filter(g, plane), 2) | quality_filter(field.normalized, 0.9)
        assert (state.hidden == want).all()


class TestPlaneFromView:
    def test_exact_inversion(self):
        cur = Plane(np.array([1.0, 0.0, 0.0]), 0.7, True)
        out = plane_from_view(np.array([-1.0, 0.0, 0.0]), cur)
        assert np.allclose(out.normal, [-1, 0, 0])
        assert out.offset == -0.7

    def test_inversion_within_tolerance(self):
        cur = Plane(np.array([1.0, 0.0, 0.0]), 0.7, True)
        ang = math.radians(15)
        view = np.array([-math.cos(ang), math.sin(ang), 0.0])
        out = plane_from_view(view, cur)
        assert np.allclose(out.normal, [-1, 0, 0])
        assert out.offset == -0.7

    def test_beyond_tolerance_uses_view(self):
        cur = Plane(np.array([1.0, 0.0, 0.0]), 0.7, True)
        ang = math.radians(25)
        view = np.array([-math.cos(ang), math.sin(ang), 0.0])
        out = plane_from_view(view, cur)
        assert np.allclose(out.normal, view / np.linalg.norm(view))

    def test_axis_snap(self):
        cur = Plane(np.array([0.0, 0.0, 1.0]), 0.0, True)
        view = np.array([0.9, 0.3, 0.3])
        view /= np.linalg.norm(view)
        out = plane_from_view(view, cur, snap_axis=True)
        assert out.normal.tolist() == [1.0, 0.0, 0.0]

    def test_disabled_plane_enables_at_view(self):
        cur = Plane(np.array([1.0, 0.0, 0.0]), 0.2, False)
        view = np.array([0.0, 0.0, -1.0])
        out = plane_from_view(view, cur)
        assert out.enabled
        assert np.allclose(out.normal, [0, 0, -1])


class TestRandomizedProperties:
    """Per-filter monotonicity / extremes / morphology on random meshes."""

    def test_property_sweep(self):
        rng = np.random.default_rng(99)
        cases = 0
        for seed in range(12):
            mesh = grid_mesh(
                int(rng.integers(2, 5)), int(rng.integers(2, 5)), int(rng.integers(2, 5)),
                jitter=0.15, seed=seed,
            )
            g = build_gmap(mesh)
            depths = g.peel_depths()
            normalized = evaluate_metric(mesh, "SJ").normalized
            n = np.asarray(rng.standard_normal(3))
            n /= np.linalg.norm(n)
            prev_plane = np.zeros(mesh.num_cells, dtype=bool)
            prev_peel = np.zeros(mesh.num_cells, dtype=bool)
            prev_quality = np.zeros(mesh.num_cells, dtype=bool)
            for t in np.linspace(0.0, 1.0, 6):
                cur = plane_filter(g, Plane(n, plane_offset_from_slider(g, n, float(t)), True))
                assert (prev_plane <= cur).all()
                prev_plane = cur
                cur = peel_filter(depths, peel_depth_from_slider(int(depths.max()), float(t)))
                assert (prev_peel <= cur).all()
                prev_peel = cur
                cur = quality_filter(normalized, quality_threshold_from_slider(float(t)))
                assert (prev_quality <= cur).all()
                prev_quality = cur
                cases += 3
            assert not plane_filter(
                g, Plane(n, plane_offset_from_slider(g, n, 0.0), True)
            ).any()
            assert plane_filter(g, Plane(n, plane_offset_from_slider(g, n, 1.0), True)).all()
            flags = rng.random(mesh.num_cells) < 0.3
            strength = int(rng.integers(1, 4))
            once = regularize(g, flags, strength)
            assert (regularize(g, once, strength) == once).all()
            cases += 3
        assert cases >= 200
