import numpy as np
import pytest

from hexview.mesh import HexMesh
from hexview.quality import (
    METRICS,
    PhiFamily,
    UnknownMetricError,
    evaluate_metric,
    histogram,
    histogram_csv,
    phi,
    phi_inv,
    summary,
)

from conftest import grid_mesh, mirrored_cube

UNIT_CUBE_VALUES = {
    "DIA": 1.0, "DIS": 1.0, "ER": 1.0, "J": 1.0, "MER": 1.0, "MAAF": 1.0,
    "MEAF": 1.0, "ODD": 0.0, "SJ": 1.0, "SHA": 1.0, "SHE": 1.0, "SKE": 0.0,
    "STR": 1.0, "TAP": 0.0, "VOL": 1.0,
}


def _sample_range(metric_id, rng, n=1000):
    """Plausible (q_min, q_max) extrema and n in-range raw samples."""
    fam = METRICS[metric_id].family
    if fam is PhiFamily.IDENTITY:
        lo, hi = 0.0, 1.0
    elif fam is PhiFamily.CLAMP_NEGATIVE:
        lo, hi = -1.0, 1.0
    elif fam is PhiFamily.MIN_MAX:
        lo, hi = -2.5, 7.0
    elif fam is PhiFamily.MAX_TO_ONE:
        lo, hi = 1.0, 9.0
    else:
        lo, hi = 0.0, 4.0
    return lo, hi, rng.uniform(lo, hi, n)


class TestAnchors:
    def test_unit_cube_values(self, cube):
        for metric_id, expected in UNIT_CUBE_VALUES.items():
            raw = evaluate_metric(cube, metric_id).raw[0]
            assert abs(raw - expected) <= 1e-9, metric_id

    def test_mirrored_cube_sj(self):
        raw = evaluate_metric(mirrored_cube(), "SJ").raw[0]
        assert abs(raw - (-1.0)) <= 1e-9

    def test_single_cell_rss(self, cube):
        assert abs(evaluate_metric(cube, "RSS").raw[0] - 1.0) <= 1e-12

    def test_unknown_metric_lists_ids(self, cube):
        with pytest.raises(UnknownMetricError, match="SJ"):
            evaluate_metric(cube, "XX")


class TestProperties:
    def test_scale_covariance(self):
        invariant = ["SJ", "SHA", "SHE", "SKE", "TAP", "ODD", "ER", "MER",
                     "MAAF", "MEAF", "DIA", "STR"]
        mesh = grid_mesh(2, 2, 2, jitter=0.2, seed=4)
        s = 3.7
        scaled = HexMesh(mesh.vertices * s, mesh.cells)
        for metric_id in invariant:
            a = evaluate_metric(mesh, metric_id).raw
            b = evaluate_metric(scaled, metric_id).raw
            assert np.abs(a - b).max() < 1e-9, metric_id
        va = evaluate_metric(mesh, "VOL").raw
        vb = evaluate_metric(scaled, "VOL").raw
        assert np.abs(vb - va * s ** 3).max() < 1e-9 * s ** 3

    def test_cell_permutation_permutes_values(self):
        mesh = grid_mesh(3, 2, 2, jitter=0.2, seed=5)
        rng = np.random.default_rng(0)
        perm = rng.permutation(mesh.num_cells)
        shuffled = HexMesh(mesh.vertices, mesh.cells[perm])
        for metric_id in ("SJ", "SHA", "VOL", "ER"):
            a = evaluate_metric(mesh, metric_id).raw
            b = evaluate_metric(shuffled, metric_id).raw
            assert np.allclose(b, a[perm], atol=1e-13), metric_id

    def test_degenerate_geometry_yields_worst_not_nan(self):
        verts = np.zeros((8, 3))  # fully collapsed cell
        mesh = HexMesh(verts, np.arange(8)[None, :])
        for metric_id in METRICS:
            raw = evaluate_metric(mesh, metric_id).raw
            assert np.isfinite(raw).all(), metric_id


class TestNormalization:
    def test_identity_and_monotonicity_per_metric(self):
        rng = np.random.default_rng(7)
        for metric_id in METRICS:
            lo, hi, q = _sample_range(metric_id, rng)
            v = phi(metric_id, q, lo, hi)
            assert (v >= -1e-12).all() and (v <= 1 + 1e-12).all(), metric_id
            back = phi_inv(metric_id, v, lo, hi)
            if metric_id == "SJ":
                expected = np.maximum(q, 0.0)
            else:
                expected = q
            assert np.abs(back - expected).max() <= 1e-12 * max(1.0, abs(hi)), metric_id
            order = np.argsort(q)
            dv = np.diff(v[order])
            fam = METRICS[metric_id].family
            if fam in (PhiFamily.MAX_TO_ONE, PhiFamily.MAX_COMPLEMENT):
                assert (dv <= 1e-12).all(), metric_id  # higher raw = worse
            else:
                assert (dv >= -1e-12).all(), metric_id

    def test_sj_clamp_examples(self):
        assert phi("SJ", -0.5) == 0.0
        assert phi("SJ", 0.7) == pytest.approx(0.7)

    def test_er_examples(self):
        assert phi("ER", 4.0, 1.0, 4.0) == 0.0
        assert phi("ER", 1.0, 1.0, 4.0) == 1.0
        assert phi_inv("ER", 1.0, 1.0, 4.0) == 1.0

    def test_j_minmax_examples(self):
        assert phi("J", -2.0, -2.0, 5.0) == 0.0
        assert phi("J", 5.0, -2.0, 5.0) == 1.0

    def test_str_inverse(self):
        assert phi_inv("STR", 1.0, 0.0, 2.5) == pytest.approx(2.5)

    def test_degenerate_extrema_map_to_one(self, cube):
        field = evaluate_metric(cube, "ER")  # q_max == 1 on a perfect cube
        assert field.normalized.tolist() == [1.0]


class TestHistogram:
    def test_inverted_and_perfect_extremes(self):
        mesh = grid_mesh(2, 1, 1)
        cells = mesh.cells.copy()
        cells[0] = np.concatenate([cells[0, 4:], cells[0, :4]])  # invert one
        field = evaluate_metric(HexMesh(mesh.vertices, cells), "SJ")
        hist = histogram(field, bins=10)
        assert hist.counts.tolist() == [1, 0, 0, 0, 0, 0, 0, 0, 0, 1]

    def test_identical_quality_single_bin(self, grid333):
        field = evaluate_metric(grid333, "SJ")
        hist = histogram(field, bins=10)
        assert (hist.counts > 0).sum() == 1
        assert hist.counts.sum() == 27

    def test_count_conservation_random_mesh(self):
        mesh = grid_mesh(3, 3, 2, jitter=0.25, seed=9)
        for metric_id in ("SJ", "ER", "VOL", "SHA"):
            field = evaluate_metric(mesh, metric_id)
            hist = histogram(field, bins=13)
            assert hist.counts.sum() == mesh.num_cells

    def test_edges_strictly_increasing(self):
        mesh = grid_mesh(3, 3, 2, jitter=0.25, seed=10)
        for metric_id in METRICS:
            hist = histogram(evaluate_metric(mesh, metric_id), bins=8)
            assert (np.diff(hist.edges) > 0).all(), metric_id

    def test_bins_validation(self, cube):
        with pytest.raises(ValueError):
            histogram(evaluate_metric(cube, "SJ"), bins=0)

    def test_csv_export(self, cube):
        text = histogram_csv(histogram(evaluate_metric(cube, "SJ"), bins=4))
        lines = text.strip().splitlines()
        assert lines[0] == "bin_low_raw,bin_high_raw,count"
        assert len(lines) == 5


class TestSummary:
    def test_unit_cube_sj(self, cube):
        s = summary(evaluate_metric(cube, "SJ"))
        assert s.minimum == s.maximum == s.average == 1.0
        assert s.outside_acceptable == 0

    def test_below_acceptable_counted(self):
        unit = np.array(
            [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
             [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]], dtype=float
        )
        sheared = unit.copy()
        sheared[4:, 0] += 2.0  # strong shear: SJ ~ 0.45
        verts = np.vstack([unit, sheared + (4.0, 0.0, 0.0)])
        cells = np.vstack([np.arange(8), np.arange(8) + 8])
        field = evaluate_metric(HexMesh(verts, cells), "SJ")
        s = summary(field)
        assert s.outside_acceptable == int((field.raw < 0.5).sum())
        assert s.outside_acceptable == 1

    def test_empty_selection(self, cube):
        s = summary(evaluate_metric(cube, "SJ"), select=np.array([], dtype=np.int64))
        assert s.empty
        assert s.count == 0
