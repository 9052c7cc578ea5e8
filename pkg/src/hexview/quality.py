"""Per-cell quality metrics for hexahedra, normalization and histograms.

The 18 metrics follow the standard finite-element quality definitions
used across FEA verification tooling (corner tripod determinants,
principal-axes vectors, Frobenius aspect, etc.).  Raw values live in each
metric's native range; a per-metric map ``phi`` folds them into [0, 1]
with 0 always the worst and 1 the best quality, and ``phi_inv`` goes back
to raw units for user-facing labels.

Degenerate geometry (division magnitudes below 1e-30) produces the
metric's worst representable raw value instead of NaN; unbounded "worst"
is capped at ``WORST_CAP``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .mesh import HexMesh

TINY = 1e-30
WORST_CAP = 1e30


class PhiFamily(Enum):
    IDENTITY = "identity"          # phi(q) = q
    CLAMP_NEGATIVE = "clamp-neg"   # phi(q) = max(q, 0)
    MIN_MAX = "min-max"            # phi(q) = (q - qmin) / (qmax - qmin)
    MAX_TO_ONE = "max-to-one"      # phi(q) = (qmax - q) / (qmax - 1)
    MAX_COMPLEMENT = "max-compl"   # phi(q) = (qmax - q) / qmax
    MAX_RATIO = "max-ratio"        # phi(q) = q / qmax


@dataclass(frozen=True)
class MetricSpec:
    id: str
    name: str
    full_range: tuple[float, float]
    acceptable: tuple[float, float] | None
    unit_cube: float | None
    family: PhiFamily


_INF = float("inf")

METRICS: dict[str, MetricSpec] = {
    m.id: m
    for m in [
        MetricSpec("DIA", "diagonal", (0.0, 1.0), (0.65, 1.0), 1.0, PhiFamily.IDENTITY),
        MetricSpec("DIS", "distortion", (-_INF, _INF), (0.5, 1.0), 1.0, PhiFamily.MIN_MAX),
        MetricSpec("ER", "edge ratio", (1.0, _INF), None, 1.0, PhiFamily.MAX_TO_ONE),
        MetricSpec("J", "jacobian", (-_INF, _INF), (0.0, _INF), 1.0, PhiFamily.MIN_MAX),
        MetricSpec("MER", "maximum edge ratio", (1.0, _INF), (1.0, 1.3), 1.0, PhiFamily.MAX_TO_ONE),
        MetricSpec("MAAF", "maximum aspect Frobenius", (1.0, _INF), (1.0, 3.0), 1.0, PhiFamily.MAX_TO_ONE),
        MetricSpec("MEAF", "mean aspect Frobenius", (1.0, _INF), (1.0, 3.0), 1.0, PhiFamily.MAX_TO_ONE),
        MetricSpec("ODD", "oddy", (0.0, _INF), (0.0, 0.5), 0.0, PhiFamily.MAX_COMPLEMENT),
        MetricSpec("RSS", "relative size squared", (0.0, 1.0), (0.5, 1.0), None, PhiFamily.IDENTITY),
        MetricSpec("SJ", "scaled jacobian", (-1.0, 1.0), (0.5, 1.0), 1.0, PhiFamily.CLAMP_NEGATIVE),
        MetricSpec("SHA", "shape", (0.0, 1.0), (0.3, 1.0), 1.0, PhiFamily.IDENTITY),
        MetricSpec("SHAS", "shape and size", (0.0, 1.0), (0.2, 1.0), None, PhiFamily.IDENTITY),
        MetricSpec("SHE", "shear", (0.0, 1.0), (0.3, 1.0), 1.0, PhiFamily.IDENTITY),
        MetricSpec("SHES", "shear and size", (0.0, 1.0), (0.2, 1.0), None, PhiFamily.IDENTITY),
        MetricSpec("SKE", "skew", (0.0, _INF), (0.0, 0.5), 0.0, PhiFamily.MAX_COMPLEMENT),
        MetricSpec("STR", "stretch", (0.0, _INF), (0.25, 1.0), 1.0, PhiFamily.MAX_RATIO),
        MetricSpec("TAP", "taper", (0.0, _INF), (0.0, 0.5), 0.0, PhiFamily.MAX_COMPLEMENT),
        MetricSpec("VOL", "volume", (-_INF, _INF), (0.0, _INF), 1.0, PhiFamily.MIN_MAX),
    ]
}

DEFAULT_METRIC = "SJ"
DEFAULT_BINS = 100


class UnknownMetricError(ValueError):
    def __init__(self, metric_id: str):
        ids = ", ".join(sorted(METRICS))
        super().__init__(f"unknown metric {metric_id!r}; supported ids: {ids}")


def worst_raw(spec: MetricSpec) -> float:
    """The worst representable raw value of a metric (capped if unbounded)."""
    if spec.family in (PhiFamily.MAX_TO_ONE, PhiFamily.MAX_COMPLEMENT):
        return WORST_CAP
    if spec.family is PhiFamily.MIN_MAX:
        return -WORST_CAP
    return spec.full_range[0]


# ---------------------------------------------------------------------------
# geometry helpers (all vectorized over cells, p has shape (C, 8, 3))
# ---------------------------------------------------------------------------

def _edge_vectors(p):
    return np.stack(
        [
            p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 3] - p[:, 2], p[:, 3] - p[:, 0],
            p[:, 4] - p[:, 0], p[:, 5] - p[:, 1], p[:, 6] - p[:, 2], p[:, 7] - p[:, 3],
            p[:, 5] - p[:, 4], p[:, 6] - p[:, 5], p[:, 7] - p[:, 6], p[:, 7] - p[:, 4],
        ],
        axis=1,
    )  # (C, 12, 3)


def _diagonals(p):
    return np.stack(
        [p[:, 6] - p[:, 0], p[:, 7] - p[:, 1], p[:, 4] - p[:, 2], p[:, 5] - p[:, 3]],
        axis=1,
    )  # (C, 4, 3)


def _principal_axes(p):
    x1 = (p[:, 1] + p[:, 2] + p[:, 5] + p[:, 6]) - (p[:, 0] + p[:, 3] + p[:, 4] + p[:, 7])
    x2 = (p[:, 2] + p[:, 3] + p[:, 6] + p[:, 7]) - (p[:, 0] + p[:, 1] + p[:, 4] + p[:, 5])
    x3 = (p[:, 4] + p[:, 5] + p[:, 6] + p[:, 7]) - (p[:, 0] + p[:, 1] + p[:, 2] + p[:, 3])
    return x1, x2, x3


def _cross_axes(p):
    x12 = (p[:, 0] + p[:, 2] + p[:, 4] + p[:, 6]) - (p[:, 1] + p[:, 3] + p[:, 5] + p[:, 7])
    x13 = (p[:, 1] + p[:, 2] + p[:, 7] + p[:, 4]) - (p[:, 0] + p[:, 3] + p[:, 5] + p[:, 6])
    x23 = (p[:, 1] + p[:, 3] + p[:, 4] + p[:, 6]) - (p[:, 0] + p[:, 2] + p[:, 5] + p[:, 7])
    return x12, x13, x23


def _corner_tripods(p):
    """The 8 corner edge-vector tripods, shape (C, 8, 3, 3) (rows e1,e2,e3)."""
    L = _edge_vectors(p)
    tri = np.empty((p.shape[0], 8, 3, 3), dtype=np.float64)
    sel = [
        (0, 3, 4, 1, 1, 1), (1, 0, 5, 1, -1, 1), (2, 1, 6, 1, -1, 1), (3, 2, 7, -1, -1, 1),
        (11, 8, 4, 1, 1, -1), (8, 9, 5, -1, 1, -1), (9, 10, 6, -1, 1, -1), (10, 11, 7, -1, -1, -1),
    ]
    for k, (a, b, c, sa, sb, sc) in enumerate(sel):
        tri[:, k, 0] = sa * L[:, a]
        tri[:, k, 1] = sb * L[:, b]
        tri[:, k, 2] = sc * L[:, c]
    return tri


def _det3(m):
    """Triple product det for (..., 3, 3) row matrices."""
    return np.einsum("...i,...i->...", m[..., 0, :], np.cross(m[..., 1, :], m[..., 2, :]))


def _norms(v):
    return np.linalg.norm(v, axis=-1)


def _safe_div(num, den, fallback):
    out = np.full(np.broadcast(num, den).shape, fallback, dtype=np.float64)
    ok = np.abs(den) > TINY
    np.divide(num, den, out=out, where=ok)
    return out


# ---------------------------------------------------------------------------
# metric kernels
# ---------------------------------------------------------------------------

def _volumes(p):
    x1, x2, x3 = _principal_axes(p)
    return np.einsum("ij,ij->i", x1, np.cross(x2, x3)) / 64.0


def _metric_DIA(p):
    d = _norms(_diagonals(p))
    return _safe_div(d.min(axis=1), d.max(axis=1), 0.0)


def _metric_ER(p):
    lengths = _norms(_edge_vectors(p))
    return _safe_div(lengths.max(axis=1), lengths.min(axis=1), WORST_CAP)


def _metric_STR(p):
    lengths = _norms(_edge_vectors(p))
    d = _norms(_diagonals(p))
    return np.sqrt(3.0) * _safe_div(lengths.min(axis=1), d.max(axis=1), 0.0)


def _all_jacobians(p):
    """Corner determinants (C, 8) and the principal-axes determinant (C,)."""
    tri = _corner_tripods(p)
    x1, x2, x3 = _principal_axes(p)
    center = np.einsum("ij,ij->i", x1, np.cross(x2, x3))
    return _det3(tri), center, tri, (x1, x2, x3)


def _metric_J(p):
    corner, center, _, _ = _all_jacobians(p)
    return np.minimum(corner.min(axis=1), center / 64.0)


def _metric_SJ(p):
    corner, center, tri, (x1, x2, x3) = _all_jacobians(p)
    lens = _norms(tri).prod(axis=2)                       # (C, 8)
    norm_corner = _safe_div(corner, lens, -1.0)
    center_len = _norms(x1) * _norms(x2) * _norms(x3)
    norm_center = _safe_div(center, center_len, -1.0)
    return np.clip(np.minimum(norm_corner.min(axis=1), norm_center), -1.0, 1.0)


def _metric_SHE(p):
    corner, _, tri, _ = _all_jacobians(p)
    lens = _norms(tri).prod(axis=2)
    norm_corner = _safe_div(corner, lens, 0.0)
    she = norm_corner.min(axis=1)
    return np.where(she <= TINY, 0.0, np.minimum(she, 1.0))


def _metric_SHA(p):
    corner, center, tri, (x1, x2, x3) = _all_jacobians(p)
    sq = (tri ** 2).sum(axis=(2, 3))                      # (C, 8)
    with np.errstate(invalid="ignore"):
        sh_corner = np.where(
            corner > TINY, 3.0 * np.cbrt(np.maximum(corner, 0.0) ** 2) / np.maximum(sq, TINY), 0.0
        )
    sq_center = (x1 ** 2 + x2 ** 2 + x3 ** 2).sum(axis=1)
    sh_center = np.where(
        center > TINY, 3.0 * np.cbrt(np.maximum(center, 0.0) ** 2) / np.maximum(sq_center, TINY), 0.0
    )
    sha = np.minimum(sh_corner.min(axis=1), sh_center)
    bad = (corner <= TINY).any(axis=1) | (center <= TINY)
    return np.where(bad, 0.0, np.minimum(sha, 1.0))


def _frobenius_aspects(p):
    _, _, tri, _ = _all_jacobians(p)
    corner = _det3(tri)
    sq = (tri ** 2).sum(axis=(2, 3))
    crosses = (
        np.cross(tri[:, :, 0], tri[:, :, 1]) ** 2
        + np.cross(tri[:, :, 1], tri[:, :, 2]) ** 2
        + np.cross(tri[:, :, 2], tri[:, :, 0]) ** 2
    ).sum(axis=2)
    kappa = _safe_div(np.sqrt(sq) * np.sqrt(crosses), 3.0 * corner, WORST_CAP)
    return np.where(corner > TINY, kappa, WORST_CAP)


def _metric_MAAF(p):
    return np.minimum(_frobenius_aspects(p).max(axis=1), WORST_CAP)


def _metric_MEAF(p):
    return np.minimum(_frobenius_aspects(p).mean(axis=1), WORST_CAP)


def _metric_MER(p):
    x1, x2, x3 = _principal_axes(p)
    n = np.stack([_norms(x1), _norms(x2), _norms(x3)], axis=1)
    hi = n.max(axis=1)
    lo = n.min(axis=1)
    return _safe_div(hi, lo, WORST_CAP)


def _metric_SKE(p):
    x1, x2, x3 = _principal_axes(p)
    n1, n2, n3 = _norms(x1), _norms(x2), _norms(x3)
    bad = (n1 <= TINY) | (n2 <= TINY) | (n3 <= TINY)
    u1 = _safe_div(x1, n1[:, None], 0.0)
    u2 = _safe_div(x2, n2[:, None], 0.0)
    u3 = _safe_div(x3, n3[:, None], 0.0)
    d12 = np.abs(np.einsum("ij,ij->i", u1, u2))
    d13 = np.abs(np.einsum("ij,ij->i", u1, u3))
    d23 = np.abs(np.einsum("ij,ij->i", u2, u3))
    ske = np.maximum(np.maximum(d12, d13), d23)
    return np.where(bad, WORST_CAP, ske)


def _metric_TAP(p):
    x1, x2, x3 = _principal_axes(p)
    x12, x13, x23 = _cross_axes(p)
    n1, n2, n3 = _norms(x1), _norms(x2), _norms(x3)
    t1 = _safe_div(_norms(x12), np.minimum(n1, n2), WORST_CAP)
    t2 = _safe_div(_norms(x13), np.minimum(n1, n3), WORST_CAP)
    t3 = _safe_div(_norms(x23), np.minimum(n2, n3), WORST_CAP)
    return np.minimum(np.maximum(np.maximum(t1, t2), t3), WORST_CAP)


def _oddy_term(g_rows, det):
    g11 = np.einsum("...i,...i->...", g_rows[0], g_rows[0])
    g22 = np.einsum("...i,...i->...", g_rows[1], g_rows[1])
    g33 = np.einsum("...i,...i->...", g_rows[2], g_rows[2])
    g12 = np.einsum("...i,...i->...", g_rows[0], g_rows[1])
    g13 = np.einsum("...i,...i->...", g_rows[0], g_rows[2])
    g23 = np.einsum("...i,...i->...", g_rows[1], g_rows[2])
    norm_g_sq = g11 ** 2 + g22 ** 2 + g33 ** 2 + 2.0 * (g12 ** 2 + g13 ** 2 + g23 ** 2)
    norm_j_sq = g11 + g22 + g33
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = (norm_g_sq - norm_j_sq ** 2 / 3.0) / np.maximum(det, TINY) ** (4.0 / 3.0)
    return np.where(det > TINY, val, WORST_CAP)


def _metric_ODD(p):
    corner, center, tri, (x1, x2, x3) = _all_jacobians(p)
    odd_corner = _oddy_term((tri[:, :, 0], tri[:, :, 1], tri[:, :, 2]), corner)
    odd_center = _oddy_term((x1, x2, x3), center)
    return np.minimum(np.maximum(odd_corner.max(axis=1), odd_center), WORST_CAP)


_GAUSS = 1.0 / np.sqrt(3.0)
_PARAM_SIGNS = np.array(
    [
        (-1, -1, -1), (1, -1, -1), (1, 1, -1), (-1, 1, -1),
        (-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1),
    ],
    dtype=np.float64,
)


def _gauss_jacobians(p):
    """Trilinear-map jacobian determinant at the 8 Gauss points, (C, 8)."""
    gp = _PARAM_SIGNS * _GAUSS  # (8, 3) gauss points in [-1, 1]^3
    dets = np.empty((p.shape[0], 8), dtype=np.float64)
    s = _PARAM_SIGNS
    for g in range(8):
        xi, eta, zeta = gp[g]
        dn = np.empty((8, 3))
        dn[:, 0] = s[:, 0] * (1 + s[:, 1] * eta) * (1 + s[:, 2] * zeta) / 8.0
        dn[:, 1] = s[:, 1] * (1 + s[:, 0] * xi) * (1 + s[:, 2] * zeta) / 8.0
        dn[:, 2] = s[:, 2] * (1 + s[:, 0] * xi) * (1 + s[:, 1] * eta) / 8.0
        jac = np.einsum("cka,kb->cab", p, dn)  # (C, 3, 3) d(x)/d(param)
        dets[:, g] = np.linalg.det(jac)
    return dets


def _metric_DIS(p):
    dets = _gauss_jacobians(p)
    volume = dets.sum(axis=1)
    return _safe_div(dets.min(axis=1) * 8.0, volume, -WORST_CAP)


def _metric_VOL(p):
    return _volumes(p)


def _metric_RSS(p):
    vol = _volumes(p)
    avg = vol.mean() if len(vol) else 0.0
    if avg <= TINY:
        return np.zeros(len(vol))
    tau = vol / avg
    r = np.minimum(tau, _safe_div(1.0, tau, 0.0))
    return np.where(tau > TINY, r ** 2, 0.0)


def _metric_SHAS(p):
    return _metric_SHA(p) * _metric_RSS(p)


def _metric_SHES(p):
    return _metric_SHE(p) * _metric_RSS(p)


_KERNELS = {
    "DIA": _metric_DIA, "DIS": _metric_DIS, "ER": _metric_ER, "J": _metric_J,
    "MER": _metric_MER, "MAAF": _metric_MAAF, "MEAF": _metric_MEAF, "ODD": _metric_ODD,
    "RSS": _metric_RSS, "SJ": _metric_SJ, "SHA": _metric_SHA, "SHAS": _metric_SHAS,
    "SHE": _metric_SHE, "SHES": _metric_SHES, "SKE": _metric_SKE, "STR": _metric_STR,
    "TAP": _metric_TAP, "VOL": _metric_VOL,
}


# ---------------------------------------------------------------------------
# quality field, normalization, histograms
# ---------------------------------------------------------------------------

@dataclass
class QualityField:
    metric: MetricSpec
    raw: np.ndarray          # (C,)
    q_min: float
    q_max: float

    @property
    def normalized(self) -> np.ndarray:
        return phi(self.metric.id, self.raw, self.q_min, self.q_max)


def evaluate_metric(mesh: HexMesh, metric_id: str) -> QualityField:
    """Evaluate one metric over all cells; extrema are mesh-wide.

    Extrema are measured once over the full mesh at evaluation time and
    are not affected by any later filtering.
    """
    if metric_id not in METRICS:
        raise UnknownMetricError(metric_id)
    p = mesh.cell_corners()
    spec = METRICS[metric_id]
    raw = np.asarray(_KERNELS[metric_id](p), dtype=np.float64)
    raw = np.nan_to_num(raw, nan=worst_raw(spec), posinf=WORST_CAP, neginf=-WORST_CAP)
    return QualityField(spec, raw, float(raw.min()), float(raw.max()))


def phi(metric_id: str, q, q_min: float = 0.0, q_max: float = 1.0):
    """Map raw values into [0, 1]; 0 is worst quality, 1 is best.

    Degenerate denominators (constant field, or an extremum equal to the
    family's anchor) mean the field carries no ordering information; every
    value maps to 1 in that case.
    """
    spec = METRICS[metric_id]
    q = np.asarray(q, dtype=np.float64)
    fam = spec.family
    if fam is PhiFamily.IDENTITY:
        out = q
    elif fam is PhiFamily.CLAMP_NEGATIVE:
        out = np.maximum(q, 0.0)
    elif fam is PhiFamily.MIN_MAX:
        out = (q - q_min) / (q_max - q_min) if q_max - q_min > TINY else np.ones_like(q)
    elif fam is PhiFamily.MAX_TO_ONE:
        out = (q_max - q) / (q_max - 1.0) if q_max - 1.0 > TINY else np.ones_like(q)
    elif fam is PhiFamily.MAX_COMPLEMENT:
        out = (q_max - q) / q_max if abs(q_max) > TINY else np.ones_like(q)
    else:  # MAX_RATIO
        out = q / q_max if abs(q_max) > TINY else np.ones_like(q)
    return out if np.ndim(q) else float(out)


def phi_inv(metric_id: str, v, q_min: float = 0.0, q_max: float = 1.0):
    """Inverse of :func:`phi` back to raw metric units."""
    spec = METRICS[metric_id]
    v = np.asarray(v, dtype=np.float64)
    fam = spec.family
    if fam in (PhiFamily.IDENTITY, PhiFamily.CLAMP_NEGATIVE):
        out = v
    elif fam is PhiFamily.MIN_MAX:
        out = q_min + v * (q_max - q_min)
    elif fam is PhiFamily.MAX_TO_ONE:
        out = 1.0 + (1.0 - v) * (q_max - 1.0)
    elif fam is PhiFamily.MAX_COMPLEMENT:
        out = (1.0 - v) * q_max
    else:  # MAX_RATIO
        out = v * q_max
    return out if np.ndim(v) else float(out)


def normalize(field: QualityField) -> np.ndarray:
    return field.normalized


def denormalize(metric_id: str, v, q_min: float = 0.0, q_max: float = 1.0):
    return phi_inv(metric_id, v, q_min, q_max)


@dataclass
class Histogram:
    """Counts over normalized-quality bins, labelled in raw metric units.

    ``raw_lo``/``raw_hi`` are the bin bounds mapped back through the
    metric's inverse normalization and reordered so edges ascend in raw
    units; ``normalized_mid`` keeps each bin's normalized midpoint for
    color-coding.
    """

    metric_id: str
    raw_lo: np.ndarray
    raw_hi: np.ndarray
    counts: np.ndarray
    normalized_mid: np.ndarray
    orientation: str = "vertical"

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate([self.raw_lo, self.raw_hi[-1:]])


def histogram(field: QualityField, bins: int = DEFAULT_BINS, orientation: str = "vertical") -> Histogram:
    """Histogram of normalized values over [0, 1], labelled in raw units.

    Values below 0 (the clamped scaled-jacobian branch) land in the first
    normalized bin, so inverted and degenerate cells are always counted
    together at the worst end.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if orientation not in ("vertical", "horizontal"):
        raise ValueError("orientation must be 'vertical' or 'horizontal'")
    if abs(phi_inv(field.metric.id, 0.0, field.q_min, field.q_max)
           - phi_inv(field.metric.id, 1.0, field.q_min, field.q_max)) <= TINY:
        # degenerate normalization (constant/extremal field): single bin
        lo = field.q_min
        hi = field.q_max if field.q_max > field.q_min else field.q_min + 1.0
        return Histogram(
            field.metric.id,
            np.array([lo]),
            np.array([hi]),
            np.array([len(field.raw)], dtype=np.int64),
            np.array([1.0]),
            orientation,
        )
    v = np.clip(field.normalized, 0.0, 1.0)
    idx = np.minimum((v * bins).astype(np.int64), bins - 1)
    counts = np.bincount(idx, minlength=bins)
    norm_edges = np.linspace(0.0, 1.0, bins + 1)
    raw_edges = phi_inv(field.metric.id, norm_edges, field.q_min, field.q_max)
    lo = np.minimum(raw_edges[:-1], raw_edges[1:])
    hi = np.maximum(raw_edges[:-1], raw_edges[1:])
    mid = (norm_edges[:-1] + norm_edges[1:]) / 2.0
    if len(lo) > 1 and lo[0] > lo[-1]:  # descending raw map: reorder ascending
        lo, hi, counts, mid = lo[::-1], hi[::-1], counts[::-1], mid[::-1]
    # guard against zero-width degenerate bins breaking strict ordering
    return Histogram(field.metric.id, lo.copy(), hi.copy(), counts.copy(), mid.copy(), orientation)


def histogram_csv(hist: Histogram) -> str:
    lines = ["bin_low_raw,bin_high_raw,count"]
    for lo, hi, c in zip(hist.raw_lo, hist.raw_hi, hist.counts):
        lines.append(f"{lo!r},{hi!r},{int(c)}")
    return "\n".join(lines) + "\n"


@dataclass
class Summary:
    metric_id: str
    count: int
    minimum: float | None
    maximum: float | None
    average: float | None
    outside_acceptable: int | None
    empty: bool

    def as_dict(self) -> dict:
        return {
            "metric": self.metric_id,
            "count": self.count,
            "min": self.minimum,
            "max": self.maximum,
            "avg": self.average,
            "outside_acceptable": self.outside_acceptable,
            "empty": self.empty,
        }


def summary(field: QualityField, select: np.ndarray | None = None) -> Summary:
    """Raw-value statistics plus the count outside the acceptable range."""
    raw = field.raw if select is None else field.raw[np.asarray(select)]
    if len(raw) == 0:
        return Summary(field.metric.id, 0, None, None, None, None, empty=True)
    acc = field.metric.acceptable
    outside = None
    if acc is not None:
        outside = int(((raw < acc[0]) | (raw > acc[1])).sum())
    return Summary(
        field.metric.id,
        int(len(raw)),
        float(raw.min()),
        float(raw.max()),
        float(raw.mean()),
        outside,
        empty=False,
    )
