"""The Status document: a complete, canonically serialized capture of the
visualization state, embeddable as PNG metadata.

The canonical text form puts every field on its own line in a fixed
order with shortest round-trip float formatting, so two statuses that
differ in one field differ in exactly one line.  Parsing is tolerant:
unknown keys produce warnings and missing keys fall back to defaults, so
hand-edited documents keep working.  The PNG carrier is a single tEXt
chunk with keyword ``hexalab-status`` placed before IEND.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields as dc_fields

import numpy as np

from . import pngio
from .filters import QUALITY_NULL_THRESHOLD
from .quality import DEFAULT_METRIC, METRICS

SCHEMA_VERSION = 1
STATUS_KEYWORD = "hexalab-status"

MODE_NAMES = ("flat", "fissure", "rounded")
IRREGULAR_NAMES = ("off", "wire", "barbed", "paper")
LIGHTING_NAMES = ("ao", "direct")
COLORMAP_NAMES = ("none", "parula", "jet", "redblue")


class StatusError(ValueError):
    pass


class StatusVersionError(StatusError):
    def __init__(self, version):
        super().__init__(
            f"unsupported status schema version {version!r} (expected {SCHEMA_VERSION})"
        )


def _vec(x, n=3):
    return [float(v) for v in np.asarray(x).reshape(n)]


@dataclass
class Status:
    version: int = SCHEMA_VERSION
    mesh: str = ""
    camera_direction: list = field(default_factory=lambda: _vec((-0.45, -0.35, -1.0)))
    camera_up: list = field(default_factory=lambda: [0.0, 1.0, 0.0])
    camera_distance: float = 0.0  # <= 0 auto-frames the mesh
    camera_target: list = field(default_factory=lambda: [0.0, 0.0, 0.0])
    plane_normal: list = field(default_factory=lambda: [1.0, 0.0, 0.0])
    plane_offset: float = 0.0
    plane_enabled: bool = False
    peel_min_depth: int = 0
    quality_threshold: float = QUALITY_NULL_THRESHOLD
    quality_threshold_raw: float | None = None  # wins over normalized when set
    metric: str = DEFAULT_METRIC
    colormap: str = "none"
    mode: str = "flat"
    mode_param: float = 0.35
    silhouette_alpha: float = 1.0
    regularization: int = 0
    irregular_mode: str = "off"
    irregular_xray: bool = False
    dug: list = field(default_factory=list)
    undug: list = field(default_factory=list)
    isolated: int | None = None
    color_outer: list = field(default_factory=lambda: [1.0, 1.0, 1.0])
    color_inner: list = field(default_factory=lambda: [1.0, 0.85, 0.25])
    color_background: list = field(default_factory=lambda: [1.0, 1.0, 1.0, 1.0])
    color_valence3: list = field(default_factory=lambda: [0.85, 0.1, 0.1])
    color_valence5: list = field(default_factory=lambda: [0.1, 0.65, 0.15])
    color_valence_other: list = field(default_factory=lambda: [0.15, 0.25, 0.85])
    lighting: str = "ao"
    image_size: list = field(default_factory=lambda: [640, 480])

    def copy(self) -> "Status":
        return parse(serialize(self))[0]


FIELD_ORDER = [f.name for f in dc_fields(Status)]

_VEC_FIELDS = {
    "camera_direction": 3, "camera_up": 3, "camera_target": 3, "plane_normal": 3,
    "color_outer": 3, "color_inner": 3, "color_background": 4,
    "color_valence3": 3, "color_valence5": 3, "color_valence_other": 3,
}


def _check_finite(name, values):
    arr = np.asarray(values, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise StatusError(f"field {name!r} must be finite")


def validate(status: Status) -> None:
    if not isinstance(status.version, int):
        raise StatusError("version must be an integer")
    if status.version != SCHEMA_VERSION:
        raise StatusVersionError(status.version)
    if status.peel_min_depth < 0 or not isinstance(status.peel_min_depth, int):
        raise StatusError("peel_min_depth must be a non-negative integer")
    if not 0 <= status.regularization <= 5:
        raise StatusError("regularization must be in [0, 5]")
    if status.metric not in METRICS:
        raise StatusError(f"unknown metric {status.metric!r}")
    if status.colormap not in COLORMAP_NAMES:
        raise StatusError(f"unknown colormap {status.colormap!r}")
    if status.mode not in MODE_NAMES:
        raise StatusError(f"unknown mode {status.mode!r}")
    if status.irregular_mode not in IRREGULAR_NAMES:
        raise StatusError(f"unknown irregular mode {status.irregular_mode!r}")
    if status.lighting not in LIGHTING_NAMES:
        raise StatusError(f"unknown lighting {status.lighting!r}")
    if not 0.0 <= status.silhouette_alpha <= 1.0:
        raise StatusError("silhouette_alpha must be in [0, 1]")
    if not 0.0 <= status.quality_threshold <= QUALITY_NULL_THRESHOLD:
        raise StatusError("quality_threshold must be in [0, 1] (or the null value)")
    for name, n in _VEC_FIELDS.items():
        value = getattr(status, name)
        if len(value) != n:
            raise StatusError(f"field {name!r} must have {n} entries")
        _check_finite(name, value)
    for name in ("plane_offset", "mode_param", "camera_distance", "silhouette_alpha"):
        _check_finite(name, getattr(status, name))
    if status.quality_threshold_raw is not None:
        _check_finite("quality_threshold_raw", status.quality_threshold_raw)
    if len(status.image_size) != 2 or any(int(v) < 1 for v in status.image_size):
        raise StatusError("image_size must be two positive integers")
    if status.isolated is not None and status.isolated < 0:
        raise StatusError("isolated must be a cell id or null")
    if any(int(v) < 0 for v in status.dug) or any(int(v) < 0 for v in status.undug):
        raise StatusError("dug/undug entries must be cell ids")


def _canonical_value(name: str, value):
    if name in _VEC_FIELDS:
        return [float(v) for v in value]
    if name in ("dug", "undug"):
        return [int(v) for v in value]
    if name == "image_size":
        return [int(v) for v in value]
    if name in ("plane_offset", "mode_param", "camera_distance",
                "silhouette_alpha", "quality_threshold"):
        return float(value)
    if name == "quality_threshold_raw":
        return None if value is None else float(value)
    return value


def serialize(status: Status) -> str:
    """Canonical JSON text: fixed key order, one field per line."""
    validate(status)
    lines = ["{"]
    for i, name in enumerate(FIELD_ORDER):
        value = _canonical_value(name, getattr(status, name))
        tail = "," if i < len(FIELD_ORDER) - 1 else ""
        lines.append(f'  "{name}": {json.dumps(value)}{tail}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> tuple[Status, list[str]]:
    """Tolerant parse of a status document.

    Unknown keys are ignored with a warning; missing keys take defaults.
    Malformed JSON, a wrong schema version, or invalid field values raise.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StatusError(f"malformed status JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise StatusError("status document must be a JSON object")
    warnings = []
    status = Status()
    known = set(FIELD_ORDER)
    version = data.get("version", SCHEMA_VERSION)
    if not isinstance(version, int) or version != SCHEMA_VERSION:
        raise StatusVersionError(version)
    for key, value in data.items():
        if key not in known:
            warnings.append(f"ignoring unknown status key {key!r}")
            continue
        setattr(status, key, value)
    for name in FIELD_ORDER:
        if name not in data:
            if name != "version":
                warnings.append(f"missing status key {name!r}; using default")
    # normalize container types
    for name in _VEC_FIELDS:
        setattr(status, name, [float(v) for v in getattr(status, name)])
    status.dug = [int(v) for v in status.dug]
    status.undug = [int(v) for v in status.undug]
    status.image_size = [int(v) for v in status.image_size]
    if status.isolated is not None:
        status.isolated = int(status.isolated)
    if status.quality_threshold_raw is not None:
        status.quality_threshold_raw = float(status.quality_threshold_raw)
    for name in ("plane_offset", "mode_param", "camera_distance",
                 "silhouette_alpha", "quality_threshold"):
        setattr(status, name, float(getattr(status, name)))
    if isinstance(status.peel_min_depth, float) and status.peel_min_depth.is_integer():
        status.peel_min_depth = int(status.peel_min_depth)
    validate(status)
    return status, warnings


def default_status() -> Status:
    return Status()


# ---------------------------------------------------------------------------
# PNG carrier
# ---------------------------------------------------------------------------

def embed_png(png: bytes, status: Status) -> bytes:
    """Attach the canonical status as a tEXt chunk (replacing any old one)."""
    return pngio.set_text_chunk(png, STATUS_KEYWORD, serialize(status))


def extract_png(png: bytes) -> Status | None:
    """Read the embedded status, or None when the chunk is absent.

    A present but malformed chunk raises instead of silently vanishing.
    """
    text = pngio.get_text_chunk(png, STATUS_KEYWORD)
    if text is None:
        return None
    status, _ = parse(text)
    return status


def resolve_quality_threshold(status: Status, q_min: float, q_max: float) -> float:
    """Normalized threshold for filtering; the raw mirror wins when set."""
    from .quality import phi

    if status.quality_threshold_raw is not None:
        return float(phi(status.metric, status.quality_threshold_raw, q_min, q_max))
    return status.quality_threshold


def sync_raw_threshold(status: Status, q_min: float, q_max: float) -> None:
    """Fill the raw mirror from the normalized threshold for user-facing text."""
    from .quality import phi_inv

    if status.quality_threshold_raw is None and status.quality_threshold <= 1.0:
        status.quality_threshold_raw = float(
            phi_inv(status.metric, status.quality_threshold, q_min, q_max)
        )
