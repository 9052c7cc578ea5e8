import numpy as np
import pytest

from hexview.pngio import PngError, encode_rgba, iter_chunks
from hexview.snapshot import (
    STATUS_KEYWORD,
    Status,
    StatusError,
    StatusVersionError,
    default_status,
    embed_png,
    extract_png,
    parse,
    serialize,
)

GOLDEN = "default_status.json"


def _plain_png():
    return encode_rgba(np.zeros((4, 4, 4), dtype=np.uint8))


class TestSerialize:
    def test_golden_default(self, data_dir):
        got = serialize(default_status())
        golden = (data_dir / GOLDEN).read_text()
        assert got == golden

    def test_round_trip_identity_on_canonical(self):
        text = serialize(default_status())
        status, warnings = parse(text)
        assert not warnings
        assert serialize(status) == text

    def test_one_field_change_one_line(self):
        a = serialize(default_status())
        changed = default_status()
        changed.peel_min_depth = 3
        b = serialize(changed)
        diff = [
            (la, lb) for la, lb in zip(a.splitlines(), b.splitlines()) if la != lb
        ]
        assert len(diff) == 1
        assert '"peel_min_depth"' in diff[0][0]

    def test_injective_on_vector_fields(self):
        a = default_status()
        b = default_status()
        b.camera_direction = [0.0, 0.0, -1.0]
        assert serialize(a) != serialize(b)

    def test_validates_against_published_schema(self, data_dir):
        import json
        from pathlib import Path

        jsonschema = pytest.importorskip("jsonschema")
        schema = json.loads(
            (Path(__file__).parent.parent / "docs" / "status.schema.json").read_text()
        )
        st = default_status()
        st.dug = [1, 2]
        st.plane_enabled = True
        jsonschema.validate(json.loads(serialize(st)), schema)


class TestParse:
    def test_missing_key_defaults_with_warning(self):
        text = serialize(default_status())
        text = "\n".join(
            line for line in text.splitlines() if '"colormap"' not in line
        )
        status, warnings = parse(text)
        assert status.colormap == "none"
        assert any("colormap" in w for w in warnings)

    def test_unknown_key_warns(self):
        status, warnings = parse('{"version": 1, "shiny": true}')
        assert any("shiny" in w for w in warnings)

    def test_negative_peel_rejected(self):
        with pytest.raises(StatusError):
            parse('{"version": 1, "peel_min_depth": -3}')

    def test_malformed_json(self):
        with pytest.raises(StatusError, match="malformed"):
            parse("{not json")

    def test_wrong_version(self):
        with pytest.raises(StatusVersionError):
            parse('{"version": 99}')

    def test_bad_enums_rejected(self):
        with pytest.raises(StatusError):
            parse('{"version": 1, "metric": "WAT"}')
        with pytest.raises(StatusError):
            parse('{"version": 1, "mode": "bubbly"}')

    def test_nonfinite_rejected(self):
        with pytest.raises(StatusError):
            parse('{"version": 1, "plane_offset": NaN}')


class TestPngEmbedding:
    def test_embed_extract_round_trip(self):
        status = default_status()
        status.metric = "SHA"
        status.dug = [3, 1]
        out = embed_png(_plain_png(), status)
        got = extract_png(out)
        assert serialize(got) == serialize(status)

    def test_plain_png_returns_none(self):
        assert extract_png(_plain_png()) is None

    def test_embed_twice_single_chunk(self):
        status = default_status()
        once = embed_png(_plain_png(), status)
        status.peel_min_depth = 2
        twice = embed_png(once, status)
        chunks = [tag for tag, payload, _, _ in iter_chunks(twice) if tag == b"tEXt"]
        assert len(chunks) == 1
        assert extract_png(twice).peel_min_depth == 2

    def test_pixel_data_untouched(self):
        plain = _plain_png()
        embedded = embed_png(plain, default_status())
        def idat(data):
            return b"".join(p for t, p, _, _ in iter_chunks(data) if t == b"IDAT")
        assert idat(plain) == idat(embedded)

    def test_corrupt_chunk_raises(self):
        plain = _plain_png()
        from hexview.pngio import set_text_chunk

        broken = set_text_chunk(plain, STATUS_KEYWORD, "{definitely not json")
        with pytest.raises(StatusError):
            extract_png(broken)

    def test_not_a_png(self):
        with pytest.raises(PngError):
            embed_png(b"GIF89a", default_status())
