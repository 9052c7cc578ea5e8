"""Minimal deterministic PNG reader/writer (8-bit RGBA, non-interlaced)
plus tEXt chunk manipulation.

Writing our own codec keeps image bytes reproducible (fixed zlib level,
no timestamps or encoder metadata) and gives direct access to the chunk
stream for status embedding.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

_SIGNATURE = b"\x89PNG\r\n\x1a\n"


class PngError(ValueError):
    pass


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def encode_rgba(image: np.ndarray) -> bytes:
    """Encode an (H, W, 4) uint8 array as a PNG byte string."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 4 or image.dtype != np.uint8:
        raise PngError("expected an (H, W, 4) uint8 image")
    h, w = image.shape[:2]
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 6, 0, 0, 0)
    rows = np.empty((h, 1 + w * 4), dtype=np.uint8)
    rows[:, 0] = 0  # filter type: none
    rows[:, 1:] = image.reshape(h, w * 4)
    idat = zlib.compress(rows.tobytes(), 6)
    return b"".join(
        [_SIGNATURE, _chunk(b"IHDR", ihdr), _chunk(b"IDAT", idat), _chunk(b"IEND", b"")]
    )


def iter_chunks(data: bytes):
    """Yield (tag, payload, start_offset, end_offset) for each chunk."""
    if not data.startswith(_SIGNATURE):
        raise PngError("not a PNG file")
    pos = len(_SIGNATURE)
    while pos < len(data):
        if pos + 8 > len(data):
            raise PngError("truncated chunk header")
        (length,) = struct.unpack(">I", data[pos:pos + 4])
        tag = data[pos + 4:pos + 8]
        end = pos + 12 + length
        if end > len(data):
            raise PngError(f"truncated {tag!r} chunk")
        yield tag, data[pos + 8:pos + 8 + length], pos, end
        pos = end


def decode_rgba(data: bytes) -> np.ndarray:
    """Decode a PNG produced by :func:`encode_rgba` (8-bit RGBA, filter 0)."""
    ihdr = None
    idat = b""
    for tag, payload, _, _ in iter_chunks(data):
        if tag == b"IHDR":
            ihdr = struct.unpack(">IIBBBBB", payload)
        elif tag == b"IDAT":
            idat += payload
    if ihdr is None:
        raise PngError("missing IHDR")
    w, h, depth, color, _, _, interlace = ihdr
    if depth != 8 or color != 6 or interlace != 0:
        raise PngError("decoder supports 8-bit RGBA non-interlaced only")
    raw = np.frombuffer(zlib.decompress(idat), dtype=np.uint8).reshape(h, 1 + w * 4)
    out = np.empty((h, w * 4), dtype=np.uint8)
    prev = np.zeros(w * 4, dtype=np.uint16)
    for y in range(h):
        ftype = raw[y, 0]
        row = raw[y, 1:].astype(np.uint16)
        if ftype == 0:
            cur = row
        elif ftype == 2:  # up
            cur = (row + prev) & 0xFF
        else:
            raise PngError(f"unsupported PNG filter {ftype}")
        out[y] = cur.astype(np.uint8)
        prev = cur
    return out.reshape(h, w, 4)


def get_text_chunk(data: bytes, keyword: str) -> str | None:
    """Value of the first tEXt chunk with the given keyword, if any."""
    needle = keyword.encode("latin-1") + b"\x00"
    for tag, payload, _, _ in iter_chunks(data):
        if tag == b"tEXt" and payload.startswith(needle):
            return payload[len(needle):].decode("latin-1")
    return None


def set_text_chunk(data: bytes, keyword: str, value: str) -> bytes:
    """Insert or replace a tEXt chunk, placed right before IEND.

    Image data chunks are carried over untouched.
    """
    needle = keyword.encode("latin-1") + b"\x00"
    pieces: list[bytes] = [_SIGNATURE]
    new_chunk = _chunk(b"tEXt", needle + value.encode("latin-1"))
    iend = None
    for tag, payload, start, end in iter_chunks(data):
        if tag == b"tEXt" and payload.startswith(needle):
            continue  # replaced
        if tag == b"IEND":
            iend = data[start:end]
            continue
        pieces.append(data[start:end])
    if iend is None:
        raise PngError("missing IEND chunk")
    pieces.append(new_chunk)
    pieces.append(iend)
    return b"".join(pieces)
