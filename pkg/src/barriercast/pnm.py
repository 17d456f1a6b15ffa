"""PBM reading/writing for edge images and P6 output for overlays.

Netpbm conventions: in PBM a 1 bit is black, which we read as an edge.
"""

from __future__ import annotations

import numpy as np

from .edge_image import EdgeImage
from .errors import PBMFormatError

_WS = b" \t\n\r\v\f"


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_ws(self):
        d = self.data
        while self.pos < len(d):
            c = d[self.pos:self.pos + 1]
            if c == b"#":
                end = d.find(b"\n", self.pos)
                self.pos = len(d) if end < 0 else end + 1
            elif c in _WS:
                self.pos += 1
            else:
                break

    def header_int(self, what: str) -> int:
        self.skip_ws()
        start = self.pos
        d = self.data
        while self.pos < len(d) and d[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if self.pos == start:
            if start >= len(d):
                raise PBMFormatError(f"truncated header, expected {what}", start)
            raise PBMFormatError(f"expected {what}", start)
        return int(d[start:self.pos])


def load_pbm(data: bytes) -> EdgeImage:
    """Parse plain (P1) or raw (P4) PBM bytes."""
    data = bytes(data)
    if len(data) < 2:
        raise PBMFormatError("truncated magic number", 0)
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise PBMFormatError(f"unsupported magic number {magic!r}", 0)
    r = _Reader(data)
    r.pos = 2
    width = r.header_int("width")
    height = r.header_int("height")
    if width < 3 or height < 3:
        raise PBMFormatError(f"dimensions {width}x{height} are below the 3x3 minimum", r.pos)

    if magic == b"P4":
        if r.pos >= len(data) or data[r.pos:r.pos + 1] not in _WS:
            raise PBMFormatError("missing whitespace after header", r.pos)
        r.pos += 1
        stride = (width + 7) // 8
        need = stride * height
        payload = data[r.pos:r.pos + need]
        if len(payload) < need:
            raise PBMFormatError(f"truncated raster, expected {need} bytes, got {len(payload)}",
                                 r.pos + len(payload))
        bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8).reshape(height, stride), axis=1)
        return EdgeImage(bits[:, :width].astype(bool))

    values = np.empty(width * height, dtype=bool)
    k = 0
    d = data
    while k < values.size:
        r.skip_ws()
        if r.pos >= len(d):
            raise PBMFormatError(f"truncated raster, got {k} of {values.size} pixels", r.pos)
        c = d[r.pos:r.pos + 1]
        if c not in (b"0", b"1"):
            raise PBMFormatError(f"unexpected byte {c!r} in raster", r.pos)
        values[k] = c == b"1"
        k += 1
        r.pos += 1
    return EdgeImage(values.reshape(height, width))


def save_pbm(image: EdgeImage) -> bytes:
    """Encode as raw P4; rows are padded to whole bytes."""
    header = f"P4\n{image.width} {image.height}\n".encode("ascii")
    return header + np.packbits(image.edges, axis=1).tobytes()


def save_ppm(rgb: np.ndarray) -> bytes:
    """Encode an ``(height, width, 3)`` uint8 array as P6."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    h, w, _ = rgb.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgb.tobytes()


def load_ppm(data: bytes) -> np.ndarray:
    """Minimal P6 reader (maxval 255), used to check rendered output."""
    if data[:2] != b"P6":
        raise PBMFormatError("not a P6 file", 0)
    r = _Reader(data)
    r.pos = 2
    w = r.header_int("width")
    h = r.header_int("height")
    maxval = r.header_int("maxval")
    if maxval != 255:
        raise PBMFormatError(f"unsupported maxval {maxval}", r.pos)
    r.pos += 1
    raw = data[r.pos:r.pos + w * h * 3]
    if len(raw) < w * h * 3:
        raise PBMFormatError("truncated raster", r.pos + len(raw))
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3)
