"""Netpbm bitmap (PBM) reading and writing, plain (P1) and raw (P4).

PBM stores 1 for black, which is exactly our opaque bit, so no inversion
is needed in either direction.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .image import check_binary_image

MAX_PIXELS = 1 << 31
PLAIN_LIMIT = 4096
_WHITESPACE = b" \t\n\v\f\r"


class PBMFormatError(ValueError):
    pass


def encode_pbm(image, fmt: str = "auto") -> bytes:
    """Serialise a binary image.  ``fmt`` is ``"P1"``, ``"P4"`` or ``"auto"``
    (plain up to 4096 pixels, raw above)."""
    image = check_binary_image(image)
    h, w = image.shape
    if fmt == "auto":
        fmt = "P1" if h * w <= PLAIN_LIMIT else "P4"
    if fmt == "P1":
        lines = [f"P1\n{w} {h}\n"]
        for row in image:
            lines.append(" ".join("1" if b else "0" for b in row) + "\n")
        return "".join(lines).encode("ascii")
    if fmt == "P4":
        header = f"P4\n{w} {h}\n".encode("ascii")
        return header + np.packbits(image, axis=1).tobytes()
    raise ValueError(f"unknown PBM flavour {fmt!r}")


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            raise PBMFormatError(f"malformed header: expected {what}")
        return int(self.data[start:self.pos])


def decode_pbm(data: bytes) -> np.ndarray:
    if len(data) < 2 or data[:1] != b"P" or data[1:2] not in (b"1", b"4"):
        raise PBMFormatError("not a PBM file (magic must be P1 or P4)")
    raw = data[1:2] == b"4"
    reader = _Reader(data)
    reader.pos = 2
    w = reader.integer("width")
    h = reader.integer("height")
    if w < 1 or h < 1:
        raise PBMFormatError(f"invalid dimensions {w}x{h}")
    if w * h > MAX_PIXELS:
        raise PBMFormatError(f"dimensions {w}x{h} exceed {MAX_PIXELS} pixels")
    if raw:
        if reader.pos >= len(data) or data[reader.pos:reader.pos + 1] not in _WHITESPACE:
            raise PBMFormatError("malformed header: missing separator before raster")
        start = reader.pos + 1
        row_bytes = (w + 7) // 8
        need = row_bytes * h
        payload = data[start:start + need]
        if len(payload) < need:
            raise PBMFormatError(f"truncated raster: expected {need} bytes, got {len(payload)}")
        packed = np.frombuffer(payload, dtype=np.uint8).reshape(h, row_bytes)
        return np.unpackbits(packed, axis=1)[:, :w].copy()
    body = data[reader.pos:]
    # comments may appear anywhere in plain files
    digits = bytearray()
    for line in body.split(b"\n"):
        line = line.split(b"#", 1)[0]
        for c in line:
            if c in (0x30, 0x31):
                digits.append(c - 0x30)
            elif c not in _WHITESPACE:
                raise PBMFormatError(f"unexpected byte {bytes([c])!r} in plain raster")
    if len(digits) < w * h:
        raise PBMFormatError(f"truncated raster: expected {w * h} pixels, got {len(digits)}")
    if len(digits) > w * h:
        raise PBMFormatError("trailing data after plain raster")
    return np.frombuffer(bytes(digits), dtype=np.uint8).reshape(h, w).copy()


def read_pbm(path) -> np.ndarray:
    return decode_pbm(Path(path).read_bytes())


def write_pbm(path, image, fmt: str = "auto") -> None:
    Path(path).write_bytes(encode_pbm(image, fmt))
