"""Pixel graphs of two-register states, written as binary PPM, and histogram CSV.

Column ``k`` is the key, row ``r`` the value. A pixel's hue is the phase of
its amplitude (phase 0 is red, going round the colour wheel counterclockwise),
its brightness is ``|a| / max |a|`` over the image, saturation is 1.
"""
from __future__ import annotations

import colorsys
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .qdict import DictionaryLayout, EncodedState
from .simcore import bitstring, from_bitstring

BLACK_BELOW = 1e-12


@dataclass
class PixelGraph:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row 0 on top

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(f"pixel array shape {self.pixels.shape} != {(self.height, self.width, 3)}")

    def lit(self) -> np.ndarray:
        """Boolean ``(height, width)`` mask of non-black pixels."""
        return self.pixels.any(axis=2)

    def scaled(self, factor: int) -> PixelGraph:
        if factor == 1:
            return self
        px = np.repeat(np.repeat(self.pixels, factor, axis=0), factor, axis=1)
        return PixelGraph(self.width * factor, self.height * factor, px)

    def to_ppm(self, scale: int = 1) -> bytes:
        img = self.scaled(scale)
        return f"P6\n{img.width} {img.height}\n255\n".encode("ascii") + img.pixels.tobytes()

    @classmethod
    def from_ppm(cls, data: bytes) -> PixelGraph:
        parts = data.split(b"\n", 3)
        if parts[0] != b"P6" or parts[2] != b"255":
            raise ValueError("not a P6/255 PPM written by this module")
        w, h = (int(t) for t in parts[1].split())
        return cls(w, h, np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3))


def phase_color(amp: complex, brightness: float) -> tuple[int, int, int]:
    hue = (math.atan2(amp.imag, amp.real) % (2 * math.pi)) / (2 * math.pi)
    r, g, b = colorsys.hsv_to_rgb(hue, 1.0, brightness)
    return round(r * 255), round(g * 255), round(b * 255)


def row_order(layout: DictionaryLayout, signed_rows: bool) -> list[int]:
    """Value-register indices from the top row down."""
    size = 2 ** layout.value_qubits
    if not signed_rows:
        return list(range(size))
    half = size // 2
    return list(range(half, size)) + list(range(half))


def render_state(encoded: EncodedState, signed_rows: bool = False) -> PixelGraph:
    layout = encoded.layout
    grid = encoded.amplitude_grid()  # (keys, values)
    mags = np.abs(grid)
    peak = mags.max()
    rows = row_order(layout, signed_rows)
    px = np.zeros((len(rows), grid.shape[0], 3), dtype=np.uint8)
    for r, v in enumerate(rows):
        for k in range(grid.shape[0]):
            if mags[k, v] < BLACK_BELOW:
                continue
            px[r, k] = phase_color(complex(grid[k, v]), float(mags[k, v] / peak))
    return PixelGraph(grid.shape[0], len(rows), px)


def render_counts(histogram: Mapping[str | int, int], layout: DictionaryLayout, shots: int,
                  signed_rows: bool = False) -> PixelGraph:
    """Greyscale pixel graph of measured (key, value) counts; phases are unknown."""
    n, m = layout.key_qubits, layout.value_qubits
    mags = np.zeros((2 ** n, 2 ** m))
    for key, count in histogram.items():
        idx = from_bitstring(key) if isinstance(key, str) else int(key)
        mags[idx >> m, idx % 2 ** m] = math.sqrt(count / shots)
    peak = mags.max()
    rows = row_order(layout, signed_rows)
    px = np.zeros((len(rows), 2 ** n, 3), dtype=np.uint8)
    if peak > 0:
        grey = np.rint(mags / peak * 255).astype(np.uint8)
        for r, v in enumerate(rows):
            px[r, :, :] = grey[:, v, None]
    return PixelGraph(2 ** n, len(rows), px)


def render_histogram(histogram: Mapping[int | str, int], num_qubits: int | None = None) -> str:
    """CSV text ``bitstring,count`` sorted by bitstring.

    Integer keys need ``num_qubits`` to be formatted.
    """
    rows = []
    for key, count in histogram.items():
        bits = key if isinstance(key, str) else bitstring(int(key), num_qubits)
        rows.append((bits, int(count)))
    return "bitstring,count\n" + "".join(f"{b},{c}\n" for b, c in sorted(rows))


def parse_histogram(text: str) -> dict[str, int]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != "bitstring,count":
        raise ValueError("missing bitstring,count header")
    return {b: int(c) for b, c in (ln.split(",") for ln in lines[1:])}


def write_atomic(path: str | os.PathLike, data: bytes | str):
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    if isinstance(data, str):
        data = data.encode()
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
