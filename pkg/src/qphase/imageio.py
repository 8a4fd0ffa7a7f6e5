"""PGM input/output, image-to-wavefunction encoding, and heatmap rendering.

PGM is the only external image format: P2 (ASCII) and P5 (binary) with
maxval up to 255. The parser tracks its byte position so malformed files are
reported with the offset of the first offending byte. The synthetic corpus at
the bottom provides four deterministic test images spanning smooth, textured,
sparse, and self-similar content.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, QPhaseError


@dataclass
class GrayImage:
    """8-bit grayscale raster, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise QPhaseError("invalid-dimension", f"image must be 2D, got {px.ndim}D")
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255):
                raise QPhaseError("invalid-data", "pixel values outside [0, 255]")
            px = px.astype(np.uint8)
        self.pixels = px

    @property
    def shape(self):
        return self.pixels.shape


@dataclass
class ImageAmplitudes:
    """Unit-energy nonnegative amplitude field derived from an image."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if np.any(v < 0):
            raise QPhaseError("invalid-data", "amplitudes must be nonnegative")
        total = float(np.sum(v * v))
        if abs(total - 1.0) > 1e-10:
            raise QPhaseError("invalid-data", f"amplitude energy is {total}, not 1")
        self.values = v


class _Scanner:
    # Cursor over the raw bytes; every error it raises knows where it happened.

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self) -> None:
        while self.pos < len(self.data):
            c = self.data[self.pos:self.pos + 1]
            if c in b" \t\r\n":
                self.pos += 1
            elif c == b"#":
                while self.pos < len(self.data) and self.data[self.pos:self.pos + 1] != b"\n":
                    self.pos += 1
            else:
                return

    def token(self, what: str) -> tuple:
        self.skip_separators()
        if self.pos >= len(self.data):
            raise ParseError(f"unexpected end of file while reading {what}", self.pos)
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1] not in b" \t\r\n":
            self.pos += 1
        return self.data[start:self.pos], start

    def integer(self, what: str, upper: int) -> int:
        tok, start = self.token(what)
        try:
            value = int(tok)
        except ValueError:
            raise ParseError(f"{what} is not an integer: {tok!r}", start) from None
        if not 0 <= value <= upper:
            raise ParseError(f"{what} = {value} outside [0, {upper}]", start)
        return value


def load_pgm(path) -> GrayImage:
    """Read a P2 or P5 PGM file; maxval above 255 is rejected."""
    data = Path(path).read_bytes()
    sc = _Scanner(data)
    magic, magic_at = sc.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"unsupported magic number {magic!r}", magic_at)
    width = sc.integer("width", 1 << 20)
    height = sc.integer("height", 1 << 20)
    if width == 0 or height == 0:
        raise ParseError("image has zero pixels", sc.pos)
    maxval_at = sc.pos
    maxval = sc.integer("maxval", 1 << 16)
    if not 1 <= maxval <= 255:
        raise ParseError(f"maxval {maxval} outside [1, 255]", maxval_at)

    count = width * height
    if magic == b"P5":
        # exactly one separator byte between maxval and the payload
        if sc.pos >= len(data) or data[sc.pos:sc.pos + 1] not in b" \t\r\n":
            raise ParseError("missing separator before pixel payload", sc.pos)
        sc.pos += 1
        payload = data[sc.pos:sc.pos + count]
        if len(payload) < count:
            raise ParseError(
                f"truncated pixel payload: expected {count} bytes, got {len(payload)}",
                sc.pos + len(payload))
        px = np.frombuffer(payload, dtype=np.uint8, count=count)
        if maxval < 255 and np.any(px > maxval):
            bad = int(np.argmax(px > maxval))
            raise ParseError(f"pixel value {int(px[bad])} exceeds maxval {maxval}",
                             sc.pos + bad)
    else:
        values = np.empty(count, dtype=np.uint8)
        for i in range(count):
            at = sc.pos
            v = sc.integer(f"pixel {i}", 255)
            if v > maxval:
                raise ParseError(f"pixel value {v} exceeds maxval {maxval}", at)
            values[i] = v
        px = values
    return GrayImage(px.reshape(height, width))


def save_pgm(image: GrayImage, path) -> None:
    """Write binary PGM; load_pgm(save_pgm(x)) is pixel-identical."""
    px = image.pixels
    header = f"P5\n{px.shape[1]} {px.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + px.tobytes())


def encode_wavefunction(image: GrayImage) -> ImageAmplitudes:
    """Pixel intensities as amplitudes: a_i = p_i / sqrt(sum p^2)."""
    px = image.pixels.astype(np.float64)
    norm = float(np.sqrt(np.sum(px * px)))
    if norm == 0.0:
        raise QPhaseError("degenerate-input", "all-black image cannot be normalized")
    return ImageAmplitudes(px / norm)


def decode_wavefunction(amps: ImageAmplitudes, peak: int = 255) -> GrayImage:
    """Rescale amplitudes back to 8-bit pixels; max amplitude maps to peak."""
    v = amps.values
    top = float(np.max(v))
    if top == 0.0:
        raise QPhaseError("degenerate-input", "zero amplitude field")
    return GrayImage(np.rint(v / top * peak).astype(np.uint8))


def render_heatmap(grid, signed: bool, path) -> None:
    """Map a 2D field onto 8-bit gray and write it as PGM.

    Signed fields map [-m, +m] to [0, 255] with zero at 128, so sign
    structure survives as contrast around mid-gray. Unsigned fields map
    [0, max] to [0, 255].
    """
    v = np.asarray(grid, dtype=np.float64)
    if v.ndim != 2:
        raise QPhaseError("invalid-dimension", f"heatmap needs a 2D grid, got {v.ndim}D")
    if not np.all(np.isfinite(v)):
        raise QPhaseError("invalid-data", "grid contains NaN or Inf")
    if signed:
        m = float(np.max(np.abs(v)))
        if m == 0.0:
            px = np.full(v.shape, 128, dtype=np.uint8)
        else:
            px = np.clip(np.rint(128.0 + (v / m) * 127.5), 0, 255).astype(np.uint8)
    else:
        if np.any(v < 0):
            raise QPhaseError("invalid-data", "unsigned heatmap given negative values")
        m = float(np.max(v))
        if m == 0.0:
            px = np.zeros(v.shape, dtype=np.uint8)
        else:
            px = np.clip(np.rint(v / m * 255.0), 0, 255).astype(np.uint8)
    save_pgm(GrayImage(px), path)


def write_grid_csv(grid, fh) -> None:
    """Dump a 2D grid as row,col,value lines with full float precision."""
    v = np.asarray(grid, dtype=np.float64)
    if v.ndim != 2:
        raise QPhaseError("invalid-dimension", f"grid dump needs 2D, got {v.ndim}D")
    fh.write("row,col,value\n")
    for r in range(v.shape[0]):
        for c in range(v.shape[1]):
            fh.write(f"{r},{c},{v[r, c]:.17g}\n")


# ---------------------------------------------------------------------------
# Synthetic corpus. Four deterministic images with very different sparsity
# structure under the wavelet transform: a smooth portrait-like composition,
# band-limited texture, isolated bright spots, and a self-similar fractal.

def _grid(side: int):
    y, x = np.mgrid[0:side, 0:side]
    return y / side, x / side


def _portrait(side: int) -> np.ndarray:
    y, x = _grid(side)
    img = 0.25 + 0.3 * y
    for (cy, cx, sy, sx, amp) in (
            (0.38, 0.50, 0.18, 0.14, 0.55),
            (0.33, 0.42, 0.030, 0.035, -0.35),
            (0.33, 0.58, 0.030, 0.035, -0.35),
            (0.52, 0.50, 0.045, 0.030, -0.25),
            (0.78, 0.50, 0.22, 0.30, 0.40)):
        img += amp * np.exp(-((y - cy) ** 2 / (2 * sy ** 2) + (x - cx) ** 2 / (2 * sx ** 2)))
    return img


def _texture(side: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(11)))
    noise = rng.standard_normal((side, side))
    f = np.fft.fftfreq(side)
    r = np.hypot(*np.meshgrid(f, f, indexing="ij"))
    band = np.exp(-((r - 0.18) / 0.06) ** 2)
    img = np.fft.ifft2(np.fft.fft2(noise) * band).real
    return img - img.min()


def _spots(side: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(7)))
    y, x = np.mgrid[0:side, 0:side]
    img = np.full((side, side), 0.02)
    for _ in range(14):
        cy, cx = rng.integers(0, side, size=2)
        amp = 0.5 + 0.5 * rng.random()
        # wrapped so spots near the border stay round
        dy = np.minimum(np.abs(y - cy), side - np.abs(y - cy))
        dx = np.minimum(np.abs(x - cx), side - np.abs(x - cx))
        img += amp * np.exp(-(dy ** 2 + dx ** 2) / (2 * (side / 64.0) ** 2))
    return img


def _fractal(side: int) -> np.ndarray:
    # Weierstrass-type surface: one cosine product per octave with geometric
    # amplitude decay, so every scale contributes the same structure.
    y, x = np.mgrid[0:side, 0:side]
    img = np.zeros((side, side))
    for k in range(int(np.log2(side))):
        s = 1 << k
        img += 0.7 ** k * (np.cos(2 * np.pi * s * y / side + 0.7 * k)
                           * np.cos(2 * np.pi * s * x / side + 1.3 * k))
    return img


def synthetic_corpus(side: int = 128) -> dict:
    """Deterministic corpus images as GrayImage, keyed by content class."""
    if side < 8 or side & (side - 1):
        raise QPhaseError("invalid-parameter", f"side must be a power of two >= 8, got {side}")
    out = {}
    for name, make in (("portrait", _portrait), ("texture", _texture),
                       ("spots", _spots), ("fractal", _fractal)):
        fld = make(side)
        lo, hi = float(fld.min()), float(fld.max())
        px = np.rint((fld - lo) / (hi - lo) * 255.0).astype(np.uint8)
        out[name] = GrayImage(px)
    return out
