"""Image containers, quantization, power statistics and bit-exact file I/O.

Images are immutable value objects: every operation returns a new image and
the underlying numpy buffers are marked read-only, so instances can be shared
freely between threads.
"""

import json
import os
from dataclasses import dataclass

import numpy as np
from PIL import Image as PILImage

from .errors import ConfigurationError, DomainError, ImageIOError

__all__ = [
    "RealImage",
    "ComplexImage",
    "QuantizationSpec",
    "quantize",
    "quantize_codes",
    "power",
    "save_image",
    "load_image",
    "save_complex",
    "load_complex",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RealImage:
    """A width x height grid of real samples with an optional validity mask.

    ``samples`` is stored row-major as a 2-D float64 array of shape
    (height, width); ``samples[y, x]`` addresses column x of row y.  The
    optional boolean ``mask`` marks the region with well defined fringes.
    """

    samples: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ConfigurationError("samples must be a non-empty 2-D array")
        if not np.isfinite(arr).all():
            raise ConfigurationError("samples must be finite (no NaN/Inf)")
        object.__setattr__(self, "samples", _freeze(arr))
        if self.mask is not None:
            m = np.asarray(self.mask, dtype=bool)
            if m.shape != arr.shape:
                raise ConfigurationError(
                    f"mask shape {m.shape} does not match image shape {arr.shape}"
                )
            object.__setattr__(self, "mask", _freeze(m))

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    def with_mask(self, mask: np.ndarray | None) -> "RealImage":
        return RealImage(self.samples, mask)


@dataclass(frozen=True, eq=False)
class ComplexImage:
    """A width x height grid of complex samples (spectra, analytic signals)."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.complex128)
        if arr.ndim != 2 or arr.size == 0:
            raise ConfigurationError("samples must be a non-empty 2-D array")
        if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
            raise ConfigurationError("samples must be finite (no NaN/Inf)")
        object.__setattr__(self, "samples", _freeze(arr))

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class QuantizationSpec:
    """Uniform mid-tread quantizer mapping [black_level, white_level] onto
    the integer codes [0, 2**bits - 1]; out-of-range values are clipped."""

    bits: int
    black_level: float = 0.0
    white_level: float = 1.0

    def __post_init__(self):
        if not (1 <= int(self.bits) <= 16):
            raise ConfigurationError(f"bits must be in [1, 16], got {self.bits}")
        if not (self.black_level < self.white_level):
            raise ConfigurationError("black_level must be below white_level")

    @property
    def levels(self) -> int:
        return (1 << int(self.bits)) - 1

    @property
    def step(self) -> float:
        return (self.white_level - self.black_level) / self.levels


def quantize_codes(img: RealImage, spec: QuantizationSpec) -> np.ndarray:
    """Integer code array for ``img`` under ``spec`` (rounded and clipped)."""
    norm = (img.samples - spec.black_level) / (spec.white_level - spec.black_level)
    codes = np.rint(np.clip(norm, 0.0, 1.0) * spec.levels)
    return codes.astype(np.uint16 if spec.bits > 8 else np.uint8)


def quantize(img: RealImage, spec: QuantizationSpec) -> RealImage:
    """Quantize ``img`` and map the codes back to real units.

    The operation is idempotent and order-preserving; the residual
    ``img - quantize(img)`` carries the classic step**2 / 12 noise power for
    busy signals spanning the full range.
    """
    codes = quantize_codes(img, spec).astype(np.float64)
    return RealImage(spec.black_level + codes * spec.step, img.mask)


def power(img: RealImage | ComplexImage, region: np.ndarray | None = None) -> float:
    """Mean squared magnitude over ``region``.

    ``region`` defaults to the image's own mask when present, else to the
    full frame.  Raises DomainError for an empty region.
    """
    data = img.samples
    if region is None and isinstance(img, RealImage):
        region = img.mask
    if region is not None:
        region = np.asarray(region, dtype=bool)
        if region.shape != data.shape:
            raise ConfigurationError("region shape does not match image shape")
        if not region.any():
            raise DomainError("power over an empty region is undefined")
        data = data[region]
    return float(np.mean(np.abs(data) ** 2))


# --------------------------------------------------------------------------
# File I/O.  PGM is written by hand (binary P5, big-endian for 16-bit raster),
# PNG goes through Pillow, and complex images use a one-line JSON header
# followed by planar little-endian float32 data.
# --------------------------------------------------------------------------


def _atomic_write(path: str, payload: bytes) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def _checked_codes(img: RealImage, bits: int) -> np.ndarray:
    if not (1 <= bits <= 16):
        raise ConfigurationError(f"bits must be in [1, 16], got {bits}")
    arr = img.samples
    codes = np.rint(arr)
    if not np.allclose(arr, codes, atol=1e-6):
        raise ConfigurationError(
            "image samples are not integer codes; quantize before saving"
        )
    if codes.min() < 0 or codes.max() > (1 << bits) - 1:
        raise ConfigurationError(
            f"code values outside [0, {(1 << bits) - 1}] for {bits}-bit storage"
        )
    return codes.astype(np.uint16 if bits > 8 else np.uint8)


def save_image(img: RealImage, path: str, bits: int = 8) -> None:
    """Write integer-coded samples as binary PGM (P5) or grayscale PNG.

    The format is chosen from the file extension.  Samples must already be
    integer codes in [0, 2**bits - 1]; round-trips are lossless at the
    stored bit depth.
    """
    codes = _checked_codes(img, bits)
    ext = os.path.splitext(path)[1].lower()
    if ext == ".pgm":
        maxval = (1 << bits) - 1
        header = b"P5\n%d %d\n%d\n" % (img.width, img.height, maxval)
        raster = codes.astype(">u2").tobytes() if bits > 8 else codes.tobytes()
        _atomic_write(path, header + raster)
    elif ext == ".png":
        if bits <= 8:
            pil = PILImage.fromarray(codes.astype(np.uint8))
        else:
            pil = PILImage.fromarray(codes.astype(np.uint16))
        tmp = f"{path}.tmp-{os.getpid()}"
        pil.save(tmp, format="PNG")
        os.replace(tmp, path)
    else:
        raise ImageIOError(f"unsupported image extension {ext!r} for {path}")


def _parse_pgm(blob: bytes, path: str) -> np.ndarray:
    if not blob.startswith(b"P5"):
        raise ImageIOError(f"unsupported: expected binary PGM (P5) in {path}")
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(blob) and blob[pos : pos + 1].isspace():
            pos += 1
        if pos < len(blob) and blob[pos : pos + 1] == b"#":
            while pos < len(blob) and blob[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(blob) and not blob[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageIOError(f"truncated PGM header in {path}")
        fields.append(blob[start:pos])
    pos += 1  # single whitespace byte terminates the header
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError:
        raise ImageIOError(f"malformed PGM header in {path}") from None
    if not (0 < maxval < 65536):
        raise ImageIOError(f"unsupported PGM maxval {maxval} in {path}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = width * height * dtype.itemsize
    raster = blob[pos : pos + need]
    if len(raster) != need:
        raise ImageIOError(f"truncated PGM raster in {path}")
    return (
        np.frombuffer(raster, dtype=dtype)
        .reshape(height, width)
        .astype(np.float64)
    )


def load_image(path: str) -> RealImage:
    """Load an 8/16-bit grayscale PGM or PNG; samples are the stored codes."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read(2)
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if blob.startswith(b"P5"):
        with open(path, "rb") as fh:
            return RealImage(_parse_pgm(fh.read(), path))
    try:
        pil = PILImage.open(path)
        pil.load()
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if pil.mode == "L":
        arr = np.asarray(pil, dtype=np.uint8)
    elif pil.mode in ("I;16", "I"):
        arr = np.asarray(pil, dtype=np.int64)
        if arr.min() < 0 or arr.max() > 65535:
            raise ImageIOError(f"values outside 16-bit range in {path}")
    else:
        raise ImageIOError(
            f"unsupported: expected grayscale, got mode {pil.mode!r} in {path}"
        )
    return RealImage(arr.astype(np.float64))


_COMPLEX_DTYPE = "f32le"


def save_complex(img: ComplexImage, path: str) -> None:
    """Write a complex image as a JSON header line plus planar float32 data.

    Components are stored as little-endian float32, the full real plane
    followed by the full imaginary plane; round-trips are bit-exact at
    float32 precision.
    """
    header = json.dumps(
        {
            "width": img.width,
            "height": img.height,
            "layout": "planar",
            "dtype": _COMPLEX_DTYPE,
        },
        separators=(",", ":"),
    ).encode("ascii")
    re_plane = img.samples.real.astype("<f4").tobytes()
    im_plane = img.samples.imag.astype("<f4").tobytes()
    _atomic_write(path, header + b"\n" + re_plane + im_plane)


def load_complex(path: str) -> ComplexImage:
    """Load a complex image written by :func:`save_complex`."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    newline = blob.find(b"\n")
    if newline < 0:
        raise ImageIOError(f"missing complex header line in {path}")
    try:
        header = json.loads(blob[:newline].decode("ascii"))
        width, height = int(header["width"]), int(header["height"])
        layout, dtype = header["layout"], header["dtype"]
    except (ValueError, KeyError, UnicodeDecodeError) as exc:
        raise ImageIOError(f"malformed complex header in {path}: {exc}") from exc
    if layout != "planar" or dtype != _COMPLEX_DTYPE:
        raise ImageIOError(
            f"unsupported complex layout/dtype {layout!r}/{dtype!r} in {path}"
        )
    need = width * height * 4
    raster = blob[newline + 1 :]
    if len(raster) != 2 * need:
        raise ImageIOError(f"truncated complex raster in {path}")
    re_plane = np.frombuffer(raster[:need], dtype="<f4").reshape(height, width)
    im_plane = np.frombuffer(raster[need:], dtype="<f4").reshape(height, width)
    return ComplexImage(re_plane.astype(np.float64) + 1j * im_plane.astype(np.float64))
