"""Deterministic text and image encoders producing fixed-length bipolar vectors.

Text path: UTF-8 bytes, each rendered MSB-first at bits_per_char bits, padded
to max_chars with pad_byte, then 0/1 -> -1/+1. Image path: raster bytes ->
RGB matrix at a fixed target resolution (nearest neighbor, integer index
floor(i*src/dst)) -> binary bits (rgb24 channel bytes, or lum1 thresholded
luminance) -> bipolar.

A recaptured or re-encoded photo will not match bit-exactly; image passwords
only work with the identical source bytes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import core
from .core import IntVector, _freeze


class TextTooLongError(ValueError):
    """Encoded text exceeds the configured max_chars bytes."""


class CharRangeError(ValueError):
    """A byte does not fit in bits_per_char bits."""


class TextDecodeError(ValueError):
    """Recalled bits are not a valid UTF-8 string; raw bytes are attached."""

    def __init__(self, message: str, raw: bytes):
        super().__init__(message)
        self.raw = raw


class ImageDecodeError(ValueError):
    """Input bytes are not a decodable raster image."""


@dataclass(frozen=True)
class TextEncodingConfig:
    bits_per_char: int = 8
    max_chars: int = 8
    pad_byte: int = 0

    def __post_init__(self):
        if self.bits_per_char < 1:
            raise ValueError("bits_per_char must be positive")
        if self.max_chars < 1:
            raise ValueError("max_chars must be positive")
        if not 0 <= self.pad_byte <= 255:
            raise ValueError("pad_byte must be in 0..255")
        if self.pad_byte >= (1 << self.bits_per_char):
            raise ValueError("pad_byte does not fit in bits_per_char bits")

    @property
    def vector_length(self) -> int:
        return self.bits_per_char * self.max_chars


@dataclass(frozen=True)
class ImageEncodingConfig:
    width: int
    height: int
    mode: str = "rgb24"
    lum_threshold: int = 128

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("target resolution must be positive")
        if self.mode not in ("rgb24", "lum1"):
            raise ValueError(f"mode must be 'rgb24' or 'lum1', got {self.mode!r}")
        if not 0 <= self.lum_threshold <= 255:
            raise ValueError("lum_threshold must be in 0..255")

    @property
    def vector_length(self) -> int:
        per_pixel = 24 if self.mode == "rgb24" else 1
        return self.width * self.height * per_pixel


@dataclass(frozen=True)
class RgbMatrix:
    """Per-pixel (r, g, b) integers 0..255, row-major, shape (height, width, 3)."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.int64)
        if px.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixels shape {px.shape} does not match (height={self.height}, width={self.width}, 3)"
            )
        if px.min() < 0 or px.max() > 255:
            raise ValueError("channel values must be in 0..255")
        object.__setattr__(self, "pixels", _freeze(px))


def _text_bytes(s: str, cfg: TextEncodingConfig) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > cfg.max_chars:
        raise TextTooLongError(
            f"text is {len(raw)} bytes encoded, config allows {cfg.max_chars}"
        )
    return raw + bytes([cfg.pad_byte]) * (cfg.max_chars - len(raw))


def _bytes_to_bits(data: bytes, bits_per_char: int) -> np.ndarray:
    values = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    too_big = values >= (1 << bits_per_char)
    if bits_per_char < 8 and too_big.any():
        bad = int(values[too_big][0])
        raise CharRangeError(f"byte {bad} does not fit in {bits_per_char} bits")
    shifts = np.arange(bits_per_char - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).reshape(-1)


def encode_text(s: str, cfg: TextEncodingConfig) -> IntVector:
    """Fixed-length bipolar rendering of a string; injective on pad-free inputs."""
    bits = _bytes_to_bits(_text_bytes(s, cfg), cfg.bits_per_char)
    return _freeze(bits * 2 - 1)


def decode_text(v, cfg: TextEncodingConfig) -> str:
    """Inverse of encode_text up to stripped trailing pad bytes.

    Raises TextDecodeError (with .raw holding the bytes) when the bit groups
    do not form a valid UTF-8 string, rather than mangling the output.
    """
    arr = core.as_bipolar(v)
    if arr.size != cfg.vector_length:
        raise core.DimensionMismatchError(
            f"vector has length {arr.size}, config expects {cfg.vector_length}"
        )
    bits = (arr + 1) // 2
    groups = bits.reshape(cfg.max_chars, cfg.bits_per_char)
    weights = 1 << np.arange(cfg.bits_per_char - 1, -1, -1)
    values = groups @ weights
    if values.max() > 255:
        raise TextDecodeError(
            f"bit group value {int(values.max())} exceeds a byte", raw=b""
        )
    raw = bytes(int(x) for x in values).rstrip(bytes([cfg.pad_byte]))
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TextDecodeError(f"recalled bytes are not valid UTF-8: {exc}", raw=raw) from exc


def _nearest_neighbor_indices(dst: int, src: int) -> np.ndarray:
    return (np.arange(dst) * src) // dst


def image_to_rgb_matrix(data: bytes, cfg: ImageEncodingConfig) -> RgbMatrix:
    """Decode raster bytes (PNG, BMP, ...) and resample to the target resolution.

    Sampling is nearest neighbor with source index floor(i*src/dst): integer
    exact, so the same bytes give the same matrix on every platform.
    """
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageDecodeError(f"cannot decode image: {exc}") from exc
    arr = np.asarray(img.convert("RGB"), dtype=np.int64)  # (src_h, src_w, 3)
    rows = _nearest_neighbor_indices(cfg.height, arr.shape[0])
    cols = _nearest_neighbor_indices(cfg.width, arr.shape[1])
    sampled = arr[np.ix_(rows, cols)]
    return RgbMatrix(width=cfg.width, height=cfg.height, pixels=sampled)


def luminance(pixels: np.ndarray) -> np.ndarray:
    """Integer rec.601 luma: (299R + 587G + 114B + 500) // 1000, half-up."""
    px = np.asarray(pixels, dtype=np.int64)
    return (299 * px[..., 0] + 587 * px[..., 1] + 114 * px[..., 2] + 500) // 1000


def rgb_to_binary(matrix: RgbMatrix, cfg: ImageEncodingConfig) -> IntVector:
    """Bits for the whole image, row-major pixel order.

    rgb24: 24 bits per pixel, R then G then B, each byte MSB-first.
    lum1: one bit per pixel, 1 iff luminance >= lum_threshold.
    """
    if cfg.mode == "rgb24":
        flat = matrix.pixels.reshape(-1).astype(np.uint8)
        bits = np.unpackbits(flat).astype(np.int64)
    else:
        lum = luminance(matrix.pixels)
        bits = (lum >= cfg.lum_threshold).astype(np.int64).reshape(-1)
    return _freeze(bits)


def binary_to_bipolar_vec(v) -> IntVector:
    """Bit vector to bipolar pattern; the BAM-facing normalization step."""
    return core.binary_to_bipolar(v)


def encode_image(data: bytes, cfg: ImageEncodingConfig) -> IntVector:
    """Full pipeline: raster bytes -> RGB matrix -> bits -> bipolar vector."""
    return binary_to_bipolar_vec(rgb_to_binary(image_to_rgb_matrix(data, cfg), cfg))
