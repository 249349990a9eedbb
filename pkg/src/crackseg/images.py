"""Image loading, normalization, masks and track geometry shared by the whole toolkit.

Coordinate convention: x runs along image columns, y along rows. Arrays are
indexed (row, col) = (y, x); all public point-like values are (x, y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

MIN_SIDE = 8

# Rec. 601 luma weights, fixed for reproducibility.
_LUMA = np.array([0.299, 0.587, 0.114])


class ImageError(ValueError):
    """Unreadable, unsupported or degenerate image input."""


@dataclass(frozen=True)
class GrayImage:
    """2D scalar field with samples in [0, 1], row-major (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ImageError(f"expected 2D data, got shape {data.shape}")
        h, w = data.shape
        if h < MIN_SIDE or w < MIN_SIDE:
            raise ImageError(f"image {w}x{h} below minimum workable size {MIN_SIDE}")
        if not np.all(np.isfinite(data)):
            raise ImageError("image contains non-finite samples")
        if data.min() < 0.0 or data.max() > 1.0:
            raise ImageError("image samples outside [0, 1]; normalize first")
        object.__setattr__(self, "data", data)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def contains(self, x: float, y: float) -> bool:
        return 0 <= x <= self.width - 1 and 0 <= y <= self.height - 1


@dataclass(frozen=True)
class PlanarTrack:
    """Ordered subpixel (x, y) polyline."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError(f"track needs >= 2 (x, y) points, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("track contains non-finite points")
        steps = np.diff(pts, axis=0)
        if np.any(np.all(steps == 0.0, axis=1)):
            raise ValueError("consecutive track points must be distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def length(self) -> float:
        """Arc length in pixels."""
        return float(np.sum(np.hypot(*np.diff(self.points, axis=0).T)))

    def resampled(self, spacing: float) -> "PlanarTrack":
        """Resample at uniform arc-length spacing, keeping both endpoints."""
        pts = self.points
        seg = np.hypot(*np.diff(pts, axis=0).T)
        s = np.concatenate([[0.0], np.cumsum(seg)])
        n = max(int(np.ceil(s[-1] / spacing)), 1)
        si = np.linspace(0.0, s[-1], n + 1)
        x = np.interp(si, s, pts[:, 0])
        y = np.interp(si, s, pts[:, 1])
        out = np.column_stack([x, y])
        keep = np.concatenate([[True], np.any(np.diff(out, axis=0) != 0.0, axis=1)])
        return PlanarTrack(out[keep])


@dataclass
class CrackMask:
    """Per-pixel boolean segmentation plus provenance."""

    bits: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 2:
            raise ValueError(f"mask must be 2D, got shape {bits.shape}")
        self.bits = bits

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def count(self) -> int:
        return int(self.bits.sum())


def load_image(path) -> GrayImage:
    """Load a PNG/JPEG raster as a luminance image scaled to [0, 1]."""
    path = Path(path)
    if not path.exists():
        raise ImageError(f"no such file: {path}")
    try:
        with Image.open(path) as im:
            im.load()
            arr = _to_gray_array(im)
    except ImageError:
        raise
    except Exception as exc:
        raise ImageError(f"cannot decode {path}: {exc}") from exc
    return GrayImage(arr)


def from_bytes(blob: bytes) -> GrayImage:
    """Decode an in-memory PNG/JPEG blob (service upload path)."""
    import io

    try:
        with Image.open(io.BytesIO(blob)) as im:
            im.load()
            arr = _to_gray_array(im)
    except ImageError:
        raise
    except Exception as exc:
        raise ImageError(f"cannot decode image bytes: {exc}") from exc
    return GrayImage(arr)


def _to_gray_array(im: Image.Image) -> np.ndarray:
    if im.mode in ("I;16", "I;16B", "I;16L", "I"):
        arr = np.asarray(im, dtype=np.float64) / 65535.0
    elif im.mode == "L":
        arr = np.asarray(im, dtype=np.float64) / 255.0
    elif im.mode in ("RGB", "RGBA"):
        rgb = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
        arr = rgb @ _LUMA
    elif im.mode in ("P", "LA", "1"):
        arr = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
    else:
        raise ImageError(f"unsupported image mode {im.mode!r}")
    return np.clip(arr, 0.0, 1.0)


def normalize(img: GrayImage) -> GrayImage:
    """Affine rescale to full [0, 1] range; constant images map to zeros."""
    lo = img.data.min()
    hi = img.data.max()
    if hi - lo == 0.0:
        return GrayImage(np.zeros_like(img.data))
    return GrayImage((img.data - lo) / (hi - lo))


def supercover_line(x0: float, y0: float, x1: float, y1: float) -> list[tuple[int, int]]:
    """All pixels a segment passes through, as a 4-connected chain.

    Amanatides-Woo voxel traversal; pixel (i, j) covers [i-1/2, i+1/2) x [j-1/2, j+1/2).
    """
    xi, yi = int(round(x0)), int(round(y0))
    x_end, y_end = int(round(x1)), int(round(y1))
    pixels = [(xi, yi)]
    dx = x1 - x0
    dy = y1 - y0
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    # Parametric distance to the next vertical / horizontal pixel boundary.
    t_max_x = ((xi + 0.5 * step_x) - x0) / dx if dx != 0 else np.inf
    t_max_y = ((yi + 0.5 * step_y) - y0) / dy if dy != 0 else np.inf
    t_dx = abs(1.0 / dx) if dx != 0 else np.inf
    t_dy = abs(1.0 / dy) if dy != 0 else np.inf
    guard = 4 * (abs(x_end - xi) + abs(y_end - yi)) + 8
    while (xi, yi) != (x_end, y_end) and guard > 0:
        guard -= 1
        if t_max_x < t_max_y:
            xi += step_x
            t_max_x += t_dx
        else:
            yi += step_y
            t_max_y += t_dy
        pixels.append((xi, yi))
    return pixels


def rasterize_track(track: PlanarTrack, shape: tuple[int, int], meta: dict | None = None) -> CrackMask:
    """Rasterize a polyline onto a (height, width) grid as a 4-connected chain."""
    h, w = shape
    pts = track.points
    if pts[:, 0].min() < -0.5 or pts[:, 0].max() > w - 0.5 or pts[:, 1].min() < -0.5 or pts[:, 1].max() > h - 0.5:
        raise ValueError("track exits image bounds")
    bits = np.zeros((h, w), dtype=bool)
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        for xi, yi in supercover_line(x0, y0, x1, y1):
            if 0 <= xi < w and 0 <= yi < h:
                bits[yi, xi] = True
    m = {"method": "rasterized-track"}
    if meta:
        m.update(meta)
    return CrackMask(bits, m)


def save_mask(mask: CrackMask, path) -> None:
    """Write a mask as 8-bit PNG with values {0, 255}."""
    arr = np.where(mask.bits, 255, 0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path, format="PNG")


def load_mask(path, meta: dict | None = None) -> CrackMask:
    """Read a {0, 255} PNG back into a mask (values > 127 are crack)."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"))
    return CrackMask(arr > 127, meta or {"method": "loaded"})


def save_image(img: GrayImage, path) -> None:
    arr = np.round(img.data * 255.0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path, format="PNG")
