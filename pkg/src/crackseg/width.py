"""Width recovery: turn a crack centerline track into a pixel mask.

Width expansion (WE) grows the rasterized track by an adaptive intensity
threshold; edge tracking (ET) extracts the two crack edges as planar
shortest paths over an oriented edge-filter cost and fills between them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.ndimage
from shapely.geometry import LineString

from . import _fastmarch
from .images import CrackMask, GrayImage, PlanarTrack, rasterize_track, supercover_line


class EdgeCrossError(RuntimeError):
    """The two recovered edge polylines intersect; retry with a larger offset hint."""


@dataclass(frozen=True)
class WEParams:
    k_w: float = 2.0
    max_iterations: int = 500
    connectivity: int = 8

    def __post_init__(self):
        if self.k_w <= 0:
            raise ValueError("k_w must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.connectivity not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")


@dataclass(frozen=True)
class ETParams:
    segment_length: float = 11.0
    patch_halfwidth: float = 20.0
    derivative_sigma: float = 2.0
    offset_hint: float = 3.0

    def __post_init__(self):
        for name in ("segment_length", "patch_halfwidth", "derivative_sigma"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.offset_hint < 0:
            raise ValueError("offset_hint must be nonnegative")


_STRUCT4 = scipy.ndimage.generate_binary_structure(2, 1)
_STRUCT8 = scipy.ndimage.generate_binary_structure(2, 2)


def width_expand(img: GrayImage, track: PlanarTrack, params: WEParams = WEParams()) -> CrackMask:
    """Grow the rasterized track by admitting neighbors darker than
    T_w = mean - k_w * std of the current segment's intensities.

    Strictly-below comparison: a zero-variance segment admits nothing.
    """
    seed = rasterize_track(track, (img.height, img.width))
    mask = seed.bits.copy()
    data = img.data
    struct = _STRUCT8 if params.connectivity == 8 else _STRUCT4
    iterations = 0
    for _ in range(params.max_iterations):
        vals = data[mask]
        t_w = vals.mean() - params.k_w * vals.std()
        frontier = scipy.ndimage.binary_dilation(mask, struct) & ~mask
        admit = frontier & (data < t_w)
        iterations += 1
        if not admit.any():
            break
        mask |= admit
    meta = {
        "method": "WE",
        "params": {"k_w": params.k_w, "max_iterations": params.max_iterations, "connectivity": params.connectivity},
        "iterations": iterations,
    }
    return CrackMask(mask, meta)


def _track_stations(track: PlanarTrack, spacing: float):
    """Points and unit tangents sampled along the track at fixed arc spacing."""
    dense = track.resampled(spacing)
    pts = dense.points
    tangents = np.zeros_like(pts)
    tangents[1:-1] = pts[2:] - pts[:-2]
    tangents[0] = pts[1] - pts[0]
    tangents[-1] = pts[-1] - pts[-2]
    norms = np.linalg.norm(tangents, axis=1, keepdims=True)
    tangents = tangents / np.maximum(norms, 1e-12)
    return pts, tangents


def build_edge_cost(img: GrayImage, track: PlanarTrack, params: ETParams = ETParams(), eps: float = 1e-3) -> np.ndarray:
    """Cost map whose valleys are the crack's edges.

    The track is split into segments; each contributes the magnitude of the
    first Gaussian derivative taken perpendicular to its own orientation,
    over an aligned rectangle segment_length x 2*patch_halfwidth. First
    derivatives are steerable, so one gradient pair serves every segment.
    Responses are summed over patches, normalized, and inverted to a cost
    that is 1/eps outside all patches.
    """
    if track.length < 1e-9:
        raise ValueError("degenerate track: no extent")
    data = img.data
    s = params.derivative_sigma
    gx = scipy.ndimage.gaussian_filter(data, s, order=(0, 1), mode="nearest")
    gy = scipy.ndimage.gaussian_filter(data, s, order=(1, 0), mode="nearest")

    h, w = data.shape
    response = np.zeros((h, w))
    covered = np.zeros((h, w), dtype=bool)

    pts, tangents = _track_stations(track, params.segment_length)
    yy, xx = np.mgrid[0:h, 0:w]
    half_len = params.segment_length / 2.0
    for center, tangent in zip(pts, tangents):
        nx, ny = -tangent[1], tangent[0]  # perpendicular (unit)
        cx, cy = center
        reach = half_len + params.patch_halfwidth + 1
        x0, x1 = int(max(cx - reach, 0)), int(min(cx + reach + 1, w))
        y0, y1 = int(max(cy - reach, 0)), int(min(cy + reach + 1, h))
        if x0 >= x1 or y0 >= y1:
            continue
        px = xx[y0:y1, x0:x1] - cx
        py = yy[y0:y1, x0:x1] - cy
        u = px * tangent[0] + py * tangent[1]
        v = px * nx + py * ny
        inside = (np.abs(u) <= half_len) & (np.abs(v) <= params.patch_halfwidth)
        if not inside.any():
            continue
        perp_deriv = nx * gx[y0:y1, x0:x1] + ny * gy[y0:y1, x0:x1]
        response[y0:y1, x0:x1][inside] += np.abs(perp_deriv[inside])
        covered[y0:y1, x0:x1] |= inside

    top = response.max()
    if top > 0:
        response = response / top
    cost = np.full((h, w), 1.0 / eps)
    cost[covered] = 1.0 / (eps + response[covered])
    return cost


def _shortest_path(cost: np.ndarray, start, end) -> PlanarTrack:
    sy, sx = int(round(start[1])), int(round(start[0]))
    ey, ex = int(round(end[1])), int(round(end[0]))
    dist, pred = _fastmarch.dijkstra_grid(cost.astype(np.float64), sy, sx)
    h, w = cost.shape
    if not np.isfinite(dist[ey, ex]):
        raise RuntimeError("edge endpoint unreachable")
    path = []
    node = ey * w + ex
    start_node = sy * w + sx
    while node != start_node and node >= 0:
        path.append((node % w, node // w))
        node = pred[node // w, node % w]
    path.append((sx, sy))
    path.reverse()
    if len(path) < 2:
        path.append((path[0][0] + 1e-6, path[0][1]))
    return PlanarTrack(np.array(path, dtype=float))


def _clip_point(img: GrayImage, x: float, y: float):
    return (min(max(x, 0.0), img.width - 1.0), min(max(y, 0.0), img.height - 1.0))


def edge_track_segment(img: GrayImage, track: PlanarTrack, params: ETParams = ETParams()) -> CrackMask:
    """Track both crack edges on the oriented edge cost and fill between them."""
    cost = build_edge_cost(img, track, params)
    pts, tangents = _track_stations(track, params.segment_length)

    ends = []
    for side in (+1.0, -1.0):
        pair = []
        for idx in (0, -1):
            tangent = tangents[idx]
            nx, ny = -tangent[1], tangent[0]
            px, py = pts[idx]
            pair.append(_clip_point(img, px + side * params.offset_hint * nx, py + side * params.offset_hint * ny))
        ends.append(pair)

    edge_a = _shortest_path(cost, ends[0][0], ends[0][1])
    edge_b = _shortest_path(cost, ends[1][0], ends[1][1])

    degenerate_hint = params.offset_hint == 0
    if not degenerate_hint:
        la, lb = LineString(edge_a.points), LineString(edge_b.points)
        inter = la.intersection(lb)
        if not inter.is_empty:
            raise EdgeCrossError(
                "edge paths cross each other; increase offset_hint"
            )

    mask = rasterize_track(track, (img.height, img.width)).bits
    la, lb = LineString(edge_a.points), LineString(edge_b.points)
    stations, tangs = _track_stations(track, 1.0)
    reach = params.patch_halfwidth
    for center, tangent in zip(stations, tangs):
        nx, ny = -tangent[1], tangent[0]
        cx, cy = center
        ray = LineString(
            [(cx - reach * nx, cy - reach * ny), (cx + reach * nx, cy + reach * ny)]
        )
        ia = ray.intersection(la)
        ib = ray.intersection(lb)
        if ia.is_empty or ib.is_empty:
            continue
        pa = _nearest_point(ia, cx, cy)
        pb = _nearest_point(ib, cx, cy)
        for xi, yi in supercover_line(pa[0], pa[1], pb[0], pb[1]):
            if 0 <= xi < img.width and 0 <= yi < img.height:
                mask[yi, xi] = True

    meta = {
        "method": "ET",
        "params": {
            "segment_length": params.segment_length,
            "patch_halfwidth": params.patch_halfwidth,
            "derivative_sigma": params.derivative_sigma,
            "offset_hint": params.offset_hint,
        },
        "degenerate_offset": degenerate_hint,
    }
    return CrackMask(mask, meta)


def _nearest_point(geom, cx: float, cy: float):
    """Closest coordinate of an intersection result to the station center."""
    coords = []
    if hasattr(geom, "geoms"):
        for g in geom.geoms:
            coords.extend(list(g.coords))
    else:
        coords.extend(list(geom.coords))
    arr = np.array(coords)
    d = (arr[:, 0] - cx) ** 2 + (arr[:, 1] - cy) ** 2
    return arr[np.argmin(d)]
