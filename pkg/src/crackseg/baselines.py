"""Comparison trackers: Dijkstra on a Frangi cost map and a greedy walker.

Both operate purely in the image plane; they exist to quantify what the
orientation-lifted tracker adds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.ndimage

from . import _fastmarch
from .images import GrayImage, PlanarTrack

DT_EPSILON = 1e-3


@dataclass
class VesselnessMap:
    values: np.ndarray  # (H, W) in [0, 1]
    scales: tuple[float, ...]


def frangi(
    img: GrayImage,
    scales=(1.0, 2.0, 4.0),
    beta: float = 0.5,
    gamma_auto: bool = True,
    gamma: float = 15.0,
) -> VesselnessMap:
    """Hessian-eigenvalue ridge measure for dark ridges, maxed over scales.

    Per scale: eigenvalues |l1| <= |l2| of the scale-normalized Gaussian
    Hessian; response exp(-R_B^2 / 2 beta^2) * (1 - exp(-S^2 / 2 c^2)) with
    R_B = l1/l2 and S the Frobenius norm, zeroed where l2 < 0 (bright
    ridge). gamma_auto sets c to half the max S of each scale.
    """
    scales = tuple(scales)
    if not scales:
        raise ValueError("scales must be nonempty")
    data = img.data
    out = np.zeros_like(data)
    for s in scales:
        hxx = s * s * scipy.ndimage.gaussian_filter(data, s, order=(0, 2), mode="nearest")
        hyy = s * s * scipy.ndimage.gaussian_filter(data, s, order=(2, 0), mode="nearest")
        hxy = s * s * scipy.ndimage.gaussian_filter(data, s, order=(1, 1), mode="nearest")
        # Closed-form symmetric 2x2 eigenvalues.
        half_tr = 0.5 * (hxx + hyy)
        root = np.sqrt(np.maximum(0.25 * (hxx - hyy) ** 2 + hxy**2, 0.0))
        e1 = half_tr - root
        e2 = half_tr + root
        swap = np.abs(e1) > np.abs(e2)
        l1 = np.where(swap, e2, e1)
        l2 = np.where(swap, e1, e2)
        frob2 = hxx**2 + 2.0 * hxy**2 + hyy**2
        c = 0.5 * np.sqrt(frob2.max()) if gamma_auto else gamma
        if c <= 0:
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            rb2 = np.where(l2 != 0.0, (l1 / np.where(l2 == 0.0, 1.0, l2)) ** 2, 0.0)
        resp = np.exp(-rb2 / (2.0 * beta**2)) * (1.0 - np.exp(-frob2 / (2.0 * c**2)))
        resp[l2 < 0.0] = 0.0
        out = np.maximum(out, resp)
    return VesselnessMap(np.clip(out, 0.0, 1.0), scales)


def vesselness_cost(v: VesselnessMap, eps: float = DT_EPSILON) -> np.ndarray:
    return 1.0 / (eps + v.values)


def dijkstra_track(costmap: np.ndarray, seed_px, tip_px) -> PlanarTrack:
    """Exact shortest 8-connected path; edge weight = mean endpoint cost x length."""
    if tuple(seed_px) == tuple(tip_px):
        raise ValueError("degenerate endpoints: seed equals tip")
    if np.any(costmap <= 0):
        raise ValueError("costmap must be positive")
    h, w = costmap.shape
    sx, sy = int(round(seed_px[0])), int(round(seed_px[1]))
    tx, ty = int(round(tip_px[0])), int(round(tip_px[1]))
    for x, y in ((sx, sy), (tx, ty)):
        if not (0 <= x < w and 0 <= y < h):
            raise ValueError("endpoint outside image")
    dist, pred = _fastmarch.dijkstra_grid(costmap.astype(np.float64), sy, sx)
    if not np.isfinite(dist[ty, tx]):
        raise RuntimeError("tip unreachable")
    path = []
    node = ty * w + tx
    start = sy * w + sx
    while node != start and node >= 0:
        path.append((node % w, node // w))
        node = pred[node // w, node % w]
    path.append((sx, sy))
    path.reverse()
    return PlanarTrack(np.array(path, dtype=float))


@dataclass
class WalkResult:
    track: PlanarTrack
    reached: bool
    steps: int


def flyfisher_track(
    img: GrayImage,
    seed_px,
    tip_px,
    step: float = 2.0,
    fan_halfwidth: float = np.deg2rad(60.0),
    n_probe: int = 25,
    max_steps: int = 4000,
) -> WalkResult:
    """Greedy walk toward the darkest probe direction.

    From the current point, directions within +/- fan_halfwidth of the
    current heading (initialized seed -> tip) are probed; the walker moves
    one step along the direction whose sampled mean intensity is lowest.
    No global optimality: the walk stops when it comes within one step of
    the tip or the budget runs out (flagged as not reached).
    """
    if tuple(seed_px) == tuple(tip_px):
        raise ValueError("degenerate endpoints: seed equals tip")
    sx, sy = float(seed_px[0]), float(seed_px[1])
    tx, ty = float(tip_px[0]), float(tip_px[1])
    if not (img.contains(sx, sy) and img.contains(tx, ty)):
        raise ValueError("endpoint outside image")

    data = img.data
    h, w = data.shape

    def sample(x, y):
        xi = min(max(x, 0.0), w - 1.0)
        yi = min(max(y, 0.0), h - 1.0)
        x0, y0 = int(xi), int(yi)
        x1, y1 = min(x0 + 1, w - 1), min(y0 + 1, h - 1)
        fx, fy = xi - x0, yi - y0
        return (
            data[y0, x0] * (1 - fx) * (1 - fy)
            + data[y0, x1] * fx * (1 - fy)
            + data[y1, x0] * (1 - fx) * fy
            + data[y1, x1] * fx * fy
        )

    heading = np.arctan2(ty - sy, tx - sx)
    x, y = sx, sy
    pts = [(x, y)]
    reached = False
    steps = 0
    ts = np.linspace(0.3, 1.0, 4)
    for _ in range(max_steps):
        if np.hypot(tx - x, ty - y) <= step:
            pts.append((tx, ty))
            reached = True
            break
        angles = heading + np.linspace(-fan_halfwidth, fan_halfwidth, n_probe)
        best_angle = None
        best_val = np.inf
        for a in angles:
            ca, sa = np.cos(a), np.sin(a)
            px = x + step * ca * ts
            py = y + step * sa * ts
            if px.min() < 0 or px.max() > w - 1 or py.min() < 0 or py.max() > h - 1:
                continue
            val = np.mean([sample(xx, yy) for xx, yy in zip(px, py)])
            if val < best_val:
                best_val = val
                best_angle = a
        if best_angle is None:
            break
        heading = best_angle
        x += step * np.cos(best_angle)
        y += step * np.sin(best_angle)
        pts.append((x, y))
        steps += 1
    if len(pts) < 2:
        pts.append((x + 1e-6, y))
    return WalkResult(PlanarTrack(np.array(pts)), reached, steps)
