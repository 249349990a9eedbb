"""Deterministic synthetic crack scenes with exact ground truth.

Desk-scale stand-in for field datasets: each family targets one failure
mode discussed for real cracks (partial visibility, decoy dark regions,
crossing structures, grainy edges). Given the same spec and seed the
output is bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .images import CrackMask, GrayImage, PlanarTrack

FAMILIES = (
    "straight-bar",
    "s-curve",
    "taper",
    "occluded-gap",
    "decoy-branch",
    "grainy-edge",
    "crossing-structure",
)


@dataclass(frozen=True)
class SceneSpec:
    family: str
    size: tuple[int, int] = (160, 160)  # (height, width)
    width: float = 5.0
    contrast: float = 0.8
    background: float = 0.88
    noise: float = 0.02
    edge_softness: float = 0.6
    gap_px: float = 15.0
    gap_lift: float = 0.8  # fraction of contrast restored inside the gap
    margin: int = 12

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown scene family {self.family!r}; choose from {FAMILIES}")


def _centerline(spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    """Dense centerline samples (x, y) at ~0.25 px spacing."""
    h, w = spec.size
    m = spec.margin
    n = 4 * max(h, w)
    t = np.linspace(0.0, 1.0, n)
    x = m + (w - 1 - 2 * m) * t
    cy = h / 2 + rng.uniform(-h * 0.08, h * 0.08)
    if spec.family in ("straight-bar", "grainy-edge", "taper"):
        slope = rng.uniform(-0.12, 0.12)
        y = cy + slope * (x - w / 2)
    elif spec.family in ("s-curve", "occluded-gap", "crossing-structure", "decoy-branch"):
        amp = rng.uniform(0.10, 0.16) * h
        phase = rng.uniform(0, 2 * np.pi)
        y = cy + amp * np.sin(2 * np.pi * t * rng.uniform(0.8, 1.2) + phase)
        y = np.clip(y, m, h - 1 - m)
    else:  # pragma: no cover - guarded by SceneSpec
        raise AssertionError(spec.family)
    return np.column_stack([x, y])


def _halfwidths(spec: SceneSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    base = spec.width / 2.0
    if spec.family == "taper":
        return np.linspace(3.0, 9.0, n) / 2.0
    if spec.family == "grainy-edge":
        # Ragged boundary: smooth random bumps make the true mask irregular.
        bumps = rng.normal(0.0, 1.0, n)
        kernel = np.exp(-0.5 * (np.arange(-12, 13) / 3.0) ** 2)
        kernel /= kernel.sum()
        smooth = np.convolve(bumps, kernel, mode="same")
        smooth = smooth / (np.abs(smooth).max() + 1e-12)
        return np.clip(base + 1.8 * smooth, 1.0, None)
    return np.full(n, base)


def synth_generate(spec: SceneSpec, rng_seed: int) -> tuple[GrayImage, PlanarTrack, CrackMask]:
    """Render a scene family; returns image, ground-truth track and mask."""
    rng = np.random.default_rng(rng_seed)
    h, w = spec.size
    center = _centerline(spec, rng)
    hw = _halfwidths(spec, len(center), rng)

    tree = cKDTree(center)
    yy, xx = np.mgrid[0:h, 0:w]
    pix = np.column_stack([xx.ravel(), yy.ravel()]).astype(float)
    dist, idx = tree.query(pix, workers=-1)
    dist = dist.reshape(h, w)
    idx = idx.reshape(h, w)
    local_hw = hw[idx]

    depth = np.clip((local_hw - dist) / spec.edge_softness + 0.5, 0.0, 1.0)

    if spec.family == "occluded-gap":
        # Lift intensity toward background inside an arc-length window.
        seg = np.hypot(*np.diff(center, axis=0).T)
        s = np.concatenate([[0.0], np.cumsum(seg)])
        total = s[-1]
        start = rng.uniform(0.35, 0.55) * total
        in_gap = (s[idx] >= start) & (s[idx] <= start + spec.gap_px)
        depth = np.where(in_gap, depth * (1.0 - spec.gap_lift), depth)

    img = spec.background - spec.contrast * depth

    if spec.family == "decoy-branch":
        img = _add_decoy(img, center, hw, spec, rng)
    if spec.family == "crossing-structure":
        img = _add_crossing(img, center, spec, rng)

    if spec.noise > 0:
        img = img + rng.normal(0.0, spec.noise, size=img.shape)
    img = np.clip(img, 0.0, 1.0)

    gt_mask = CrackMask(dist <= local_hw, {"method": "ground-truth", "family": spec.family})
    track_pts = center[:: max(len(center) // (2 * max(h, w)), 1)]
    if not np.array_equal(track_pts[-1], center[-1]):
        track_pts = np.vstack([track_pts, center[-1]])
    gt_track = PlanarTrack(track_pts)
    return GrayImage(img), gt_track, gt_mask


def _add_decoy(img: np.ndarray, center: np.ndarray, hw: np.ndarray, spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    """Dark dead-end branch leaving the crack near its start, along the
    initial heading — bait for local greedy walkers."""
    h, w = img.shape
    start_i = int(0.08 * len(center))
    p0 = center[start_i]
    tangent = center[start_i + 8] - center[start_i]
    tangent /= np.linalg.norm(tangent)
    # The branch continues straight while the true crack curves away.
    length = 0.35 * w
    n = int(4 * length)
    t = np.linspace(0.0, 1.0, n)
    bend = rng.uniform(-0.25, 0.25)
    normal = np.array([-tangent[1], tangent[0]])
    pts = p0 + np.outer(t * length, tangent) + np.outer((t * length) ** 2 / length * bend, normal)
    pts = pts[(pts[:, 0] >= 1) & (pts[:, 0] <= w - 2) & (pts[:, 1] >= 1) & (pts[:, 1] <= h - 2)]
    if len(pts) < 4:
        return img
    tree = cKDTree(pts)
    yy, xx = np.mgrid[0:h, 0:w]
    pix = np.column_stack([xx.ravel(), yy.ravel()]).astype(float)
    dist, _ = tree.query(pix, workers=-1)
    dist = dist.reshape(h, w)
    half = hw.mean() * 0.9
    depth = np.clip((half - dist) / spec.edge_softness + 0.5, 0.0, 1.0)
    # Slightly darker than the real crack near the junction.
    return np.minimum(img, spec.background - spec.contrast * 1.05 * depth)


def _add_crossing(img: np.ndarray, center: np.ndarray, spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    """Dark line crossing the crack mid-way (shading edge, paint border)."""
    h, w = img.shape
    cross_at = center[len(center) // 2] + rng.uniform(-3, 3, size=2)
    ang = rng.uniform(np.deg2rad(55), np.deg2rad(90)) * rng.choice([-1.0, 1.0])
    mid_i = len(center) // 2
    tangent = center[mid_i + 4] - center[mid_i - 4]
    tangent /= np.linalg.norm(tangent)
    rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
    d = rot @ tangent
    length = 0.9 * max(h, w)
    t = np.linspace(-length / 2, length / 2, int(4 * length))
    pts = cross_at + np.outer(t, d)
    pts = pts[(pts[:, 0] >= 0) & (pts[:, 0] <= w - 1) & (pts[:, 1] >= 0) & (pts[:, 1] <= h - 1)]
    if len(pts) < 4:
        return img
    tree = cKDTree(pts)
    yy, xx = np.mgrid[0:h, 0:w]
    pix = np.column_stack([xx.ravel(), yy.ravel()]).astype(float)
    dist, _ = tree.query(pix, workers=-1)
    dist = dist.reshape(h, w)
    half = 1.5
    depth = np.clip((half - dist) / spec.edge_softness + 0.5, 0.0, 1.0)
    # Crossing structure is dark but weaker than the crack.
    return np.minimum(img, spec.background - 0.55 * spec.contrast * depth)


def corpus_specs(n_scenes: int = 20) -> list[tuple[SceneSpec, int]]:
    """The benchmark corpus: a fixed mixed bag of scene families."""
    families = [
        "s-curve", "s-curve", "s-curve", "straight-bar", "straight-bar",
        "taper", "occluded-gap", "occluded-gap", "occluded-gap", "occluded-gap",
        "decoy-branch", "decoy-branch", "decoy-branch",
        "crossing-structure", "crossing-structure", "crossing-structure",
        "s-curve", "straight-bar", "occluded-gap", "decoy-branch",
    ]
    out = []
    for i in range(n_scenes):
        fam = families[i % len(families)]
        out.append((SceneSpec(family=fam), 1000 + i))
    return out
