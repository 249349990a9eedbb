"""Independent reference computations the tests check the library against.

These deliberately avoid the library's own propagation code: the lifted
shortest-path oracle goes through scipy.sparse.csgraph, the planar one
through Bellman-Ford, and the supercover oracle enumerates pixels by
subsampling the segment.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import bellman_ford, dijkstra

from crackseg.geodesic import MetricParams, Stencil


def primitive_offsets(reach_spatial: int = 3, reach_theta: int = 2) -> np.ndarray:
    """All coprime (dy, dx, dk) moves within the reach box — the '26+'
    neighborhood of the reference graph."""
    out = []
    for dy in range(-reach_spatial, reach_spatial + 1):
        for dx in range(-reach_spatial, reach_spatial + 1):
            for dk in range(-reach_theta, reach_theta + 1):
                if (dy, dx, dk) == (0, 0, 0):
                    continue
                g = np.gcd.reduce([abs(dy), abs(dx), abs(dk)])
                if g == 1:
                    out.append((dy, dx, dk))
    return np.array(out, dtype=np.int64)


def lifted_graph_distances(
    cost: np.ndarray,
    ratios: np.ndarray | None,
    stencil: Stencil,
    params: MetricParams,
    seeds: np.ndarray,
    offsets: np.ndarray | None = None,
) -> np.ndarray:
    """Multi-source Dijkstra over the lifted graph, edge weights from the
    same discrete metric the solver uses for its single-hop updates."""
    H, W, K = cost.shape
    n = H * W * K
    dtheta = stencil.dtheta
    lam = params.lam if ratios is not None else 0.0
    bpen = params.effective_backward
    if offsets is None:
        offsets = primitive_offsets()

    if ratios is not None:
        # Direction of each offset for the ratio lookup (nearest stencil axis).
        dirs = np.column_stack(
            [offsets[:, 1].astype(float), offsets[:, 0].astype(float), offsets[:, 2] * dtheta]
        )
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        axis_lookup = np.argmax(np.abs(dirs @ stencil.axes.T), axis=1)

    ys, xs, ks = np.meshgrid(np.arange(H), np.arange(W), np.arange(K), indexing="ij")
    ys, xs, ks = ys.ravel(), xs.ravel(), ks.ravel()
    flat = (ys * W + xs) * K + ks

    rows, cols, weights = [], [], []
    for o in range(offsets.shape[0]):
        dy, dx, dk = (int(v) for v in offsets[o])
        valid = (ys + dy >= 0) & (ys + dy < H) & (xs + dx >= 0) & (xs + dx < W)
        src = flat[valid]
        ky = ks[valid]
        yv = ys[valid] + dy
        xv = xs[valid] + dx
        kv = (ky + dk) % K
        dst = (yv * W + xv) * K + kv

        theta_mid = (ky + 0.5 * dk) * dtheta
        a = dx * np.cos(theta_mid) + dy * np.sin(theta_mid)
        s2 = np.maximum(dx * dx + dy * dy - a * a, 0.0)
        fwd = np.where(a >= 0.0, params.xi**2 * a**2, bpen**2 * params.xi**2 * a**2)
        dth = dk * dtheta
        q = fwd + (params.xi**2 / params.zeta**2) * s2 + dth * dth
        v2 = dx * dx + dy * dy + dth * dth
        if ratios is not None and lam > 0:
            ax = int(axis_lookup[o])
            r = 0.5 * (
                ratios[ax, ys[valid], xs[valid], ky] + ratios[ax, yv, xv, kv]
            )
        else:
            r = 0.0
        c_mid = 0.5 * (cost[ys[valid], xs[valid], ky] + cost[yv, xv, kv])
        wgt = c_mid * np.sqrt(q + lam * r * v2)
        rows.append(src)
        cols.append(dst)
        weights.append(wgt)

    graph = scipy.sparse.coo_matrix(
        (np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    seed_idx = [(int(s[0]) * W + int(s[1])) * K + int(s[2]) for s in np.asarray(seeds).reshape(-1, 3)]
    d = dijkstra(graph, directed=True, indices=seed_idx, min_only=True)
    return d.reshape(H, W, K)


def planar_shortest_cost(cost: np.ndarray, seed, tip) -> float:
    """Bellman-Ford total weight of the best 8-connected path (independent
    route for checking the planar Dijkstra's optimality)."""
    h, w = cost.shape
    rows, cols, weights = [], [], []
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            length = np.sqrt(2.0) if dy != 0 and dx != 0 else 1.0
            ys, xs = np.mgrid[0:h, 0:w]
            valid = (ys + dy >= 0) & (ys + dy < h) & (xs + dx >= 0) & (xs + dx < w)
            src = (ys[valid] * w + xs[valid]).ravel()
            dst = ((ys[valid] + dy) * w + (xs[valid] + dx)).ravel()
            wgt = 0.5 * (cost[ys[valid], xs[valid]] + cost[ys[valid] + dy, xs[valid] + dx]) * length
            rows.append(src)
            cols.append(dst)
            weights.append(wgt)
    graph = scipy.sparse.coo_matrix(
        (np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))), shape=(h * w, h * w)
    ).tocsr()
    sx, sy = int(seed[0]), int(seed[1])
    tx, ty = int(tip[0]), int(tip[1])
    d = bellman_ford(graph, directed=True, indices=sy * w + sx)
    return float(d[ty * w + tx])


def brute_supercover(x0: float, y0: float, x1: float, y1: float) -> set[tuple[int, int]]:
    """Pixels hit by densely subsampling the segment (reference for the
    traversal-based rasterizer); pixel (i, j) spans [i-1/2, i+1/2)."""
    n = int(64 * max(abs(x1 - x0), abs(y1 - y0)) + 2)
    t = np.linspace(0.0, 1.0, n)
    xs = x0 + (x1 - x0) * t
    ys = y0 + (y1 - y0) * t
    return set(zip(np.round(xs).astype(int), np.round(ys).astype(int)))


def track_polyline_area(gt: np.ndarray, cand: np.ndarray, n: int = 4000) -> float:
    """Monte-Carlo-free area between two polylines sharing endpoints:
    numerically integrate |offset| over matched arc-length parameter.
    Only valid for gently deviating pairs (used on analytic cases)."""

    def interp(poly, s):
        seg = np.hypot(*np.diff(poly, axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = s * cum[-1]
        x = np.interp(s, cum, poly[:, 0])
        y = np.interp(s, cum, poly[:, 1])
        return np.column_stack([x, y])

    s = np.linspace(0.0, 1.0, n)
    a = interp(gt, s)
    b = interp(cand, s)
    d = np.linalg.norm(a - b, axis=1)
    seg = np.linalg.norm(np.diff(a, axis=0), axis=1)
    return float(np.sum(0.5 * (d[:-1] + d[1:]) * seg))
