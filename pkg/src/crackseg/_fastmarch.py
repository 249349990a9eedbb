"""Numba kernels: causal front propagation on the lifted grid and planar Dijkstra.

Grid layout for the lifted volume is (y, x, k) row-major with k the
orientation index; flat index = (y * W + x) * K + k. Physical displacement
for an offset (dy, dx, dk) is (dx, dy, dk * dtheta) with x, y in pixels and
theta in radians.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True, inline="always")
def _heap_push(heap_d, heap_n, size, d, node):
    i = size
    heap_d[i] = d
    heap_n[i] = node
    while i > 0:
        parent = (i - 1) // 2
        if heap_d[parent] <= heap_d[i]:
            break
        heap_d[parent], heap_d[i] = heap_d[i], heap_d[parent]
        heap_n[parent], heap_n[i] = heap_n[i], heap_n[parent]
        i = parent
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(heap_d, heap_n, size):
    top_d = heap_d[0]
    top_n = heap_n[0]
    size -= 1
    heap_d[0] = heap_d[size]
    heap_n[0] = heap_n[size]
    i = 0
    while True:
        l = 2 * i + 1
        r = l + 1
        smallest = i
        if l < size and heap_d[l] < heap_d[smallest]:
            smallest = l
        if r < size and heap_d[r] < heap_d[smallest]:
            smallest = r
        if smallest == i:
            break
        heap_d[smallest], heap_d[i] = heap_d[i], heap_d[smallest]
        heap_n[smallest], heap_n[i] = heap_n[i], heap_n[smallest]
        i = smallest
    return top_d, top_n, size


@njit(cache=True, inline="always")
def _metric_length(dx, dy, dth, theta_mid, xi, zeta, lam, ratio, bpen):
    """Finsler length of a straight displacement, data term already mixed in."""
    c = np.cos(theta_mid)
    s = np.sin(theta_mid)
    a = dx * c + dy * s
    sq = dx * dx + dy * dy - a * a
    if sq < 0.0:
        sq = 0.0
    if a >= 0.0:
        fwd = xi * xi * a * a
    else:
        fwd = bpen * bpen * xi * xi * a * a
    q = fwd + (xi * xi) / (zeta * zeta) * sq + dth * dth
    v2 = dx * dx + dy * dy + dth * dth
    return np.sqrt(q + lam * ratio * v2)


@njit(cache=True)
def fmm_lifted(
    cost,  # (H, W, K) float32
    ratios,  # (n_axes, H, W, K) float32, possibly (0,...) when unused
    has_ratio,  # bool
    offsets,  # (n_off, 3) int64 rows (dy, dx, dk)
    axis_of_offset,  # (n_off,) int64
    pair_idx,  # flat partner-offset indices, CSR layout
    pair_ptr,  # (n_off + 1,) int64
    seeds,  # (n_seed, 3) int64 rows (y, x, k)
    dtheta,
    xi,
    zeta,
    lam,
    bpen,
    t_samples,  # (n_t,) float64 interior interpolation points
):
    """Single-pass causal solver: Dijkstra sweep plus two-point
    semi-Lagrangian updates over adjacent stencil offsets (only accepted
    nodes enter a facet, preserving causality).

    Returns (dist, max_monotonicity_violation).
    """
    H, W, K = cost.shape
    n_nodes = H * W * K
    n_off = offsets.shape[0]

    dist = np.full(n_nodes, INF)
    accepted = np.zeros(n_nodes, dtype=np.uint8)

    cap = 4 * n_nodes + 64
    heap_d = np.empty(cap)
    heap_n = np.empty(cap, dtype=np.int64)
    size = 0

    for i in range(seeds.shape[0]):
        node = (seeds[i, 0] * W + seeds[i, 1]) * K + seeds[i, 2]
        if dist[node] > 0.0:
            dist[node] = 0.0
            size = _heap_push(heap_d, heap_n, size, 0.0, node)

    last_popped = 0.0
    violation = 0.0
    n_t = t_samples.shape[0]

    while size > 0:
        d_u, u, size = _heap_pop(heap_d, heap_n, size)
        if accepted[u] == 1 or d_u > dist[u]:
            continue
        accepted[u] = 1
        if d_u < last_popped:
            v = last_popped - d_u
            if v > violation:
                violation = v
        else:
            last_popped = d_u

        ku = u % K
        xu = (u // K) % W
        yu = u // (K * W)

        for o in range(n_off):
            yv = yu + offsets[o, 0]
            xv = xu + offsets[o, 1]
            if yv < 0 or yv >= H or xv < 0 or xv >= W:
                continue
            kv = (ku + offsets[o, 2]) % K
            v = (yv * W + xv) * K + kv
            if accepted[v] == 1:
                continue

            dx = float(offsets[o, 1])
            dy = float(offsets[o, 0])
            dk = float(offsets[o, 2])
            dth = dk * dtheta
            theta_mid = (ku + 0.5 * dk) * dtheta
            if has_ratio:
                ax = axis_of_offset[o]
                r_edge = 0.5 * (ratios[ax, yu, xu, ku] + ratios[ax, yv, xv, kv])
            else:
                r_edge = 0.0
            c_mid = 0.5 * (cost[yu, xu, ku] + cost[yv, xv, kv])
            cand = d_u + c_mid * _metric_length(dx, dy, dth, theta_mid, xi, zeta, lam, r_edge, bpen)
            if cand < dist[v]:
                dist[v] = cand
                size = _heap_push(heap_d, heap_n, size, cand, v)

            # Facet updates: interpolate the departure point between this
            # offset and an adjacent accepted one.
            for pi in range(pair_ptr[o], pair_ptr[o + 1]):
                o2 = pair_idx[pi]
                yu2 = yv - offsets[o2, 0]
                xu2 = xv - offsets[o2, 1]
                if yu2 < 0 or yu2 >= H or xu2 < 0 or xu2 >= W:
                    continue
                ku2 = (kv - offsets[o2, 2]) % K
                u2 = (yu2 * W + xu2) * K + ku2
                if accepted[u2] == 0:
                    continue
                d_u2 = dist[u2]
                if has_ratio:
                    ax2 = axis_of_offset[o2]
                    r2_edge = 0.5 * (ratios[ax2, yu2, xu2, ku2] + ratios[ax2, yv, xv, kv])
                else:
                    r2_edge = 0.0
                c_u = cost[yu, xu, ku]
                c_u2 = cost[yu2, xu2, ku2]
                c_v = cost[yv, xv, kv]
                dx2 = float(offsets[o2, 1])
                dy2 = float(offsets[o2, 0])
                dk2 = float(offsets[o2, 2])
                # Causality clamp: a facet update may not undercut the
                # values it interpolates, so every inserted key stays at or
                # above the value just accepted and pops are monotone.
                floor = d_u if d_u > d_u2 else d_u2
                for ti in range(n_t):
                    t = t_samples[ti]
                    ddx = (1.0 - t) * dx + t * dx2
                    ddy = (1.0 - t) * dy + t * dy2
                    ddk = (1.0 - t) * dk + t * dk2
                    ddth = ddk * dtheta
                    th_mid = (kv - 0.5 * ddk) * dtheta
                    d_y = (1.0 - t) * d_u + t * d_u2
                    c_y = (1.0 - t) * c_u + t * c_u2
                    r_y = (1.0 - t) * r_edge + t * r2_edge
                    cand2 = d_y + 0.5 * (c_y + c_v) * _metric_length(
                        ddx, ddy, ddth, th_mid, xi, zeta, lam, r_y, bpen
                    )
                    if cand2 < floor:
                        cand2 = floor
                    if cand2 < dist[v]:
                        dist[v] = cand2
                        size = _heap_push(heap_d, heap_n, size, cand2, v)

        if size + n_off * (1 + n_t) + 8 > cap:
            new_cap = cap * 2
            nd = np.empty(new_cap)
            nn = np.empty(new_cap, dtype=np.int64)
            nd[:size] = heap_d[:size]
            nn[:size] = heap_n[:size]
            heap_d = nd
            heap_n = nn
            cap = new_cap

    return dist.reshape(H, W, K), violation


@njit(cache=True)
def dijkstra_grid(cost, sy, sx):
    """Exact 8-connected shortest paths on a positive per-pixel cost map.

    Edge weight = mean endpoint cost * Euclidean step length. Returns
    (dist, predecessor) with predecessor as flat indices (-1 at the seed
    and unreached pixels).
    """
    H, W = cost.shape
    n = H * W
    dist = np.full(n, INF)
    pred = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)

    cap = 8 * n + 64
    heap_d = np.empty(cap)
    heap_n = np.empty(cap, dtype=np.int64)
    size = 0

    s = sy * W + sx
    dist[s] = 0.0
    size = _heap_push(heap_d, heap_n, size, 0.0, s)

    sqrt2 = np.sqrt(2.0)
    while size > 0:
        d_u, u, size = _heap_pop(heap_d, heap_n, size)
        if done[u] == 1 or d_u > dist[u]:
            continue
        done[u] = 1
        yu = u // W
        xu = u % W
        for dy in range(-1, 2):
            for dx in range(-1, 2):
                if dy == 0 and dx == 0:
                    continue
                yv = yu + dy
                xv = xu + dx
                if yv < 0 or yv >= H or xv < 0 or xv >= W:
                    continue
                v = yv * W + xv
                if done[v] == 1:
                    continue
                length = sqrt2 if (dy != 0 and dx != 0) else 1.0
                cand = d_u + 0.5 * (cost[yu, xu] + cost[yv, xv]) * length
                if cand < dist[v]:
                    dist[v] = cand
                    pred[v] = u
                    size = _heap_push(heap_d, heap_n, size, cand, v)
    return dist.reshape(H, W), pred.reshape(H, W)
