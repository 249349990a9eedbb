"""Crack tracking as geodesics on positions-and-orientations.

The asymmetric Riemannian length of a lifted curve weighs forward spatial
motion (along the orientation) by xi, sideways motion by xi/zeta, angular
motion by 1, and reverse motion by a large penalty realizing the
forward-only constraint; everything is multiplied by a line-filter cost and
augmented by a direction-dependent term from the orientation-score Hessian.
A causal fast-marching sweep solves for the distance map; steepest descent
from the tip recovers the optimal track.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.ndimage

from . import _fastmarch
from .images import GrayImage, PlanarTrack
from .oscore import CakeWaveletStack, OrientationScore, build_cake_wavelets, lift


class SolverError(RuntimeError):
    pass


class BacktrackStagnation(RuntimeError):
    """Descent stalled away from the seed; carries the partial track."""

    def __init__(self, message: str, partial: "LiftedTrack"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class MetricParams:
    xi: float = 0.1
    zeta: float = 0.1
    lam: float = 10.0
    forward_only: bool = True
    backward_penalty: float = 1.0e4

    def __post_init__(self):
        if self.xi <= 0:
            raise ValueError("xi must be positive")
        if not 0 < self.zeta <= 1:
            raise ValueError("zeta must lie in (0, 1]")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.backward_penalty < 1e3:
            raise ValueError("backward_penalty must be at least 1e3")

    @property
    def effective_backward(self) -> float:
        return self.backward_penalty if self.forward_only else 1.0


@dataclass(frozen=True)
class Stencil:
    """Fixed neighbor stencil shared by the solver and the data term.

    Spatial moves are the 8-neighborhood plus knight moves (16 directions,
    max angular gap 26.6 degrees), each combined with an orientation step
    in {-1, 0, +1}, plus the two pure rotations. Opposite offsets share a
    data-term axis since the Hessian ratio is even in the direction.
    """

    offsets: np.ndarray  # (n_off, 3) int64, rows (dy, dx, dk)
    axis_of_offset: np.ndarray  # (n_off,) int64
    axes: np.ndarray  # (n_axes, 3) float64 unit vectors (x, y, theta)
    pair_idx: np.ndarray  # CSR flat partner list
    pair_ptr: np.ndarray  # (n_off + 1,) int64
    dtheta: float

    @property
    def n_axes(self) -> int:
        return self.axes.shape[0]


_SPATIAL_DIRS = [
    (0, 1), (0, -1), (1, 0), (-1, 0),
    (1, 1), (1, -1), (-1, 1), (-1, -1),
    (1, 2), (1, -2), (-1, 2), (-1, -2),
    (2, 1), (2, -1), (-2, 1), (-2, -1),
]

# Facet partners must be angularly close for the interpolated update to
# stay causal; 50 degrees comfortably covers adjacent stencil directions.
_PAIR_MAX_ANGLE = np.deg2rad(50.0)


def build_stencil(n_theta: int) -> Stencil:
    dtheta = 2.0 * np.pi / n_theta
    offs = [(0, 0, 1), (0, 0, -1)]
    offs += [(dy, dx, dk) for (dy, dx) in _SPATIAL_DIRS for dk in (-1, 0, 1)]
    offsets = np.array(offs, dtype=np.int64)
    n_off = len(offsets)

    # Unit physical directions (x, y, theta); opposite pairs share an axis.
    dirs = np.column_stack(
        [offsets[:, 1].astype(float), offsets[:, 0].astype(float), offsets[:, 2] * dtheta]
    )
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)

    axes: list[np.ndarray] = []
    axis_of_offset = np.full(n_off, -1, dtype=np.int64)
    for i in range(n_off):
        for j, ax in enumerate(axes):
            if np.allclose(dirs[i], ax, atol=1e-12) or np.allclose(dirs[i], -ax, atol=1e-12):
                axis_of_offset[i] = j
                break
        else:
            axes.append(dirs[i])
            axis_of_offset[i] = len(axes) - 1

    pair_lists: list[list[int]] = []
    for i in range(n_off):
        partners = []
        for j in range(n_off):
            if j == i:
                continue
            cosang = float(np.dot(dirs[i], dirs[j]))
            if cosang >= np.cos(_PAIR_MAX_ANGLE):
                partners.append(j)
        pair_lists.append(partners)
    pair_ptr = np.zeros(n_off + 1, dtype=np.int64)
    for i, pl in enumerate(pair_lists):
        pair_ptr[i + 1] = pair_ptr[i] + len(pl)
    pair_idx = np.array(list(itertools.chain.from_iterable(pair_lists)), dtype=np.int64)

    return Stencil(
        offsets=offsets,
        axis_of_offset=axis_of_offset,
        axes=np.array(axes),
        pair_idx=pair_idx,
        pair_ptr=pair_ptr,
        dtheta=dtheta,
    )


@dataclass
class CostVolume:
    values: np.ndarray  # (H, W, K) float32 in [c_min, 1]
    c_min: float

    @property
    def shape(self):
        return self.values.shape


@dataclass
class DataTermVolume:
    """Normalized Hessian ratios per stencil axis, values in [0, 1]."""

    ratios: np.ndarray  # (n_axes, H, W, K) float32
    stencil: Stencil


def compute_cost(
    score: OrientationScore,
    sigmas=(1.0, 2.0),
    beta: float = 50.0,
    c_min: float = 0.03,
) -> CostVolume:
    """Orientation-selective line cost: low along aligned line structures.

    The positive part of the scale-normalized second Gaussian derivative of
    Re(U), taken across the orientation of each slice, is maxed over scales,
    normalized by its 99th percentile and mapped through 1 / (1 + beta * x).
    """
    sigmas = tuple(sigmas)
    if not sigmas:
        raise ValueError("sigmas must be nonempty")
    if not 0 < c_min < 1:
        raise ValueError("c_min must lie in (0, 1)")
    H, W, K = score.data.shape
    phi = np.zeros((H, W, K), dtype=np.float64)
    for k in range(K):
        theta = k * score.theta_spacing
        # Across-line axis: perpendicular to the slice orientation.
        mx, my = -np.sin(theta), np.cos(theta)
        re = score.data[:, :, k].real
        best = None
        for s in sigmas:
            sxx = scipy.ndimage.gaussian_filter(re, s, order=(0, 2), mode="nearest")
            syy = scipy.ndimage.gaussian_filter(re, s, order=(2, 0), mode="nearest")
            sxy = scipy.ndimage.gaussian_filter(re, s, order=(1, 1), mode="nearest")
            second = mx * mx * sxx + 2.0 * mx * my * sxy + my * my * syy
            resp = np.maximum(s * s * second, 0.0)
            best = resp if best is None else np.maximum(best, resp)
        phi[:, :, k] = best
    # Normalize so typical strong responses sit near 1. No upper clip: a
    # capped response would flatten the valley bottom and let the geodesic
    # drift anywhere inside the crack core.
    top = np.percentile(phi, 99.0)
    if top > 0:
        phi = phi / top
    values = np.clip(1.0 / (1.0 + beta * phi), c_min, 1.0)
    return CostVolume(values.astype(np.float32), c_min)


def compute_data_term(score: OrientationScore, stencil: Stencil | None = None) -> DataTermVolume:
    """Direction-dependent Hessian ratio of the lifted score.

    For each grid point and stencil axis v: the max over unit real q of
    |v^T H q|^2, divided by the same max taken over all candidate v — a
    value in [0, 1]. Where the pointwise maximum vanishes (< 1e-12) the
    ratio is 0.
    """
    H, W, K = score.data.shape
    if H < 3 or W < 3 or K < 3:
        raise ValueError("grid too small for central differences")
    if stencil is None:
        stencil = build_stencil(K)
    dtheta = score.theta_spacing
    u = score.data.astype(np.complex64)

    du_y, du_x, du_t = np.gradient(u, 1.0, 1.0, dtheta, axis=(0, 1, 2), edge_order=1)
    # Wrapped theta derivative (np.gradient is one-sided at the ends).
    du_t = (np.roll(u, -1, axis=2) - np.roll(u, 1, axis=2)) / (2.0 * dtheta)

    hess = {}
    for name, d1 in (("x", du_x), ("y", du_y), ("t", du_t)):
        gy, gx = np.gradient(d1, 1.0, 1.0, axis=(0, 1), edge_order=1)
        gt = (np.roll(d1, -1, axis=2) - np.roll(d1, 1, axis=2)) / (2.0 * dtheta)
        hess["x" + name] = gx
        hess["y" + name] = gy
        hess["t" + name] = gt
    # Symmetrize mixed entries.
    hxx = hess["xx"]
    hyy = hess["yy"]
    htt = hess["tt"]
    hxy = 0.5 * (hess["xy"] + hess["yx"])
    hxt = 0.5 * (hess["xt"] + hess["tx"])
    hyt = 0.5 * (hess["yt"] + hess["ty"])

    n_axes = stencil.n_axes
    num = np.empty((n_axes, H, W, K), dtype=np.float32)
    for j in range(n_axes):
        vx, vy, vt = stencil.axes[j]
        hv_x = hxx * vx + hxy * vy + hxt * vt
        hv_y = hxy * vx + hyy * vy + hyt * vt
        hv_t = hxt * vx + hyt * vy + htt * vt
        aa = hv_x.real**2 + hv_y.real**2 + hv_t.real**2
        bb = hv_x.imag**2 + hv_y.imag**2 + hv_t.imag**2
        ab = hv_x.real * hv_x.imag + hv_y.real * hv_y.imag + hv_t.real * hv_t.imag
        half = 0.5 * (aa + bb)
        num[j] = half + np.sqrt(np.maximum(0.25 * (aa - bb) ** 2 + ab**2, 0.0))

    denom = num.max(axis=0)
    ratios = np.zeros_like(num)
    ok = denom > 1e-12
    for j in range(n_axes):
        ratios[j, ok] = num[j, ok] / denom[ok]
    return DataTermVolume(np.clip(ratios, 0.0, 1.0), stencil)


@dataclass
class DistanceVolume:
    values: np.ndarray  # (H, W, K) float64
    seeds: np.ndarray  # (n_seed, 3) int64 rows (y, x, k)
    params: MetricParams
    dtheta: float
    monotonicity_violation: float = 0.0

    @property
    def shape(self):
        return self.values.shape


def seed_fiber(x: int, y: int, n_theta: int) -> np.ndarray:
    """Whole orientation fiber over one pixel, as solver seed rows."""
    return np.array([(y, x, k) for k in range(n_theta)], dtype=np.int64)


# Facet interpolation points, dense near the endpoints: the optimal mix for
# a direction slightly off a stencil ray sits close to t = 0 or 1, and a
# coarse grid there reintroduces the angular quantization the facets exist
# to remove.
_T_SAMPLES = np.array([1 / 16, 1 / 8, 1 / 4, 1 / 2, 3 / 4, 7 / 8, 15 / 16])


def distance_map(
    cost: CostVolume,
    data_term: DataTermVolume | None,
    params: MetricParams,
    seeds: np.ndarray,
) -> DistanceVolume:
    """Propagate geodesic distance from the seed set over the whole volume."""
    H, W, K = cost.values.shape
    seeds = np.asarray(seeds, dtype=np.int64).reshape(-1, 3)
    if seeds.size == 0:
        raise SolverError("seed set is empty")
    if (
        seeds[:, 0].min() < 0 or seeds[:, 0].max() >= H
        or seeds[:, 1].min() < 0 or seeds[:, 1].max() >= W
        or seeds[:, 2].min() < 0 or seeds[:, 2].max() >= K
    ):
        raise SolverError("seed outside grid")
    if cost.values.min() <= 0:
        raise SolverError("non-positive cost encountered")

    if data_term is not None and params.lam > 0:
        stencil = data_term.stencil
        ratios = data_term.ratios
        has_ratio = True
        lam = params.lam
    else:
        stencil = build_stencil(K)
        ratios = np.zeros((1, 1, 1, 1), dtype=np.float32)
        has_ratio = False
        lam = 0.0

    dist, violation = _fastmarch.fmm_lifted(
        cost.values,
        ratios,
        has_ratio,
        stencil.offsets,
        stencil.axis_of_offset,
        stencil.pair_idx,
        stencil.pair_ptr,
        seeds,
        stencil.dtheta,
        params.xi,
        params.zeta,
        lam,
        params.effective_backward,
        _T_SAMPLES,
    )
    return DistanceVolume(dist, seeds, params, stencil.dtheta, float(violation))


@dataclass
class LiftedTrack:
    """Ordered (x, y, theta) samples from tip to seed."""

    points: np.ndarray  # (n, 3) float64
    step_size: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 1:
            raise ValueError("lifted track needs (n, 3) points")
        self.points = pts

    def planar(self) -> PlanarTrack:
        """Spatial projection, dropping duplicate consecutive pixels."""
        xy = self.points[:, :2]
        keep = np.concatenate([[True], np.linalg.norm(np.diff(xy, axis=0), axis=1) > 1e-9])
        pts = xy[keep]
        if len(pts) < 2:
            pts = np.vstack([xy[0], xy[-1] + 1e-6])
        return PlanarTrack(pts)


def _wrap_k(kf: float, K: int) -> float:
    return kf % K


def _interp_volume(vol: np.ndarray, y: float, x: float, kf: float) -> float:
    """Trilinear interpolation with wraparound on the orientation axis."""
    H, W, K = vol.shape
    y = min(max(y, 0.0), H - 1.0)
    x = min(max(x, 0.0), W - 1.0)
    y0 = int(np.floor(y))
    x0 = int(np.floor(x))
    k0 = int(np.floor(kf)) % K
    y1 = min(y0 + 1, H - 1)
    x1 = min(x0 + 1, W - 1)
    k1 = (k0 + 1) % K
    fy = y - y0
    fx = x - x0
    fk = kf - np.floor(kf)
    out = 0.0
    for (yy, wy) in ((y0, 1 - fy), (y1, fy)):
        for (xx, wx) in ((x0, 1 - fx), (x1, fx)):
            for (kk, wk) in ((k0, 1 - fk), (k1, fk)):
                out += wy * wx * wk * vol[yy, xx, kk]
    return out


def _smooth_track(pts: np.ndarray, window: int) -> np.ndarray:
    """Moving-average the interior samples to cancel the descent's limit
    cycle around the valley kink; endpoints stay fixed. The angle column is
    smoothed on the unwrapped circle."""
    if window < 3 or len(pts) < window + 2:
        return pts
    if window % 2 == 0:
        window += 1
    out = pts.copy()
    kernel = np.ones(window) / window
    half = window // 2
    theta = np.unwrap(pts[:, 2])
    cols = [pts[:, 0], pts[:, 1], theta]
    for c, col in enumerate(cols):
        sm = np.convolve(col, kernel, mode="valid")
        out[half:-half, c] = sm
    out[:, 2] = np.mod(out[:, 2], 2.0 * np.pi)
    return out


def _gradient_volumes(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    finite = np.isfinite(values)
    if finite.all():
        filled = values
    else:
        big = values[finite].max() * 1.05 + 1.0
        filled = np.where(finite, values, big)
    gy, gx = np.gradient(filled, axis=(0, 1), edge_order=1)
    gk = (np.roll(filled, -1, axis=2) - np.roll(filled, 1, axis=2)) / 2.0
    return gy, gx, gk


def backtrack(
    dist: DistanceVolume,
    tip: tuple[float, float, float],
    step: float = 0.25,
    perp_gain: float = 0.08,
    smooth_window: int = 7,
) -> LiftedTrack:
    """Integrate steepest descent of the distance map from tip to the seed set.

    Steepest descent under the base metric: the descent velocity is the
    manifold gradient -G^{-1} grad d, which follows the eikonal
    characteristics instead of ricocheting across the narrow valley that a
    Euclidean gradient would produce. tip is (x, y, theta); the track is
    returned tip-first and ends within one grid cell of the seed set (the
    exact seed cell is appended).
    """
    values = dist.values
    H, W, K = values.shape
    x, y, theta = tip
    kf = _wrap_k(theta / dist.dtheta, K)
    if not np.isfinite(_interp_volume(values, y, x, kf)):
        raise SolverError("distance not finite at tip")

    gy, gx, gk = _gradient_volumes(values)
    params = dist.params
    inv_along = 1.0 / params.xi**2
    # Perpendicular gain: the metric's own zeta^2/xi^2 corrects the
    # cross-valley error far too slowly to converge onto the valley floor,
    # so the descent preconditioner uses a fraction of the along gain.
    inv_perp = perp_gain * inv_along
    seed_px = np.unique(dist.seeds[:, :2], axis=0)  # (n, 2) rows (y, x)
    fiber_seed = len(np.unique(dist.seeds[:, 2])) == K

    def near_seed(yy, xx, kk) -> int:
        d_sp = np.max(np.abs(seed_px - np.array([yy, xx])), axis=1)
        cands = np.where(d_sp <= 1.0)[0]
        if cands.size == 0:
            return -1
        if fiber_seed:
            return cands[0]
        for ci in cands:
            rows = dist.seeds[(dist.seeds[:, 0] == seed_px[ci][0]) & (dist.seeds[:, 1] == seed_px[ci][1])]
            dk = np.abs(rows[:, 2] - kk)
            if np.minimum(dk, K - dk).min() <= 1.0:
                return ci
        return -1

    def descent_dir(yy, xx, kk):
        """Unit grid-step direction of -G^{-1} grad d, or None when flat."""
        g = np.array(
            [
                _interp_volume(gx, yy, xx, kk),
                _interp_volume(gy, yy, xx, kk),
                _interp_volume(gk, yy, xx, kk) / dist.dtheta,
            ]
        )
        if np.linalg.norm(g) < 1e-9:
            return None
        th = kk * dist.dtheta
        nx, ny = np.cos(th), np.sin(th)
        a = g[0] * nx + g[1] * ny
        b = -g[0] * ny + g[1] * nx
        vx = inv_along * a * nx - inv_perp * b * ny
        vy = inv_along * a * ny + inv_perp * b * nx
        vk = g[2] / dist.dtheta  # back to k-units for the grid step
        v = np.array([vx, vy, vk])
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            return None
        return v / norm

    def discrete_hop(yy, xx, kk, d_ref):
        """Node with the lowest value among the interpolation-cell corners
        and the best corner's neighbors — strictly below d_ref when the
        point is away from the seed (the accepted field has no other local
        minima)."""
        y0 = int(np.floor(min(max(yy, 0.0), H - 1.0)))
        x0 = int(np.floor(min(max(xx, 0.0), W - 1.0)))
        k0 = int(np.floor(kk)) % K
        best = np.inf
        best_node = None
        for cy in (y0, min(y0 + 1, H - 1)):
            for cx in (x0, min(x0 + 1, W - 1)):
                for ck in (k0, (k0 + 1) % K):
                    if values[cy, cx, ck] < best:
                        best = values[cy, cx, ck]
                        best_node = (cy, cx, ck)
        iy, ix, ik = best_node
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                for dk in (-1, 0, 1):
                    ny_, nx_ = iy + dy, ix + dx
                    if ny_ < 0 or ny_ >= H or nx_ < 0 or nx_ >= W:
                        continue
                    nk = (ik + dk) % K
                    if values[ny_, nx_, nk] < best:
                        best = values[ny_, nx_, nk]
                        best_node = (ny_, nx_, nk)
        if best < d_ref - 1e-15:
            return best_node
        return None

    pts = [(x, y, _wrap_k(kf, K) * dist.dtheta)]
    d_cur = _interp_volume(values, y, x, kf)
    max_steps = int(50 * (H + W + K) / step) + 100
    for _ in range(max_steps):
        si = near_seed(y, x, kf)
        if si >= 0:
            sy, sx = seed_px[si]
            pts.append((float(sx), float(sy), _wrap_k(kf, K) * dist.dtheta))
            return LiftedTrack(_smooth_track(np.array(pts), smooth_window), step)
        moved = False
        v = descent_dir(y, x, kf)
        if v is not None:
            # Midpoint rule smooths the corners the grid puts into the field;
            # halve the step when the full one climbs (interpolation bumps).
            h = step
            for _ in range(4):
                v_mid = descent_dir(
                    min(max(y - 0.5 * h * v[1], 0.0), H - 1.0),
                    min(max(x - 0.5 * h * v[0], 0.0), W - 1.0),
                    _wrap_k(kf - 0.5 * h * v[2], K),
                )
                vv = v_mid if v_mid is not None else v
                x_n = min(max(x - h * vv[0], 0.0), W - 1.0)
                y_n = min(max(y - h * vv[1], 0.0), H - 1.0)
                k_n = _wrap_k(kf - h * vv[2], K)
                d_new = _interp_volume(values, y_n, x_n, k_n)
                if d_new < d_cur - 1e-12:
                    x, y, kf, d_cur = x_n, y_n, k_n, d_new
                    moved = True
                    break
                h *= 0.5
        if not moved:
            # Continuous step failed (shock or flat spot): hop along the
            # discrete descent, which cannot stall away from the seed.
            node = discrete_hop(y, x, kf, d_cur)
            if node is None:
                raise BacktrackStagnation(
                    f"descent stagnated at ({x:.1f}, {y:.1f})",
                    LiftedTrack(np.array(pts), step),
                )
            y, x, kf = float(node[0]), float(node[1]), float(node[2])
            d_cur = values[node]
        pts.append((x, y, _wrap_k(kf, K) * dist.dtheta))
    raise BacktrackStagnation(
        "descent exceeded step budget", LiftedTrack(np.array(pts), step)
    )


@dataclass
class TrackResult:
    planar: PlanarTrack
    lifted: LiftedTrack
    tip_distance: float
    tip_k: int


def track_crack(
    img: GrayImage,
    seed_px: tuple[float, float],
    tip_px: tuple[float, float],
    config: "PipelineConfig | None" = None,
) -> TrackResult:
    """End-to-end tracking between two user-selected endpoints.

    Lifts the image, builds cost and data volumes, propagates distance from
    the full orientation fiber over seed_px, and backtracks from the best
    orientation over tip_px. The returned planar track runs seed to tip.
    """
    from .config import PipelineConfig

    if config is None:
        config = PipelineConfig()
    pipeline = TrackPipeline(img, config)
    return pipeline.track(seed_px, tip_px)


class TrackPipeline:
    """Holds the heavy per-image volumes so repeated queries are cheap."""

    def __init__(self, img: GrayImage, config: "PipelineConfig"):
        from .config import PipelineConfig  # noqa: F401  (typing aid)

        self.img = img
        self.config = config
        lp = config.lift
        self.stack: CakeWaveletStack = build_cake_wavelets(
            n_theta=lp.n_theta,
            kernel_size=lp.kernel_size,
            spline_order=lp.spline_order,
            spatial_sigma=lp.spatial_sigma,
            dc_cutoff=lp.dc_cutoff,
        )
        self.score: OrientationScore = lift(img, self.stack)
        cp = config.cost
        self.cost: CostVolume = compute_cost(self.score, cp.sigmas, cp.beta, cp.c_min)
        if config.metric.lam > 0:
            self.data_term: DataTermVolume | None = compute_data_term(self.score)
        else:
            self.data_term = None

    def track(self, seed_px, tip_px) -> TrackResult:
        sx, sy = float(seed_px[0]), float(seed_px[1])
        tx, ty = float(tip_px[0]), float(tip_px[1])
        if (sx, sy) == (tx, ty):
            raise ValueError("degenerate endpoints: seed equals tip")
        if not (self.img.contains(sx, sy) and self.img.contains(tx, ty)):
            raise ValueError("endpoints out of image bounds")

        K = self.stack.n_theta
        seeds = seed_fiber(int(round(sx)), int(round(sy)), K)
        dist = distance_map(self.cost, self.data_term, self.config.metric, seeds)

        tyi, txi = int(round(ty)), int(round(tx))
        fiber = dist.values[tyi, txi, :]
        if not np.isfinite(fiber).any():
            raise SolverError("tip unreachable from seed")
        tip_k = int(np.argmin(fiber))
        lifted = backtrack(
            dist,
            (float(txi), float(tyi), tip_k * dist.dtheta),
            step=self.config.solver_step,
        )
        planar_rev = lifted.planar()
        pts = planar_rev.points[::-1].copy()  # seed -> tip
        planar = PlanarTrack(pts)
        return TrackResult(
            planar=planar,
            lifted=lifted,
            tip_distance=float(fiber[tip_k]),
            tip_k=tip_k,
        )


def export_track_json(result: TrackResult, image_path: str, seed, tip, params: dict) -> dict:
    """Track interchange document used by the CLI and the service."""
    return {
        "image": str(image_path),
        "seed": [float(seed[0]), float(seed[1])],
        "tip": [float(tip[0]), float(tip[1])],
        "params": params,
        "points": [[float(x), float(y), float(t)] for x, y, t in result.lifted.points],
        "projection": [[float(x), float(y)] for x, y in result.planar.points],
    }
