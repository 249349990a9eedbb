import sys
sys.path.insert(0, "tests")
import numpy as np
from crackseg.synth import SceneSpec, synth_generate
from crackseg.geodesic import (
    MetricParams, TrackPipeline, seed_fiber, distance_map, _interp_volume,
    _gradient_volumes, _wrap_k,
)
from crackseg.config import PipelineConfig

cfg = PipelineConfig()
img, gt_track, gt_mask = synth_generate(SceneSpec(family="straight-bar"), 1)
pipe = TrackPipeline(img, cfg)
seed_px = tuple(gt_track.points[0])
tip_px = tuple(gt_track.points[-1])
print("seed", seed_px, "tip", tip_px)

K = pipe.stack.n_theta
seeds = seed_fiber(int(round(seed_px[0])), int(round(seed_px[1])), K)
dist = distance_map(pipe.cost, pipe.data_term, cfg.metric, seeds)
v = dist.values
tyi, txi = int(round(tip_px[1])), int(round(tip_px[0]))
fiber = v[tyi, txi, :]
tip_k = int(np.argmin(fiber))
print("tip fiber:", np.round(fiber, 3))
print("tip_k:", tip_k, "dist:", fiber[tip_k])

gy, gx, gk = _gradient_volumes(v)
x, y, kf = float(txi), float(tyi), float(tip_k)
step = 0.5
traj = [(x, y, kf)]
for i in range(3000):
    g = np.array([
        _interp_volume(gy, y, x, kf),
        _interp_volume(gx, y, x, kf),
        _interp_volume(gk, y, x, kf),
    ])
    n = np.linalg.norm(g)
    if n < 1e-9:
        print("stagnated at", i)
        break
    y -= step * g[0] / n
    x -= step * g[1] / n
    kf = _wrap_k(kf - step * g[2] / n, v.shape[2])
    y = min(max(y, 0.0), v.shape[0] - 1.0)
    x = min(max(x, 0.0), v.shape[1] - 1.0)
    traj.append((x, y, kf))
    if i % 300 == 0 or i < 12:
        d_here = _interp_volume(v, y, x, kf)
        print(f"step {i}: x={x:.2f} y={y:.2f} k={kf:.2f} d={d_here:.4f} |g|={n:.4f} g={np.round(g,4)}")
print("final:", traj[-1], "seed at", seed_px)
