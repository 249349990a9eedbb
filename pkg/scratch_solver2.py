import sys, time
sys.path.insert(0, "tests")
import numpy as np
import scipy.ndimage
from crackseg.geodesic import MetricParams, CostVolume, build_stencil, distance_map, seed_fiber
from oracles import lifted_graph_distances, primitive_offsets

rng = np.random.default_rng(123)

def smooth_field(shape, rng, c_min=0.03, sigma=2.0):
    """Smooth random cost field in [c_min, 1] with wrapped theta axis."""
    u = rng.normal(size=shape)
    u = scipy.ndimage.gaussian_filter(u, (sigma, sigma, sigma), mode=["nearest", "nearest", "wrap"])
    u = (u - u.min()) / (u.max() - u.min())
    return (c_min + (1 - c_min) * u).astype(np.float32)

H = W = 32
K = 16
params = MetricParams(xi=0.1, zeta=0.2, lam=0.0)
stencil = build_stencil(K)
prim = primitive_offsets(3, 2)
print("oracle offsets:", len(prim))

total_t = 0.0
for trial in range(5):
    c = smooth_field((H, W, K), rng)
    cost = CostVolume(c, 0.03)
    seeds = np.array([[rng.integers(0, H), rng.integers(0, W), rng.integers(0, K)]], dtype=np.int64)
    t0 = time.time()
    dist = distance_map(cost, None, params, seeds)
    t1 = time.time()
    oracle = lifted_graph_distances(c, None, stencil, params, seeds)
    t2 = time.time()
    total_t += t2 - t0
    sol = dist.values
    finite = np.isfinite(oracle) & (oracle > 0)
    rel = np.abs(sol[finite] - oracle[finite]) / oracle[finite]
    print(f"trial {trial}: solver {t1-t0:.2f}s oracle {t2-t1:.2f}s  within5%: {(rel<=0.05).mean():.4f} "
          f"median {np.median(rel):.4f} p99 {np.percentile(rel, 99):.4f} max {rel.max():.4f} viol {dist.monotonicity_violation:.1e}")
print(f"total time: {total_t:.1f}s (budget 60s)")
