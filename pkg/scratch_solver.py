import sys, time
sys.path.insert(0, "tests")
import numpy as np
from crackseg.geodesic import (
    MetricParams, CostVolume, build_stencil, distance_map, seed_fiber, backtrack,
)
from oracles import lifted_graph_distances

rng = np.random.default_rng(7)

# --- 1. uniform cost, straight-line distance check
H = W = 24
K = 16
params = MetricParams(xi=0.1, zeta=1.0, lam=0.0)
cost = CostVolume(np.ones((H, W, K), dtype=np.float32), 0.03)
seeds = seed_fiber(4, 12, K)
t0 = time.time()
dist = distance_map(cost, None, params, seeds)
print(f"fmm time (first, with compile): {time.time()-t0:.1f}s, violation={dist.monotonicity_violation:.2e}")

# target straight ahead along +x: (x=20, y=12), theta=0 (k=0)
d = dist.values[12, 20, 0]
print("straight fwd dist:", d, "expected:", 0.1 * 16)

# --- 2. oracle comparison on random cost fields
stencil = build_stencil(K)
H = W = 32
K2 = 16
params2 = MetricParams(xi=0.1, zeta=0.2, lam=0.0)
stencil2 = build_stencil(K2)
for trial in range(2):
    c = np.exp(rng.uniform(np.log(0.03), 0.0, size=(H, W, K2))).astype(np.float32)
    cost2 = CostVolume(c, 0.03)
    seeds2 = np.array([[rng.integers(0, H), rng.integers(0, W), rng.integers(0, K2)]], dtype=np.int64)
    t0 = time.time()
    dist2 = distance_map(cost2, None, params2, seeds2)
    t1 = time.time()
    oracle = lifted_graph_distances(c, None, stencil2, params2, seeds2)
    t2 = time.time()
    sol = dist2.values
    finite = np.isfinite(oracle) & (oracle > 0)
    rel = np.abs(sol[finite] - oracle[finite]) / oracle[finite]
    print(f"trial {trial}: solver {t1-t0:.2f}s oracle {t2-t1:.2f}s "
          f"frac within 5%: {(rel <= 0.05).mean():.4f}, median rel {np.median(rel):.4f}, max {rel.max():.4f}")
    print(f"  solver <= oracle everywhere: {(sol[finite] <= oracle[finite] * (1+1e-9)).all()}")
    print(f"  monotonicity violation: {dist2.monotonicity_violation:.2e}")

# --- 3. zeta effect: sideways motion penalized
params_iso = MetricParams(xi=0.1, zeta=1.0, lam=0.0)
params_aniso = MetricParams(xi=0.1, zeta=0.1, lam=0.0)
c = np.ones((32, 32, 16), dtype=np.float32)
seed_single = np.array([[16, 8, 0]], dtype=np.int64)  # (y, x, k=0 -> n=(1,0) +x)
d_iso = distance_map(CostVolume(c, 0.03), None, params_iso, seed_single)
d_aniso = distance_map(CostVolume(c, 0.03), None, params_aniso, seed_single)
# target displaced purely sideways: (x=8, y=26) displacement (0, +10) perpendicular to n=(1,0)
# compare distance at target over the whole fiber min? spec: "target displaced purely sideways
# from a single seed orientation" -> distance at (target, same orientation k=0)?
for ky in [0]:
    r = d_aniso.values[26, 8, ky] / d_iso.values[26, 8, ky]
    print(f"sideways ratio aniso/iso at k={ky}: {r:.2f} (want >= 2)")
print("min-over-fiber ratio:", d_aniso.values[26, 8, :].min() / d_iso.values[26, 8, :].min())

# --- 4. backtrack on uniform: straight segment
dist_u = distance_map(CostVolume(np.ones((24, 32, 16), dtype=np.float32), 0.03), None,
                      MetricParams(xi=0.1, zeta=1.0, lam=0.0), seed_fiber(4, 12, 16))
lt = backtrack(dist_u, (28.0, 12.0, 0.0), 0.5)
pts = lt.points
dev = np.abs(pts[:, 1] - 12.0).max()
print(f"backtrack straight: {len(pts)} pts, max |y-12| = {dev:.3f} (want <= 1)")
print("endpoints:", pts[0], pts[-1])
