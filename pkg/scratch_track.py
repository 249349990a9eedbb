import sys, time
sys.path.insert(0, "tests")
import numpy as np
from crackseg.synth import SceneSpec, synth_generate
from crackseg.geodesic import track_crack
from crackseg.evaluation import track_deviation
from crackseg.config import PipelineConfig

cfg = PipelineConfig()
for fam, seed in [("straight-bar", 1), ("s-curve", 2), ("occluded-gap", 3),
                  ("crossing-structure", 4), ("decoy-branch", 5)]:
    img, gt_track, gt_mask = synth_generate(SceneSpec(family=fam), seed)
    seed_px = tuple(gt_track.points[0])
    tip_px = tuple(gt_track.points[-1])
    t0 = time.time()
    res = track_crack(img, seed_px, tip_px, cfg)
    dt = time.time() - t0
    dev = track_deviation(gt_track, res.planar, endpoint_tol=np.inf)
    print(f"{fam:20} m={dev.m:.2e}  A={dev.area_between:7.2f}  L={dev.gt_length:6.1f}  "
          f"tip_d={res.tip_distance:.3f}  {dt:.1f}s  pts={len(res.planar.points)}")
