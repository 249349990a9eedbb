"""Quantitative evaluation: track deviation, segmentation scores, benchmark harness."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from shapely.geometry import LineString, MultiLineString
from shapely.ops import polygonize, unary_union

from .images import CrackMask, GrayImage, PlanarTrack, load_image, load_mask


@dataclass(frozen=True)
class TrackDeviation:
    area_between: float  # px^2
    gt_length: float  # px
    m: float  # area / length^2


@dataclass(frozen=True)
class SegmentationScores:
    precision: float
    recall: float
    f1: float


def track_deviation(gt: PlanarTrack, candidate: PlanarTrack, endpoint_tol: float = 5.0) -> TrackDeviation:
    """Area between the two polylines, normalized by squared ground-truth length.

    The polylines are joined at corresponding endpoints into a closed ring;
    self-intersections are split into faces whose absolute areas are summed.
    Candidate endpoints must land within endpoint_tol of the ground truth's
    (pass inf to skip the check, e.g. for failed baseline tracks).
    """
    g = gt.points
    c = candidate.points
    length = gt.length
    if length <= 0:
        raise ValueError("degenerate ground-truth track: zero length")
    d_fwd = max(np.linalg.norm(g[0] - c[0]), np.linalg.norm(g[-1] - c[-1]))
    d_rev = max(np.linalg.norm(g[0] - c[-1]), np.linalg.norm(g[-1] - c[0]))
    if d_rev < d_fwd:
        c = c[::-1]
        d_fwd = d_rev
    if d_fwd > endpoint_tol:
        raise ValueError(
            f"candidate endpoints deviate {d_fwd:.1f} px from ground truth (tol {endpoint_tol})"
        )
    ring = np.vstack([g, c[::-1], g[:1]])
    segments = [LineString([ring[i], ring[i + 1]]) for i in range(len(ring) - 1) if not np.array_equal(ring[i], ring[i + 1])]
    merged = unary_union(MultiLineString(segments))
    area = sum(p.area for p in polygonize(merged))
    return TrackDeviation(area_between=float(area), gt_length=float(length), m=float(area / length**2))


def segmentation_scores(gt: CrackMask, pred: CrackMask) -> SegmentationScores:
    """Pixel precision / recall / F1. An empty prediction scores precision 1."""
    if gt.bits.shape != pred.bits.shape:
        raise ValueError(f"mask dimensions differ: {gt.bits.shape} vs {pred.bits.shape}")
    tp = int((gt.bits & pred.bits).sum())
    fp = int((~gt.bits & pred.bits).sum())
    fn = int((gt.bits & ~pred.bits).sum())
    precision = tp / (tp + fp) if (tp + fp) > 0 else 1.0
    recall = tp / (tp + fn) if (tp + fn) > 0 else 1.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) > 0 else 0.0
    return SegmentationScores(precision, recall, f1)


def load_aiglern_mask(path, shape: tuple[int, int] | None = None) -> CrackMask:
    """Read a published ground-truth mask; crack pixels are the minority class."""
    mask = load_mask(path, meta={"method": "ground-truth", "source": str(path)})
    frac = mask.bits.mean()
    bits = ~mask.bits if frac > 0.5 else mask.bits
    if shape is not None and bits.shape != shape:
        raise ValueError(f"mask shape {bits.shape} does not match image {shape}")
    return CrackMask(bits, mask.meta)


# --- benchmark harness ------------------------------------------------------


def _discover(dataset_dir: Path):
    images = sorted((dataset_dir / "images").glob("*.png"))
    entries = []
    for img_path in images:
        stem = img_path.stem
        gt_mask = dataset_dir / "gt_masks" / f"{stem}.png"
        gt_track = dataset_dir / "gt_tracks" / f"{stem}.json"
        endpoints = dataset_dir / "endpoints" / f"{stem}.json"
        entries.append(
            {
                "stem": stem,
                "image": img_path,
                "gt_mask": gt_mask if gt_mask.exists() else None,
                "gt_track": gt_track if gt_track.exists() else None,
                "endpoints": endpoints if endpoints.exists() else None,
            }
        )
    return entries


def _load_track_json(path) -> PlanarTrack:
    doc = json.loads(Path(path).read_text())
    pts = doc["points"] if "points" in doc else doc
    arr = np.array(pts, dtype=float)
    if arr.shape[1] == 3:
        arr = arr[:, :2]
    return PlanarTrack(arr)


def _close_track_to(track: PlanarTrack, seed, tip) -> PlanarTrack:
    """Force endpoints onto seed/tip so failed walks pay for their miss."""
    pts = track.points
    out = [np.asarray(seed, dtype=float)]
    for p in pts:
        if not np.array_equal(out[-1], p):
            out.append(p)
    if not np.array_equal(out[-1], np.asarray(tip, dtype=float)):
        out.append(np.asarray(tip, dtype=float))
    if len(out) < 2:
        out.append(np.asarray(tip, dtype=float) + 1e-6)
    return PlanarTrack(np.array(out))


def run_benchmark(dataset_dir, config: dict) -> dict:
    """Evaluate tracking / segmentation methods over a dataset directory.

    config: {"methods": [...subset of FF, DT, TOS, TOS+WE, TOS+ET...],
             "pipeline": PipelineConfig-dict (optional),
             "dt_scales": [...], "record": {...}}.
    Produces a deterministic report (per-image rows ordered by name,
    aggregates as unweighted means).
    """
    from .baselines import dijkstra_track, flyfisher_track, frangi, vesselness_cost
    from .config import PipelineConfig
    from .geodesic import track_crack
    from .width import ETParams, WEParams, edge_track_segment, width_expand

    dataset_dir = Path(dataset_dir)
    methods = list(config.get("methods", ["TOS"]))
    pipe_cfg = PipelineConfig.from_dict(config.get("pipeline", {}))
    dt_scales = tuple(config.get("dt_scales", (1.0, 2.0, 4.0)))

    entries = _discover(dataset_dir)
    report = {
        "dataset": str(dataset_dir),
        "methods": methods,
        "dt_scales": list(dt_scales),
        "pipeline": pipe_cfg.to_dict(),
        "images": [],
        "skipped": [],
        "aggregates": {},
    }
    if not entries:
        report["warning"] = "empty dataset directory"
        return report

    per_method_m: dict[str, list[float]] = {m: [] for m in methods}
    per_method_scores: dict[str, list[SegmentationScores]] = {m: [] for m in methods}

    for entry in entries:
        img = load_image(entry["image"])
        if entry["endpoints"] is None and entry["gt_track"] is None:
            report["skipped"].append({"stem": entry["stem"], "reason": "no endpoints or gt track"})
            continue
        if entry["endpoints"] is not None:
            ep = json.loads(entry["endpoints"].read_text())
            seed, tip = tuple(ep["seed"]), tuple(ep["tip"])
        else:
            gt_track = _load_track_json(entry["gt_track"])
            seed = tuple(gt_track.points[0])
            tip = tuple(gt_track.points[-1])
        gt_track = _load_track_json(entry["gt_track"]) if entry["gt_track"] else None
        gt_mask = load_mask(entry["gt_mask"]) if entry["gt_mask"] else None
        if gt_track is None and gt_mask is None:
            report["skipped"].append({"stem": entry["stem"], "reason": "missing ground truth"})
            continue

        row = {"stem": entry["stem"], "seed": list(map(float, seed)), "tip": list(map(float, tip)), "results": {}}
        tos_result = None
        for method in methods:
            res: dict = {}
            try:
                if method == "FF":
                    walk = flyfisher_track(img, seed, tip)
                    track = _close_track_to(walk.track, seed, tip)
                    res["reached"] = walk.reached
                elif method == "DT":
                    v = frangi(img, scales=dt_scales)
                    track = dijkstra_track(vesselness_cost(v), seed, tip)
                elif method in ("TOS", "TOS+WE", "TOS+ET"):
                    if tos_result is None:
                        tos_result = track_crack(img, seed, tip, pipe_cfg)
                    track = tos_result.planar
                else:
                    raise ValueError(f"unknown method {method!r}")
                if gt_track is not None:
                    dev = track_deviation(gt_track, track, endpoint_tol=np.inf)
                    res["m"] = dev.m
                    res["area"] = dev.area_between
                    per_method_m[method].append(dev.m)
                if gt_mask is not None and method in ("TOS+WE", "TOS+ET"):
                    if method == "TOS+WE":
                        mask = width_expand(img, track, pipe_cfg.we)
                    else:
                        mask = edge_track_segment(img, track, pipe_cfg.et)
                    sc = segmentation_scores(gt_mask, mask)
                    res["precision"] = sc.precision
                    res["recall"] = sc.recall
                    res["f1"] = sc.f1
                    per_method_scores[method].append(sc)
            except Exception as exc:  # noqa: BLE001 - per-image failures are data
                res["error"] = f"{type(exc).__name__}: {exc}"
            row["results"][method] = res
        report["images"].append(row)

    for method in methods:
        agg: dict = {}
        if per_method_m[method]:
            agg["mean_m"] = float(np.mean(per_method_m[method]))
            agg["mean_m_x1e5"] = float(np.mean(per_method_m[method]) * 1e5)
            agg["n_tracks"] = len(per_method_m[method])
        if per_method_scores[method]:
            agg["precision"] = float(np.mean([s.precision for s in per_method_scores[method]]))
            agg["recall"] = float(np.mean([s.recall for s in per_method_scores[method]]))
            agg["f1"] = float(np.mean([s.f1 for s in per_method_scores[method]]))
            agg["n_masks"] = len(per_method_scores[method])
        report["aggregates"][method] = agg
    return report


def format_report(report: dict) -> str:
    """Aligned-column text table: deviation row plus P/R/F1 rows."""
    methods = report["methods"]
    lines = []
    lines.append(f"dataset: {report['dataset']}  ({len(report['images'])} images)")
    header = f"{'':14}" + "".join(f"{m:>12}" for m in methods)
    lines.append(header)
    agg = report["aggregates"]

    def row(label, key, scale=1.0, fmt="{:.4f}"):
        cells = []
        for m in methods:
            v = agg.get(m, {}).get(key)
            cells.append(f"{fmt.format(v * scale):>12}" if v is not None else f"{'-':>12}")
        lines.append(f"{label:14}" + "".join(cells))

    row("m x 1e5", "mean_m", 1e5)
    row("precision", "precision")
    row("recall", "recall")
    row("f1", "f1")
    if report.get("skipped"):
        lines.append(f"skipped: {len(report['skipped'])}")
    if report.get("warning"):
        lines.append(f"warning: {report['warning']}")
    return "\n".join(lines) + "\n"
