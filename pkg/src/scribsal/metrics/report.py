"""Dataset-level evaluation: pairing files, aggregation, report export.

Predictions and ground truth are matched by file stem. Dataset MAE and
S-measure are arithmetic means of per-image values; F and E first average
the per-image threshold curves across images, then reduce over thresholds
(mean -> avg, max -> max), the convention behind published F/PR curves.
"""

import csv
import json
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from ..errors import ValidationError
from .measures import e_measure_curve, mae, prf_curve, s_measure, thresholds

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff")


@dataclass
class ImageMetrics:
    id: str
    mae: float
    s_measure: float
    e_avg: float
    e_max: float
    f_avg: float
    f_max: float
    flagged: bool = False  # empty-GT images score 0 on F and are flagged


@dataclass
class MetricReport:
    s_measure: float = 0.0
    e_avg: float = 0.0
    e_max: float = 0.0
    f_avg: float = 0.0
    f_max: float = 0.0
    mae: float = 0.0
    per_image: list = field(default_factory=list)
    precision_curve: np.ndarray = None
    recall_curve: np.ndarray = None
    f_curve: np.ndarray = None
    e_curve: np.ndarray = None
    skipped: list = field(default_factory=list)

    def summary(self):
        return {"s_measure": self.s_measure, "e_avg": self.e_avg,
                "e_max": self.e_max, "f_avg": self.f_avg, "f_max": self.f_max,
                "mae": self.mae}


def load_prediction(path):
    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=np.float64) / 255.0


def load_groundtruth(path):
    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"))
    return (arr > 127).astype(np.uint8)


def _index_dir(directory):
    out = {}
    for name in sorted(os.listdir(directory)):
        stem, ext = os.path.splitext(name)
        if ext.lower() in IMAGE_EXTENSIONS:
            out[stem] = os.path.join(directory, name)
    return out


def evaluate_pairs(pairs):
    """pairs: iterable of (id, prediction array, gt array) -> MetricReport."""
    per_image = []
    p_curves, r_curves, f_curves, e_curves = [], [], [], []
    maes, s_vals = [], []
    for pid, pred, gt in pairs:
        precision, recall, f = prf_curve(pred, gt)
        e_curve = e_measure_curve(pred, gt)
        m = mae(pred, gt)
        s = s_measure(pred, gt)
        flagged = not np.asarray(gt, dtype=bool).any()
        per_image.append(ImageMetrics(
            id=pid, mae=m, s_measure=s,
            e_avg=float(e_curve.mean()), e_max=float(e_curve.max()),
            f_avg=float(f.mean()), f_max=float(f.max()), flagged=flagged))
        p_curves.append(precision)
        r_curves.append(recall)
        f_curves.append(f)
        e_curves.append(e_curve)
        maes.append(m)
        s_vals.append(s)
    if not per_image:
        raise ValidationError("no prediction/ground-truth pairs to evaluate")

    mean_f = np.mean(f_curves, axis=0)
    mean_e = np.mean(e_curves, axis=0)
    return MetricReport(
        s_measure=float(np.mean(s_vals)),
        e_avg=float(mean_e.mean()), e_max=float(mean_e.max()),
        f_avg=float(mean_f.mean()), f_max=float(mean_f.max()),
        mae=float(np.mean(maes)),
        per_image=per_image,
        precision_curve=np.mean(p_curves, axis=0),
        recall_curve=np.mean(r_curves, axis=0),
        f_curve=mean_f, e_curve=mean_e)


def evaluate_dataset(pred_dir, gt_dir):
    """Evaluate matching file stems of two directories.

    Unmatched ids on either side are recorded in ``report.skipped`` with a
    warning; callers treat a non-empty skipped list as a failure condition.
    """
    preds = _index_dir(pred_dir)
    gts = _index_dir(gt_dir)
    common = sorted(set(preds) & set(gts))
    skipped = sorted(set(preds) ^ set(gts))
    if skipped:
        warnings.warn(f"unmatched prediction/GT ids excluded: {skipped}")
    if not common:
        report = MetricReport(skipped=skipped)
        return report
    report = evaluate_pairs(
        (pid, load_prediction(preds[pid]), load_groundtruth(gts[pid])) for pid in common)
    report.skipped = skipped
    return report


def write_report(report, path):
    doc = {
        "dataset": report.summary() | {"num_images": len(report.per_image)},
        "images": [vars(m) for m in report.per_image],
        "curves": None,
        "skipped": report.skipped,
    }
    if report.f_curve is not None:
        doc["curves"] = {
            "threshold": thresholds().tolist(),
            "precision": report.precision_curve.tolist(),
            "recall": report.recall_curve.tolist(),
            "f": report.f_curve.tolist(),
            "e": report.e_curve.tolist(),
        }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_report(path):
    with open(path) as fh:
        return json.load(fh)


def export_curves(report_doc, out_dir):
    """Write plot-ready PR and F-threshold CSVs (256 rows each).

    Floats are serialized with repr so a re-read reproduces the in-memory
    values exactly. Accepts a MetricReport or a report JSON document.
    """
    if isinstance(report_doc, MetricReport):
        curves = {"threshold": thresholds().tolist(),
                  "precision": report_doc.precision_curve.tolist(),
                  "recall": report_doc.recall_curve.tolist(),
                  "f": report_doc.f_curve.tolist(),
                  "e": report_doc.e_curve.tolist()}
    else:
        curves = report_doc.get("curves")
    if not curves:
        raise ValidationError("report carries no curves to export")
    os.makedirs(out_dir, exist_ok=True)
    pr_path = os.path.join(out_dir, "pr_curve.csv")
    f_path = os.path.join(out_dir, "f_curve.csv")
    with open(pr_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["threshold", "precision", "recall"])
        for t, p, r in zip(curves["threshold"], curves["precision"], curves["recall"]):
            w.writerow([repr(t), repr(p), repr(r)])
    with open(f_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["threshold", "f"])
        for t, f in zip(curves["threshold"], curves["f"]):
            w.writerow([repr(t), repr(f)])
    return pr_path, f_path


def read_curve_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows
