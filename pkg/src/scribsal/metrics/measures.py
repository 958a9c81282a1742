"""Per-image SOD measures: MAE, F-curve, E-measure, S-measure.

Binarization rule everywhere: a pixel is predicted positive at threshold t
iff pred > t, on the fixed grid t_k = k/256, k = 0..255. Degenerate
conventions (constant ground truth, empty predictions, zero variances)
follow the cited E-measure / S-measure definitions but avoid epsilon
fudge terms so that a perfect prediction scores exactly (S, E, F, M) =
(1, 1, 1, 0).
"""

import numpy as np

from .. import kernels
from ..errors import ValidationError

BETA_SQ = 0.3
NUM_THRESHOLDS = 256


def thresholds():
    return np.arange(NUM_THRESHOLDS, dtype=np.float64) / NUM_THRESHOLDS


def validate_pair(pred, gt):
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt)
    if pred.shape != gt.shape:
        raise ValidationError(f"prediction/GT size mismatch: {pred.shape} vs {gt.shape}")
    if pred.ndim != 2:
        raise ValidationError("expected 2-D maps")
    if pred.min() < 0.0 or pred.max() > 1.0:
        raise ValidationError("prediction values must lie in [0, 1]")
    uniq = np.unique(gt)
    if not np.isin(uniq, (0, 1)).all():
        raise ValidationError("ground truth must be binary {0, 1}")
    return pred, gt.astype(bool)


def mae(pred, gt):
    """Mean absolute per-pixel difference."""
    pred, gt = validate_pair(pred, gt)
    return float(np.abs(pred - gt).mean())


def prf_curve(pred, gt):
    """Precision/recall/F over the 256-threshold grid.

    Convention: precision is 0 when nothing is predicted positive; all
    three curves are 0 when the ground truth is empty.
    """
    pred, gt = validate_pair(pred, gt)
    tp, fp = kernels.threshold_counts(np.ascontiguousarray(pred),
                                      np.ascontiguousarray(gt.astype(np.uint8)))
    npos = int(gt.sum())
    predicted = tp + fp
    precision = np.where(predicted > 0, tp / np.maximum(predicted, 1), 0.0)
    recall = (tp / npos) if npos > 0 else np.zeros(NUM_THRESHOLDS)
    f = f_beta(precision, recall)
    return precision, recall, f


def f_beta(precision, recall, beta_sq=BETA_SQ):
    denom = beta_sq * precision + recall
    num = (1.0 + beta_sq) * precision * recall
    return np.where(denom > 0, num / np.where(denom > 0, denom, 1.0), 0.0)


def f_stats(f_curves):
    """Dataset F statistics: average the per-image curves across images per
    threshold first, then take mean/max over thresholds."""
    mean_curve = mean_f_curve(f_curves)
    return float(mean_curve.mean()), float(mean_curve.max())


def mean_f_curve(f_curves):
    stacked = np.asarray(f_curves, dtype=np.float64)
    if stacked.ndim == 1:
        stacked = stacked[None, :]
    return stacked.mean(axis=0)


def e_measure_curve(pred, gt):
    """Enhanced-alignment score per binarization threshold.

    For non-constant GT the alignment matrix is phi = 2 a b / (a^2 + b^2)
    on the mean-centered binarized maps and theta = (1 + phi)^2 / 4; a
    constant GT degenerates to the fraction of matching pixels.
    """
    pred, gt = validate_pair(pred, gt)
    n = pred.size
    tp, fp = kernels.threshold_counts(np.ascontiguousarray(pred),
                                      np.ascontiguousarray(gt.astype(np.uint8)))
    npos_gt = int(gt.sum())
    scores = np.empty(NUM_THRESHOLDS, dtype=np.float64)
    for k in range(NUM_THRESHOLDS):
        n_pred = int(tp[k] + fp[k])
        if npos_gt == 0:
            scores[k] = (n - n_pred) / n
            continue
        if npos_gt == n:
            scores[k] = n_pred / n
            continue
        mu_p = n_pred / n
        mu_g = npos_gt / n
        counts = {
            (1, 1): int(tp[k]),
            (1, 0): int(fp[k]),
            (0, 1): npos_gt - int(tp[k]),
            (0, 0): n - npos_gt - int(fp[k]),
        }
        total = 0.0
        for (a, b), cnt in counts.items():
            if cnt == 0:
                continue
            phi_p = a - mu_p
            phi_g = b - mu_g
            denom = phi_g * phi_g + phi_p * phi_p
            align = 0.0 if denom == 0.0 else 2.0 * phi_g * phi_p / denom
            total += cnt * (1.0 + align) ** 2 / 4.0
        scores[k] = total / n
    return scores


def e_measure(pred, gt):
    """(E_avg, E_max) over the threshold grid for one image."""
    curve = e_measure_curve(pred, gt)
    return float(curve.mean()), float(curve.max())


def s_measure(pred, gt, alpha=0.5):
    """Structure measure: alpha * object similarity + (1 - alpha) * region
    similarity (4-quadrant SSIM around the GT centroid)."""
    pred, gt = validate_pair(pred, gt)
    y = gt.mean()
    if y == 0.0:
        return float(1.0 - pred.mean())
    if y == 1.0:
        return float(pred.mean())
    q = alpha * _s_object(pred, gt) + (1.0 - alpha) * _s_region(pred, gt)
    return float(max(q, 0.0))


def _object_score(values):
    if values.size == 0:
        return 0.0
    x = values.mean()
    sigma = values.std(ddof=1) if values.size > 1 else 0.0
    return 2.0 * x / (x * x + 1.0 + sigma)


def _s_object(pred, gt):
    o_fg = _object_score(pred[gt])
    o_bg = _object_score(1.0 - pred[~gt])
    u = gt.mean()
    return u * o_fg + (1.0 - u) * o_bg


def _round_half_up(v):
    return int(np.floor(v + 0.5))


def _centroid(gt):
    """1-based centroid of the foreground, rounded half-up."""
    h, w = gt.shape
    total = gt.sum()
    cols = np.arange(1, w + 1, dtype=np.float64)
    rows = np.arange(1, h + 1, dtype=np.float64)
    x = _round_half_up((gt.sum(axis=0) * cols).sum() / total)
    y = _round_half_up((gt.sum(axis=1) * rows).sum() / total)
    return x, y


def _ssim(pred_q, gt_q):
    n = pred_q.size
    if n == 0:
        return 0.0
    x = pred_q.mean()
    y = gt_q.mean()
    norm = n - 1 if n > 1 else 1
    sigma_x = ((pred_q - x) ** 2).sum() / norm
    sigma_y = ((gt_q - y) ** 2).sum() / norm
    sigma_xy = ((pred_q - x) * (gt_q - y)).sum() / norm
    a = 4.0 * x * y * sigma_xy
    b = (x * x + y * y) * (sigma_x + sigma_y)
    if a != 0.0:
        return a / b  # a != 0 implies b > 0
    return 1.0 if b == 0.0 else 0.0


def _s_region(pred, gt):
    h, w = gt.shape
    cx, cy = _centroid(gt)
    area = h * w
    gtf = gt.astype(np.float64)
    quads = [
        (pred[:cy, :cx], gtf[:cy, :cx]),
        (pred[:cy, cx:], gtf[:cy, cx:]),
        (pred[cy:, :cx], gtf[cy:, :cx]),
        (pred[cy:, cx:], gtf[cy:, cx:]),
    ]
    score = 0.0
    for pq, gq in quads:
        score += (pq.size / area) * _ssim(pq, gq)
    return score
