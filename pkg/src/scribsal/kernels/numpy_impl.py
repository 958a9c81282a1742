"""Pure-numpy reference implementations of the hot kernels.

These are the fallback path when numba is disabled (SCRIBSAL_NUMBA=0) or
unavailable. Every function here must return results identical to its
counterpart in :mod:`scribsal.kernels.numba_impl`; the test suite asserts
exact equality.
"""

import numpy as np

# tan(pi/8) and tan(3*pi/8); sector boundaries for gradient-direction
# quantisation. Comparisons use multiplication so both backends agree bitwise.
_TAN_LOW = 0.4142135623730950488
_TAN_HIGH = 2.4142135623730950488


def window_label_counts(fg, bg, k):
    """Per-pixel label counts inside a centered k x k window.

    Windows are clipped at the image border (no padding). Returns
    ``(n_f, n_b, area)`` int64 arrays: foreground count, background count,
    and the clipped window area for every pixel.
    """
    h, w = fg.shape
    r = k // 2
    sat_f = np.zeros((h + 1, w + 1), dtype=np.int64)
    sat_b = np.zeros((h + 1, w + 1), dtype=np.int64)
    sat_f[1:, 1:] = np.cumsum(np.cumsum(fg.astype(np.int64), axis=0), axis=1)
    sat_b[1:, 1:] = np.cumsum(np.cumsum(bg.astype(np.int64), axis=0), axis=1)

    ys = np.arange(h)
    xs = np.arange(w)
    y0 = np.maximum(ys - r, 0)
    y1 = np.minimum(ys + r, h - 1) + 1  # exclusive
    x0 = np.maximum(xs - r, 0)
    x1 = np.minimum(xs + r, w - 1) + 1

    def rect_sum(sat):
        return (sat[y1[:, None], x1[None, :]] - sat[y0[:, None], x1[None, :]]
                - sat[y1[:, None], x0[None, :]] + sat[y0[:, None], x0[None, :]])

    n_f = rect_sum(sat_f)
    n_b = rect_sum(sat_b)
    area = (y1 - y0)[:, None] * (x1 - x0)[None, :]
    return n_f, n_b, area


def nonmax_suppression(mag, gx, gy):
    """Keep gradient-magnitude pixels that are maximal along the
    quantised gradient direction; out-of-border neighbours count as 0."""
    h, w = mag.shape
    padded = np.zeros((h + 2, w + 2), dtype=mag.dtype)
    padded[1:-1, 1:-1] = mag

    def shifted(dy, dx):
        return padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]

    ax = np.abs(gx)
    ay = np.abs(gy)
    horiz = ay <= _TAN_LOW * ax
    vert = ~horiz & (ay >= _TAN_HIGH * ax)
    diag = ~(horiz | vert)
    main_diag = diag & (gx * gy >= 0.0)   # gradient along "\"
    anti_diag = diag & (gx * gy < 0.0)    # gradient along "/"

    n1 = np.zeros_like(mag)
    n2 = np.zeros_like(mag)
    for sel, (dy, dx) in ((horiz, (0, 1)), (vert, (1, 0)),
                          (main_diag, (1, 1)), (anti_diag, (1, -1))):
        n1[sel] = shifted(dy, dx)[sel]
        n2[sel] = shifted(-dy, -dx)[sel]

    keep = (mag >= n1) & (mag >= n2)
    out = np.where(keep, mag, 0.0)
    return out


def hysteresis_connect(strong, weak):
    """Weak pixels survive iff 8-connected (transitively) to a strong pixel."""
    h, w = strong.shape
    keep = strong.copy()
    while True:
        padded = np.zeros((h + 2, w + 2), dtype=bool)
        padded[1:-1, 1:-1] = keep
        neigh = np.zeros((h, w), dtype=bool)
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dy == 0 and dx == 0:
                    continue
                neigh |= padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]
        grown = keep | (weak & neigh)
        if np.array_equal(grown, keep):
            return keep
        keep = grown


def threshold_counts(pred, gt):
    """True/false-positive counts for the 256-threshold grid t_k = k/256.

    A pixel is predicted positive at threshold t iff pred > t. Returns
    ``(tp, fp)`` int64 arrays of length 256.
    """
    grid = np.arange(256, dtype=np.float64) / 256.0
    # searchsorted(side="left") counts thresholds strictly below each value,
    # i.e. exactly the thresholds this pixel exceeds.
    idx = np.searchsorted(grid, pred.ravel(), side="left")
    gt_flat = gt.ravel().astype(bool)

    def suffix_positives(indices):
        hist = np.bincount(indices, minlength=257)
        # positives at threshold k = number of pixels with idx > k
        return (hist.sum() - np.cumsum(hist))[:256].astype(np.int64)

    tp = suffix_positives(idx[gt_flat])
    fp = suffix_positives(idx[~gt_flat])
    return tp, fp
