"""Numba-compiled implementations of the hot kernels.

Loop-level twins of :mod:`scribsal.kernels.numpy_impl`; results are
bit-identical, only the execution strategy differs.
"""

import numpy as np
from numba import njit

_TAN_LOW = 0.4142135623730950488
_TAN_HIGH = 2.4142135623730950488


@njit(cache=True)
def window_label_counts(fg, bg, k):
    h, w = fg.shape
    r = k // 2
    # summed-area tables, one zero row/column prepended
    sat_f = np.zeros((h + 1, w + 1), dtype=np.int64)
    sat_b = np.zeros((h + 1, w + 1), dtype=np.int64)
    for y in range(h):
        row_f = 0
        row_b = 0
        for x in range(w):
            if fg[y, x]:
                row_f += 1
            elif bg[y, x]:
                row_b += 1
            sat_f[y + 1, x + 1] = sat_f[y, x + 1] + row_f
            sat_b[y + 1, x + 1] = sat_b[y, x + 1] + row_b
    n_f = np.empty((h, w), dtype=np.int64)
    n_b = np.empty((h, w), dtype=np.int64)
    area = np.empty((h, w), dtype=np.int64)
    for y in range(h):
        y0 = max(y - r, 0)
        y1 = min(y + r, h - 1) + 1
        for x in range(w):
            x0 = max(x - r, 0)
            x1 = min(x + r, w - 1) + 1
            n_f[y, x] = (sat_f[y1, x1] - sat_f[y0, x1]
                         - sat_f[y1, x0] + sat_f[y0, x0])
            n_b[y, x] = (sat_b[y1, x1] - sat_b[y0, x1]
                         - sat_b[y1, x0] + sat_b[y0, x0])
            area[y, x] = (y1 - y0) * (x1 - x0)
    return n_f, n_b, area


@njit(cache=True)
def nonmax_suppression(mag, gx, gy):
    h, w = mag.shape
    out = np.zeros((h, w), dtype=mag.dtype)
    for y in range(h):
        for x in range(w):
            ax = abs(gx[y, x])
            ay = abs(gy[y, x])
            if ay <= _TAN_LOW * ax:
                dy, dx = 0, 1
            elif ay >= _TAN_HIGH * ax:
                dy, dx = 1, 0
            elif gx[y, x] * gy[y, x] >= 0.0:
                dy, dx = 1, 1
            else:
                dy, dx = 1, -1
            m = mag[y, x]
            y1, x1 = y + dy, x + dx
            y2, x2 = y - dy, x - dx
            n1 = mag[y1, x1] if 0 <= y1 < h and 0 <= x1 < w else 0.0
            n2 = mag[y2, x2] if 0 <= y2 < h and 0 <= x2 < w else 0.0
            if m >= n1 and m >= n2:
                out[y, x] = m
    return out


@njit(cache=True)
def hysteresis_connect(strong, weak):
    h, w = strong.shape
    keep = strong.copy()
    # flood fill outward from strong pixels through weak ones
    stack_y = np.empty(h * w, dtype=np.int64)
    stack_x = np.empty(h * w, dtype=np.int64)
    top = 0
    for y in range(h):
        for x in range(w):
            if strong[y, x]:
                stack_y[top] = y
                stack_x[top] = x
                top += 1
    while top > 0:
        top -= 1
        y = stack_y[top]
        x = stack_x[top]
        for dy in range(-1, 2):
            for dx in range(-1, 2):
                yy = y + dy
                xx = x + dx
                if 0 <= yy < h and 0 <= xx < w and weak[yy, xx] and not keep[yy, xx]:
                    keep[yy, xx] = True
                    stack_y[top] = yy
                    stack_x[top] = xx
                    top += 1
    return keep


@njit(cache=True)
def threshold_counts(pred, gt):
    h, w = pred.shape
    tp = np.zeros(256, dtype=np.int64)
    fp = np.zeros(256, dtype=np.int64)
    for y in range(h):
        for x in range(w):
            p = pred[y, x]
            # binary search: number of thresholds k/256 strictly below p
            lo = 0
            hi = 256
            while lo < hi:
                mid = (lo + hi) // 2
                if mid / 256.0 < p:
                    lo = mid + 1
                else:
                    hi = mid
            if lo == 0:
                continue
            if gt[y, x]:
                tp[lo - 1] += 1
            else:
                fp[lo - 1] += 1
    # histogram at the highest exceeded threshold -> suffix sums
    for k in range(254, -1, -1):
        tp[k] += tp[k + 1]
        fp[k] += fp[k + 1]
    return tp, fp
