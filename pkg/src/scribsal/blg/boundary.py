"""Object-boundary labels from a trimap via windowed label statistics.

A pixel is declared boundary when its k x k neighborhood is sufficiently
labeled (at least ``tau`` of the clipped window area) and the labeled part
is balanced between foreground and background (minority fraction at least
``rho``). Uncertain trimap pixels always map to the ignore code. Window
counts run on the kernels backend (summed-area tables on the numpy path,
direct loops under numba).
"""

import numpy as np

from .. import kernels
from ..data.rasters import BOUNDARY, IGNORE, NON_BOUNDARY_BG, NON_BOUNDARY_FG
from ..errors import ParameterError
from .cam import UNCERTAIN


def boundary_from_trimap(trimap, window=13, rho=0.3, tau=0.5):
    """Classify every pixel as boundary / non-boundary fg / non-boundary bg / ignore."""
    if window % 2 == 0 or window < 3:
        raise ParameterError(f"window size must be odd and >= 3, got {window}")
    if not (0.0 < rho <= 0.5):
        raise ParameterError(f"balance fraction rho must lie in (0, 0.5], got {rho}")
    if not (0.0 < tau <= 1.0):
        raise ParameterError(f"validity fraction tau must lie in (0, 1], got {tau}")

    trimap = np.asarray(trimap, dtype=np.uint8)
    fg = (trimap >= 1) & (trimap != UNCERTAIN)
    bg = trimap == 0

    n_f, n_b, area = kernels.window_label_counts(
        np.ascontiguousarray(fg), np.ascontiguousarray(bg), window)
    labeled = n_f + n_b
    balanced = np.minimum(n_f, n_b) >= rho * labeled
    valid = labeled >= tau * area
    is_boundary = valid & balanced & (labeled > 0)

    out = np.empty(trimap.shape, dtype=np.uint8)
    out[bg] = NON_BOUNDARY_BG
    out[fg] = NON_BOUNDARY_FG
    out[is_boundary & (fg | bg)] = BOUNDARY
    out[trimap == UNCERTAIN] = IGNORE
    return out
