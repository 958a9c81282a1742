"""Class localization maps to per-pixel trimaps.

Each class map is min-max normalized into a probability map (constant maps
normalize to all zeros), optionally upsampled bilinearly to image
resolution, and then double-thresholded: pixels whose best class
probability exceeds the foreground threshold take that class label
(1..C), pixels below the background threshold become 0, everything else
is marked uncertain (255).
"""

import numpy as np
from PIL import Image

from ..errors import ParameterError

UNCERTAIN = 255


def cam_probabilities(maps, out_size=None):
    """Min-max normalize each class map into [0, 1]; optionally upsample.

    maps: (C, h, w) float array. out_size: (H, W) target or None.
    """
    maps = np.asarray(maps, dtype=np.float64)
    if not np.isfinite(maps).all():
        raise ParameterError("class localization maps contain non-finite values")
    probs = np.zeros_like(maps)
    for c in range(maps.shape[0]):
        lo = maps[c].min()
        hi = maps[c].max()
        if hi > lo:
            probs[c] = (maps[c] - lo) / (hi - lo)
    if out_size is not None and tuple(out_size) != maps.shape[1:]:
        h, w = out_size
        up = np.empty((maps.shape[0], h, w), dtype=np.float64)
        for c in range(maps.shape[0]):
            im = Image.fromarray(probs[c].astype(np.float32), mode="F")
            up[c] = np.asarray(im.resize((w, h), Image.BILINEAR), dtype=np.float64)
        probs = np.clip(up, 0.0, 1.0)
    return probs


def trimap_from_cam(probs, t_f=0.30, t_b=0.07):
    """Hard-threshold probability maps into {0, 1..C, 255} labels."""
    if not (0.0 <= t_b < t_f <= 1.0):
        raise ParameterError(f"thresholds must satisfy 0 <= t_b < t_f <= 1, got ({t_f}, {t_b})")
    probs = np.asarray(probs)
    if probs.shape[0] > 254:
        raise ParameterError("more than 254 categories collide with the uncertain code")
    best = probs.max(axis=0)
    label = probs.argmax(axis=0).astype(np.uint8) + 1
    out = np.full(best.shape, UNCERTAIN, dtype=np.uint8)
    out[best > t_f] = label[best > t_f]
    out[best < t_b] = 0
    return out
