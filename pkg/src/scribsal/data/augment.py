"""Seeded geometric augmentation applied jointly to an image and its masks.

Rotations are restricted to multiples of 90 degrees and masks are resampled
with nearest-neighbor so label codes survive the transform exactly. The
random crop scale is drawn per side from ``crop_scale``.
"""

from dataclasses import dataclass

import numpy as np
from PIL import Image

from ..errors import ParameterError


@dataclass
class AugmentConfig:
    size: int = 352
    rotate: bool = True
    flip: bool = True
    crop: bool = True
    crop_scale: tuple = (0.75, 1.0)


def augment_sample(image, mask, seed, cfg=None):
    """Apply one seeded augmentation draw to (image, scribble mask)."""
    image, masks = augment_arrays(image, [mask], seed, cfg)
    return image, masks[0]


def augment_arrays(image, masks, seed, cfg=None):
    """Same transform for an image and any number of aligned label rasters.

    The draw order is fixed (rotation, flip, crop) so a given seed always
    produces the same transform regardless of which flags are enabled.
    """
    cfg = cfg or AugmentConfig()
    image = np.asarray(image)
    masks = [np.asarray(m) for m in masks]
    for m in masks:
        if m.shape[:2] != image.shape[:2]:
            raise ParameterError("image and mask sizes do not match")
    lo, hi = cfg.crop_scale
    if not (0.0 < lo <= hi <= 1.0):
        raise ParameterError(f"crop scale range {cfg.crop_scale} outside (0, 1]")

    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, 4)) if cfg.rotate else 0
    do_flip = bool(rng.integers(0, 2)) if cfg.flip else False

    if k:
        image = np.rot90(image, k)
        masks = [np.rot90(m, k) for m in masks]
    if do_flip:
        image = image[:, ::-1]
        masks = [m[:, ::-1] for m in masks]

    if cfg.crop:
        h, w = image.shape[:2]
        ch = max(1, int(round(h * rng.uniform(lo, hi))))
        cw = max(1, int(round(w * rng.uniform(lo, hi))))
        if ch > h or cw > w:
            raise ParameterError("crop larger than input")
        oy = int(rng.integers(0, h - ch + 1))
        ox = int(rng.integers(0, w - cw + 1))
        image = image[oy:oy + ch, ox:ox + cw]
        masks = [m[oy:oy + ch, ox:ox + cw] for m in masks]

    image = resize_image(image, cfg.size)
    masks = [resize_mask(m, cfg.size) for m in masks]
    return np.ascontiguousarray(image), [np.ascontiguousarray(m) for m in masks]


def resize_image(image, size):
    """Bilinear resize of a float H x W x 3 image to size x size."""
    if image.shape[0] == size and image.shape[1] == size:
        return image.astype(np.float32, copy=False)
    chans = []
    for c in range(image.shape[2]):
        im = Image.fromarray(np.ascontiguousarray(image[:, :, c]).astype(np.float32), mode="F")
        chans.append(np.asarray(im.resize((size, size), Image.BILINEAR)))
    return np.stack(chans, axis=-1)


def resize_mask(mask, size):
    """Nearest-neighbor resize; never invents codes outside the input set."""
    if mask.shape[0] == size and mask.shape[1] == size:
        return mask
    im = Image.fromarray(np.ascontiguousarray(mask), mode="L")
    return np.asarray(im.resize((size, size), Image.NEAREST))
