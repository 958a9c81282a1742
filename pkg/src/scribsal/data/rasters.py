"""Raster formats: images, scribble masks, boundary-label rasters.

Scribble masks are RGB PNGs: pure red strokes mark foreground, pure green
strokes background, black everything else; a per-channel tolerance admits
hand-made files. Boundary labels are single-channel PNGs in a fixed
4-level palette. Both encoders are deterministic, so identical inputs
produce bit-identical files.
"""

import io

import numpy as np
from PIL import Image

from ..errors import DecodeError, ValidationError

# scribble mask codes
UNLABELED = 0
FOREGROUND = 1
BACKGROUND = 2

SCRIBBLE_COLORS = {
    UNLABELED: (0, 0, 0),
    FOREGROUND: (255, 0, 0),
    BACKGROUND: (0, 255, 0),
}
COLOR_TOLERANCE = 10

# boundary label codes and their raster palette
NON_BOUNDARY_BG = 0
NON_BOUNDARY_FG = 1
BOUNDARY = 2
IGNORE = 3

BOUNDARY_PALETTE = {
    NON_BOUNDARY_BG: 0,
    NON_BOUNDARY_FG: 128,
    BOUNDARY: 255,
    IGNORE: 64,
}


def load_image(path):
    """Decode an RGB image to a float32 H x W x 3 array in [0, 1]."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=np.float32)
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DecodeError(f"degenerate image size in {path}")
    return arr / 255.0


def save_image(path, image):
    """Encode a [0, 1] float image back to an 8-bit PNG (inverse of load_image)."""
    arr = np.clip(np.rint(np.asarray(image) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def decode_scribble_mask(data):
    """Decode scribble raster bytes into a uint8 mask of codes {0, 1, 2}.

    Any pixel further than COLOR_TOLERANCE (per channel) from all three
    palette colors raises DecodeError naming the offending color.
    """
    with Image.open(io.BytesIO(data)) as im:
        rgb = np.asarray(im.convert("RGB"), dtype=np.int16)
    mask = np.full(rgb.shape[:2], 255, dtype=np.uint8)
    for code, color in SCRIBBLE_COLORS.items():
        near = np.all(np.abs(rgb - np.asarray(color, dtype=np.int16)) <= COLOR_TOLERANCE, axis=-1)
        mask[near] = code
    bad = mask == 255
    if bad.any():
        y, x = np.argwhere(bad)[0]
        raise DecodeError(
            f"unrecognized scribble color {tuple(int(v) for v in rgb[y, x])} at ({y}, {x})"
        )
    return mask


def encode_scribble_mask(mask):
    """Encode a {0, 1, 2} mask as RGB PNG bytes; lossless inverse of decode."""
    mask = np.asarray(mask)
    _check_codes(mask, (UNLABELED, FOREGROUND, BACKGROUND), "scribble mask")
    rgb = np.zeros(mask.shape + (3,), dtype=np.uint8)
    for code, color in SCRIBBLE_COLORS.items():
        rgb[mask == code] = color
    buf = io.BytesIO()
    Image.fromarray(rgb, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def load_scribble_mask(path):
    with open(path, "rb") as fh:
        return decode_scribble_mask(fh.read())


def save_scribble_mask(path, mask):
    with open(path, "wb") as fh:
        fh.write(encode_scribble_mask(mask))


def decode_boundary_labels(data):
    """Decode a boundary-label raster into codes {0, 1, 2, 3}."""
    with Image.open(io.BytesIO(data)) as im:
        gray = np.asarray(im.convert("L"))
    out = np.full(gray.shape, 255, dtype=np.uint8)
    for code, value in BOUNDARY_PALETTE.items():
        out[gray == value] = code
    bad = out == 255
    if bad.any():
        value = int(gray[bad][0])
        raise DecodeError(f"unrecognized boundary-label value {value}")
    return out


def encode_boundary_labels(labels):
    labels = np.asarray(labels)
    _check_codes(labels, tuple(BOUNDARY_PALETTE), "boundary label map")
    gray = np.zeros(labels.shape, dtype=np.uint8)
    for code, value in BOUNDARY_PALETTE.items():
        gray[labels == code] = value
    buf = io.BytesIO()
    Image.fromarray(gray, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def load_boundary_labels(path):
    with open(path, "rb") as fh:
        return decode_boundary_labels(fh.read())


def save_boundary_labels(path, labels):
    with open(path, "wb") as fh:
        fh.write(encode_boundary_labels(labels))


def save_saliency_map(path, saliency):
    """Write a [0, 1] saliency map as an 8-bit grayscale PNG (round(255 * S))."""
    arr = np.clip(np.rint(np.asarray(saliency) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(path, format="PNG")


def load_saliency_map(path):
    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=np.float64) / 255.0


def _check_codes(arr, allowed, what):
    values = np.unique(arr)
    extra = set(values.tolist()) - set(allowed)
    if extra:
        raise ValidationError(f"{what} contains invalid codes {sorted(extra)}")
