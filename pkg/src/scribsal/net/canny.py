"""Classical Canny edge detection on [0, 1] images.

Pipeline: Gaussian smoothing (separable, kernel truncated at 3 sigma,
replicate borders), Sobel gradients, non-maximum suppression along the
quantised gradient direction, double-threshold hysteresis with
8-connectivity. Thresholds are absolute values on the Sobel magnitude of
the [0, 1] intensity image. NMS and hysteresis run on the kernels backend.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import ParameterError

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T


@dataclass
class CannyConfig:
    sigma: float = 1.4
    low: float = 0.1
    high: float = 0.2


def canny_edges(image, low=0.1, high=0.2, sigma=1.4):
    """Binary {0, 1} edge map of an H x W (grayscale) or H x W x 3 image."""
    if not (0.0 <= low < high):
        raise ParameterError(f"thresholds must satisfy 0 <= low < high, got ({low}, {high})")
    gray = to_intensity(image).astype(np.float64)
    smoothed = gaussian_smooth(gray, sigma)
    gx = correlate2d(smoothed, SOBEL_X)
    gy = correlate2d(smoothed, SOBEL_Y)
    mag = np.hypot(gx, gy)
    thin = kernels.nonmax_suppression(mag, gx, gy)
    strong = thin >= high
    weak = (thin >= low) & ~strong
    edges = kernels.hysteresis_connect(strong, weak)
    return edges.astype(np.uint8)


def to_intensity(image):
    """Channel-mean intensity of an RGB image (identity on grayscale input)."""
    image = np.asarray(image)
    if image.ndim == 3:
        return image.mean(axis=2)
    return image


def gaussian_kernel(sigma):
    radius = max(1, int(np.ceil(3.0 * sigma)))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(xs ** 2) / (2.0 * sigma ** 2))
    return k / k.sum()


def gaussian_smooth(image, sigma):
    """Separable Gaussian blur with replicate-edge padding."""
    k = gaussian_kernel(sigma)
    r = len(k) // 2
    padded = np.pad(image, ((r, r), (0, 0)), mode="edge")
    out = np.zeros_like(image)
    for i, wgt in enumerate(k):
        out += wgt * padded[i:i + image.shape[0], :]
    padded = np.pad(out, ((0, 0), (r, r)), mode="edge")
    out = np.zeros_like(image)
    for i, wgt in enumerate(k):
        out += wgt * padded[:, i:i + image.shape[1]]
    return out


def correlate2d(image, kern):
    """3x3 cross-correlation with replicate-edge padding."""
    padded = np.pad(image, 1, mode="edge")
    out = np.zeros_like(image)
    h, w = image.shape
    for dy in range(3):
        for dx in range(3):
            out += kern[dy, dx] * padded[dy:dy + h, dx:dx + w]
    return out
