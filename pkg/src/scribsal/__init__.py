"""scribsal: weakly-supervised salient object detection from scribbles.

Subpackages: ``data`` (manifests, rasters, augmentation), ``blg``
(boundary pseudo-label generation), ``net`` (the saliency network),
``losses``, ``metrics``, ``pipeline`` (training/inference/CLI) and
``kernels`` (numba-accelerated hot loops with a numpy fallback).
"""

__version__ = "0.1.0"
