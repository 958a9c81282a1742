from .augment import AugmentConfig, augment_arrays, augment_sample, resize_image, resize_mask
from .manifest import DatasetManifest, SampleRecord, annotation_density, load_manifest, save_manifest
from .rasters import (BACKGROUND, BOUNDARY, BOUNDARY_PALETTE, FOREGROUND, IGNORE,
                      NON_BOUNDARY_BG, NON_BOUNDARY_FG, UNLABELED,
                      decode_boundary_labels, decode_scribble_mask,
                      encode_boundary_labels, encode_scribble_mask,
                      load_boundary_labels, load_image, load_saliency_map,
                      load_scribble_mask, save_boundary_labels, save_image,
                      save_saliency_map, save_scribble_mask)

__all__ = [
    "AugmentConfig", "augment_arrays", "augment_sample", "resize_image", "resize_mask",
    "DatasetManifest", "SampleRecord", "annotation_density", "load_manifest", "save_manifest",
    "UNLABELED", "FOREGROUND", "BACKGROUND",
    "NON_BOUNDARY_BG", "NON_BOUNDARY_FG", "BOUNDARY", "IGNORE", "BOUNDARY_PALETTE",
    "decode_scribble_mask", "encode_scribble_mask", "load_scribble_mask", "save_scribble_mask",
    "decode_boundary_labels", "encode_boundary_labels", "load_boundary_labels", "save_boundary_labels",
    "load_image", "save_image", "load_saliency_map", "save_saliency_map",
]
