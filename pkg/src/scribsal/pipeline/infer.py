"""Batch inference: checkpoint + image directory -> 8-bit saliency rasters."""

import os
import warnings

import numpy as np
import torch
from PIL import Image

from ..data.augment import resize_image
from ..data.rasters import load_image, save_saliency_map
from ..errors import ValidationError
from ..net.canny import canny_edges
from ..net.model import BoundaryAwareSaliencyNet
from .checkpoint import load_into_model
from .config import config_from_dict

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff")


def load_model(checkpoint_path):
    """Rebuild the network described by a checkpoint's embedded config."""
    from .checkpoint import load_checkpoint
    _, config_doc, _ = load_checkpoint(checkpoint_path)
    config_doc = dict(config_doc)
    config_doc.pop("config_hash", None)
    cfg = config_from_dict(config_doc)
    model = BoundaryAwareSaliencyNet(cfg.network_config())
    load_into_model(model, checkpoint_path)
    model.eval()
    return model, cfg


def infer_image(model, cfg, image):
    """Predict a saliency map for one H x W x 3 [0, 1] image at its own size."""
    h, w = image.shape[:2]
    resized = resize_image(image.astype(np.float32), cfg.input_size)
    x = torch.from_numpy(np.ascontiguousarray(resized.transpose(2, 0, 1))).unsqueeze(0)
    edge = None
    if cfg.eau:
        canny = cfg.network_config().canny
        e = canny_edges(resized, low=canny.low, high=canny.high, sigma=canny.sigma)
        edge = torch.from_numpy(e[None, None].astype(np.float32))
    with torch.no_grad():
        sal, _ = model(x, edge_map=edge)
    out = sal[0, 0].numpy().astype(np.float32)
    if (h, w) != out.shape:
        im = Image.fromarray(out, mode="F").resize((w, h), Image.BILINEAR)
        out = np.asarray(im)
    return np.clip(out, 0.0, 1.0)


def infer(checkpoint_path, image_dir, out_dir):
    """Run inference on every image in a directory.

    Unreadable files are skipped with a warning and reported back so the
    CLI can exit non-zero. Returns (written paths, skipped names).
    """
    model, cfg = load_model(checkpoint_path)
    if not os.path.isdir(image_dir):
        raise ValidationError(f"image directory not found: {image_dir}")
    os.makedirs(out_dir, exist_ok=True)
    written, skipped = [], []
    for name in sorted(os.listdir(image_dir)):
        stem, ext = os.path.splitext(name)
        if ext.lower() not in IMAGE_EXTENSIONS:
            continue
        path = os.path.join(image_dir, name)
        try:
            image = load_image(path)
        except Exception as exc:
            warnings.warn(f"skipping unreadable image {path}: {exc}")
            skipped.append(name)
            continue
        saliency = infer_image(model, cfg, image)
        out_path = os.path.join(out_dir, f"{stem}.png")
        save_saliency_map(out_path, saliency)
        written.append(out_path)
    return written, skipped
