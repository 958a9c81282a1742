"""Driver turning classifier weights into boundary-label rasters on disk."""

import os
from dataclasses import dataclass

import torch

from ..data.rasters import load_image, save_boundary_labels
from ..errors import ScribsalError
from .boundary import boundary_from_trimap
from .cam import cam_probabilities, trimap_from_cam
from .classifier import BoundaryLabelClassifier, ValidationError, image_to_tensor


@dataclass
class BoundaryGenConfig:
    t_f: float = 0.30
    t_b: float = 0.07
    window: int = 13
    rho: float = 0.3
    tau: float = 0.5


def generate_boundary_labels(manifest, spec, params, out_dir, config=None):
    """Write one boundary-label PNG per train sample, named by sample id.

    Deterministic: re-running with identical inputs overwrites each file
    with identical bytes. Returns the list of written paths.
    """
    config = config or BoundaryGenConfig()
    model = BoundaryLabelClassifier(spec)
    try:
        model.load_state_dict(params)
    except RuntimeError as exc:
        raise ValidationError(f"classifier weights do not match spec: {exc}") from exc
    model.eval()

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for record in manifest.train:
        image = load_image(record.image)
        with torch.no_grad():
            maps = model(image_to_tensor(image, spec.input_size))[0].numpy()
        if record.tags:
            # min-max normalization is only meaningful for classes present in
            # the image; absent-class maps would be amplified into noise
            maps = maps[list(record.tags)]
        probs = cam_probabilities(maps, out_size=image.shape[:2])
        trimap = trimap_from_cam(probs, t_f=config.t_f, t_b=config.t_b)
        labels = boundary_from_trimap(trimap, window=config.window,
                                      rho=config.rho, tau=config.tau)
        path = os.path.join(out_dir, f"{record.id}.png")
        try:
            save_boundary_labels(path, labels)
        except OSError as exc:
            raise ScribsalError(f"failed to write boundary labels to {path}: {exc}") from exc
        written.append(path)
    return written
