"""Training configuration: defaults, JSON round-trip, auditable hashing."""

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass

from ..data.augment import AugmentConfig
from ..errors import ParameterError, ValidationError
from ..net.canny import CannyConfig
from ..net.model import NetworkConfig


@dataclass
class TrainConfig:
    input_size: int = 352
    learning_rate: float = 1e-4
    batch_size: int = 4
    epochs: int = 80
    seed: int = 0
    checkpoint_every: int = 10  # epochs between checkpoints
    deterministic: bool = False
    # augmentation
    augment_rotate: bool = True
    augment_flip: bool = True
    augment_crop: bool = True
    crop_scale: tuple = (0.75, 1.0)
    # ablation switches
    das: bool = True
    jau_mode: str = "jau"  # jau | ca | sc | off
    eau: bool = True
    # loss settings
    structure_alpha: float = 10.0
    structure_gate: str = "none"
    boundary_weight: float = 1.0
    # optional extras, off by default
    weight_decay: float = 0.0
    grad_clip: float = 0.0
    # canny defaults for the edge-auxiliary channel
    canny_sigma: float = 1.4
    canny_low: float = 0.1
    canny_high: float = 0.2

    def validate(self):
        if self.input_size < 16 or self.input_size % 16:
            raise ParameterError(f"input_size must be a positive multiple of 16, "
                                 f"got {self.input_size}")
        if self.learning_rate < 0 or self.batch_size < 1 or self.epochs < 0:
            raise ParameterError("learning rate, batch size and epochs must be non-negative")
        if self.jau_mode not in ("jau", "ca", "sc", "off"):
            raise ParameterError(f"unknown jau_mode '{self.jau_mode}'")
        if self.eau and self.jau_mode == "off":
            raise ParameterError("eau requires jau_mode != off")
        return self

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["crop_scale"] = list(self.crop_scale)
        return d

    def augment_config(self):
        return AugmentConfig(size=self.input_size, rotate=self.augment_rotate,
                             flip=self.augment_flip, crop=self.augment_crop,
                             crop_scale=tuple(self.crop_scale))

    def network_config(self):
        return NetworkConfig(
            das=self.das, edge_mode=self.jau_mode, eau=self.eau,
            canny=CannyConfig(self.canny_sigma, self.canny_low, self.canny_high))


def config_from_dict(values, base=None):
    cfg = base or TrainConfig()
    known = {f.name for f in dataclasses.fields(TrainConfig)}
    unknown = set(values) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    merged = dataclasses.replace(cfg, **values)
    if "crop_scale" in values:
        merged.crop_scale = tuple(values["crop_scale"])
    return merged.validate()


def load_config(path, base=None):
    if not os.path.isfile(path):
        raise ValidationError(f"config file not found: {path}")
    with open(path) as fh:
        try:
            values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(values, base)


def save_config(cfg, path):
    with open(path, "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def config_hash(cfg):
    """Stable short hash of a config for ablation auditing."""
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]
