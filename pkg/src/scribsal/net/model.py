"""The full boundary-aware saliency network and its ablation variants.

Composition: pyramid encoder -> (boundary branch over F1/F2 + image,
dense aggregation over F3/F4/F5) -> boundary-guided decoder. The boundary
branch concatenates the refined low-level edge features (and optionally
the edge-auxiliary features) and squashes them through a conv + sigmoid
into a single-channel boundary map at input resolution.

Ablation switches mirror the experiment lattice: ``das`` toggles the
aggregation head, ``edge_mode`` selects how F1/F2 are refined
(jau / ca / sc / off), ``eau`` toggles the edge-auxiliary unit.
"""

from dataclasses import dataclass, field, replace

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import ParameterError
from .attention_units import build_edge_unit
from .canny import CannyConfig
from .das import DenseAggregation
from .decoder import BoundaryGuidedDecoder
from .encoder import PyramidEncoder

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


@dataclass
class NetworkConfig:
    das: bool = True
    edge_mode: str = "jau"  # jau | ca | sc | off
    eau: bool = True
    encoder_widths: tuple = (64, 128, 256, 512, 512)
    encoder_convs: tuple = (2, 2, 3, 3, 3)
    edge_width: int = 64
    eau_branch_width: int = 16
    eau_width: int = 32
    das_width: int = 64
    decoder_widths: tuple = (256, 128, 64, 32)
    canny: CannyConfig = field(default_factory=CannyConfig)
    normalize_mean: tuple = IMAGENET_MEAN
    normalize_std: tuple = IMAGENET_STD

    def validate(self):
        if self.edge_mode not in ("jau", "ca", "sc", "off"):
            raise ParameterError(f"unknown edge_mode '{self.edge_mode}'")
        if self.eau and self.edge_mode == "off":
            raise ParameterError("eau requires an active boundary branch (edge_mode != off)")
        if len(self.encoder_widths) != 5 or len(self.encoder_convs) != 5:
            raise ParameterError("encoder needs exactly five stages")
        if len(self.decoder_widths) != 4:
            raise ParameterError("decoder needs exactly four stages")
        if not (self.das or self.edge_mode != "off"):
            # plain encoder-decoder baseline is legal; nothing else to check
            pass
        return self


def toy_network_config():
    """A <10k-parameter variant for finite-difference gradient checks."""
    return NetworkConfig(
        encoder_widths=(4, 6, 8, 10, 12),
        encoder_convs=(1, 1, 1, 1, 1),
        edge_width=4,
        eau_branch_width=2,
        eau_width=3,
        das_width=4,
        decoder_widths=(6, 5, 4, 3),
    )


class BoundaryAwareModule(nn.Module):
    """Boundary branch: refined F1/F2 (+ optional edge-aux features) -> F_b."""

    def __init__(self, cfg):
        super().__init__()
        self.unit1 = build_edge_unit(cfg.edge_mode, cfg.encoder_widths[0], cfg.edge_width)
        self.unit2 = build_edge_unit(cfg.edge_mode, cfg.encoder_widths[1], cfg.edge_width)
        self.eau = None
        in_ch = 2 * cfg.edge_width
        if cfg.eau:
            from .eau import EdgeAuxiliaryUnit
            self.eau = EdgeAuxiliaryUnit(cfg.eau_branch_width, cfg.eau_width, cfg.canny)
            in_ch += cfg.eau_width
        self.fuse = nn.Conv2d(in_ch, 1, 3, padding=1)

    def forward(self, f1, f2, image01, edge_map=None):
        e1 = self.unit1(f1)
        e2 = F.interpolate(self.unit2(f2), scale_factor=2, mode="bilinear",
                           align_corners=False)
        parts = [e1, e2]
        if self.eau is not None:
            parts.append(self.eau(image01, edge_map=edge_map))
        return torch.sigmoid(self.fuse(torch.cat(parts, dim=1)))


class BoundaryAwareSaliencyNet(nn.Module):
    def __init__(self, cfg=None):
        super().__init__()
        self.cfg = (cfg or NetworkConfig()).validate()
        self.encoder = PyramidEncoder(self.cfg.encoder_widths, self.cfg.encoder_convs)
        self.bam = BoundaryAwareModule(self.cfg) if self.cfg.edge_mode != "off" else None
        self.das = None
        if self.cfg.das:
            w = self.cfg.encoder_widths
            self.das = DenseAggregation(w[2], w[3], w[4], self.cfg.das_width)
        guidance = (1 if self.das is not None else 0) + (1 if self.bam is not None else 0)
        self.decoder = BoundaryGuidedDecoder(self.cfg.encoder_widths,
                                             self.cfg.decoder_widths, guidance)
        mean = torch.tensor(self.cfg.normalize_mean).view(1, 3, 1, 1)
        std = torch.tensor(self.cfg.normalize_std).view(1, 3, 1, 1)
        self.register_buffer("mean", mean)
        self.register_buffer("std", std)

    def forward(self, image01, edge_map=None):
        """image01: (B, 3, H, W) in [0, 1]. Returns (saliency, boundary | None)."""
        pyramid = self.encoder((image01 - self.mean) / self.std)
        boundary = None
        if self.bam is not None:
            boundary = self.bam(pyramid[0], pyramid[1], image01, edge_map=edge_map)
        initial = None
        if self.das is not None:
            initial = self.das(pyramid[2], pyramid[3], pyramid[4])
        saliency = self.decoder(pyramid, initial=initial, boundary=boundary)
        return saliency, boundary


def saliency_forward(image, params=None, cfg=None, edge_map=None):
    """Functional single-image forward: H x W x 3 [0, 1] array in,
    (saliency, boundary) float32 arrays out."""
    import numpy as np

    model = BoundaryAwareSaliencyNet(cfg)
    if params is not None:
        model.load_state_dict(params)
    model.eval()
    x = torch.from_numpy(np.ascontiguousarray(
        np.asarray(image, dtype=np.float32).transpose(2, 0, 1))).unsqueeze(0)
    with torch.no_grad():
        sal, bdry = model(x, edge_map=edge_map)
    return sal[0, 0].numpy(), (None if bdry is None else bdry[0, 0].numpy())


def count_parameters(module):
    return sum(p.numel() for p in module.parameters() if p.requires_grad)


def ablation_config(base=None, *, das, edge_mode, eau):
    """One row of the ablation lattice as a NetworkConfig."""
    base = base or NetworkConfig()
    return replace(base, das=das, edge_mode=edge_mode, eau=eau).validate()


ABLATION_LATTICE = (
    {"das": False, "edge_mode": "off", "eau": False},  # baseline
    {"das": True, "edge_mode": "off", "eau": False},   # + aggregation
    {"das": True, "edge_mode": "sc", "eau": False},    # + plain concat edges
    {"das": True, "edge_mode": "ca", "eau": False},    # + channel attention
    {"das": True, "edge_mode": "jau", "eau": False},   # + joint attention
    {"das": True, "edge_mode": "jau", "eau": True},    # full model
)
