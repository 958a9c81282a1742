"""U-Net-style decoder guided by the initial saliency and boundary maps.

Each stage doubles the resolution, concatenates the matching encoder skip
plus the guidance maps resized to the stage resolution, and applies one
conv block. Four stages take the bottleneck (stride 16) back to full
resolution; a final conv + sigmoid emits the saliency map.
"""

import torch
import torch.nn as nn
import torch.nn.functional as F

from .attention_units import ConvReluBN


def resize_to(x, ref):
    if x.shape[-2:] == ref.shape[-2:]:
        return x
    return F.interpolate(x, size=ref.shape[-2:], mode="bilinear", align_corners=False)


class BoundaryGuidedDecoder(nn.Module):
    def __init__(self, skip_channels=(64, 128, 256, 512, 512),
                 widths=(256, 128, 64, 32), guidance=2):
        super().__init__()
        self.guidance = guidance
        in_ch = skip_channels[-1]
        stages = []
        for skip_ch, width in zip(reversed(skip_channels[:-1]), widths):
            stages.append(ConvReluBN(in_ch + skip_ch + guidance, width))
            in_ch = width
        self.stages = nn.ModuleList(stages)
        self.head = nn.Conv2d(widths[-1], 1, 3, padding=1)

    def forward(self, pyramid, initial=None, boundary=None):
        guides = [g for g in (initial, boundary) if g is not None]
        if len(guides) != self.guidance:
            raise ValueError(
                f"decoder built for {self.guidance} guidance map(s), got {len(guides)}")
        x = pyramid[-1]
        for stage, skip in zip(self.stages, reversed(pyramid[:-1])):
            x = F.interpolate(x, scale_factor=2, mode="bilinear", align_corners=False)
            parts = [x, skip] + [resize_to(g, skip) for g in guides]
            x = stage(torch.cat(parts, dim=1))
        return torch.sigmoid(self.head(x))
