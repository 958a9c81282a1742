"""Edge auxiliary unit: directional convolutions plus a fixed edge channel.

Vertical and horizontal edge features come from 7x1 / 1x7 convolutional
blocks over the raw image; they are concatenated with a Canny edge map and
fused by a 1x1 convolution. The Canny channel is a constant with respect to
the parameters; callers that already have it (e.g. the training loader)
can pass it in to skip recomputation.
"""

import numpy as np
import torch
import torch.nn as nn

from .attention_units import ConvReluBN
from .canny import CannyConfig, canny_edges


class EdgeAuxiliaryUnit(nn.Module):
    def __init__(self, branch_width=16, out_width=32, canny=None):
        super().__init__()
        self.vertical = ConvReluBN(3, branch_width, kernel=(7, 1))
        self.horizontal = ConvReluBN(3, branch_width, kernel=(1, 7))
        self.fuse = nn.Conv2d(2 * branch_width + 1, out_width, 1)
        self.canny = canny or CannyConfig()
        self.out_width = out_width

    def forward(self, image01, edge_map=None):
        """image01: (B, 3, H, W) in [0, 1]; edge_map: optional (B, 1, H, W)."""
        if edge_map is None:
            edge_map = self.compute_edge_map(image01)
        v = self.vertical(image01)
        h = self.horizontal(image01)
        return self.fuse(torch.cat([v, h, edge_map.to(image01.dtype)], dim=1))

    def compute_edge_map(self, image01):
        maps = []
        arr = image01.detach().cpu().numpy()
        for b in range(arr.shape[0]):
            edges = canny_edges(np.moveaxis(arr[b], 0, -1), low=self.canny.low,
                                high=self.canny.high, sigma=self.canny.sigma)
            maps.append(edges)
        out = torch.from_numpy(np.stack(maps)[:, None].astype(np.float32))
        return out.to(device=image01.device, dtype=image01.dtype)
