"""Edge-feature refinement units for the low-level lateral features.

The joint unit gates a conv-ReLU-BN feature with channel and spatial
attention and sums both gated branches. The channel-only and plain
variants exist for the ablation lattice.
"""

import torch
import torch.nn as nn


class ConvReluBN(nn.Module):
    """Conv -> ReLU -> BN block (kernel may be asymmetric)."""

    def __init__(self, in_ch, out_ch, kernel=3):
        super().__init__()
        if isinstance(kernel, int):
            kernel = (kernel, kernel)
        pad = (kernel[0] // 2, kernel[1] // 2)
        self.conv = nn.Conv2d(in_ch, out_ch, kernel, padding=pad)
        self.relu = nn.ReLU(inplace=True)
        self.bn = nn.BatchNorm2d(out_ch)

    def forward(self, x):
        return self.bn(self.relu(self.conv(x)))


class ChannelAttention(nn.Module):
    def __init__(self, channels, reduction=16):
        super().__init__()
        hidden = max(channels // reduction, 1)
        self.mlp = nn.Sequential(
            nn.Conv2d(channels, hidden, 1, bias=False),
            nn.ReLU(inplace=True),
            nn.Conv2d(hidden, channels, 1, bias=False))

    def forward(self, x):
        avg = self.mlp(x.mean(dim=(2, 3), keepdim=True))
        mx = self.mlp(x.amax(dim=(2, 3), keepdim=True))
        return torch.sigmoid(avg + mx)


class SpatialAttention(nn.Module):
    def __init__(self, kernel=7):
        super().__init__()
        self.conv = nn.Conv2d(2, 1, kernel, padding=kernel // 2, bias=False)

    def forward(self, x):
        mx = x.amax(dim=1, keepdim=True)
        mean = x.mean(dim=1, keepdim=True)
        return torch.sigmoid(self.conv(torch.cat([mx, mean], dim=1)))


class JointAttentionUnit(nn.Module):
    def __init__(self, in_ch, out_ch=64, reduction=16):
        super().__init__()
        self.crb = ConvReluBN(in_ch, out_ch)
        self.cab = ChannelAttention(out_ch, reduction)
        self.sab = SpatialAttention()

    def forward(self, x):
        f = self.crb(x)
        return self.cab(f) * f + self.sab(f) * f


class ChannelOnlyUnit(nn.Module):
    """Ablation: channel attention without the spatial branch."""

    def __init__(self, in_ch, out_ch=64, reduction=16):
        super().__init__()
        self.crb = ConvReluBN(in_ch, out_ch)
        self.cab = ChannelAttention(out_ch, reduction)

    def forward(self, x):
        f = self.crb(x)
        return self.cab(f) * f


class PlainUnit(nn.Module):
    """Ablation: plain feature projection, no attention."""

    def __init__(self, in_ch, out_ch=64):
        super().__init__()
        self.crb = ConvReluBN(in_ch, out_ch)

    def forward(self, x):
        return self.crb(x)


def build_edge_unit(mode, in_ch, out_ch):
    if mode == "jau":
        return JointAttentionUnit(in_ch, out_ch)
    if mode == "ca":
        return ChannelOnlyUnit(in_ch, out_ch)
    if mode == "sc":
        return PlainUnit(in_ch, out_ch)
    raise ValueError(f"unknown edge unit mode '{mode}'")
