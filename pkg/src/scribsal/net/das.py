"""Dense aggregation of the three deepest pyramid levels.

The stride-4/8/16 features are first projected to a common width, then
fused top-down with gated (elementwise product) and concatenation steps:

    f1 = Conv(up2(F5)) * F4
    f2 = Conv(Concat(f1, Conv(up2(F5))))
    f3 = Conv(up4(F5)) * Conv(up2(F4)) * F3
    Fs = Conv(Concat(f3, Conv(up2(f2))))

Every Conv is an independent 3x3 layer; Fs is a single-channel map at
stride 4.
"""

import torch
import torch.nn as nn
import torch.nn.functional as F


def up(x, factor):
    return F.interpolate(x, scale_factor=factor, mode="bilinear", align_corners=False)


class DenseAggregation(nn.Module):
    def __init__(self, in3, in4, in5, width=64):
        super().__init__()
        self.reduce3 = nn.Conv2d(in3, width, 1)
        self.reduce4 = nn.Conv2d(in4, width, 1)
        self.reduce5 = nn.Conv2d(in5, width, 1)
        self.gate54 = nn.Conv2d(width, width, 3, padding=1)    # line 1: Conv(up2(F5))
        self.inner5 = nn.Conv2d(width, width, 3, padding=1)    # line 2: Conv(up2(F5))
        self.fuse12 = nn.Conv2d(2 * width, width, 3, padding=1)
        self.gate53 = nn.Conv2d(width, width, 3, padding=1)    # line 3: Conv(up4(F5))
        self.gate43 = nn.Conv2d(width, width, 3, padding=1)    # line 3: Conv(up2(F4))
        self.inner2 = nn.Conv2d(width, width, 3, padding=1)    # line 4: Conv(up2(f2))
        self.out = nn.Conv2d(2 * width, 1, 3, padding=1)

    def forward(self, f3, f4, f5):
        r3 = self.reduce3(f3)
        r4 = self.reduce4(f4)
        r5 = self.reduce5(f5)
        f1 = self.gate54(up(r5, 2)) * r4
        f2 = self.fuse12(torch.cat([f1, self.inner5(up(r5, 2))], dim=1))
        f3g = self.gate53(up(r5, 4)) * self.gate43(up(r4, 2)) * r3
        return self.out(torch.cat([f3g, self.inner2(up(f2, 2))], dim=1))
