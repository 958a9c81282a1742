"""VGG-style encoder emitting a five-level feature pyramid.

Lateral outputs are taken after the last convolution of each block, before
pooling, so a 352 input yields maps at 352/176/88/44/22 (strides 1, 2, 4,
8, 16). Plain conv + ReLU blocks, no normalization, matching the stock
16-layer design.
"""

import torch.nn as nn


class PyramidEncoder(nn.Module):
    def __init__(self, widths=(64, 128, 256, 512, 512), convs=(2, 2, 3, 3, 3)):
        super().__init__()
        blocks = []
        in_ch = 3
        for width, n in zip(widths, convs):
            layers = []
            for _ in range(n):
                layers += [nn.Conv2d(in_ch, width, 3, padding=1), nn.ReLU(inplace=True)]
                in_ch = width
            blocks.append(nn.Sequential(*layers))
        self.blocks = nn.ModuleList(blocks)
        self.pool = nn.MaxPool2d(2, stride=2)
        self.widths = tuple(widths)
        # plain (norm-free) deep stacks need relu-gain init to train from scratch
        for m in self.modules():
            if isinstance(m, nn.Conv2d):
                nn.init.kaiming_normal_(m.weight, mode="fan_out", nonlinearity="relu")
                nn.init.zeros_(m.bias)

    def forward(self, x):
        h, w = x.shape[-2:]
        if h % 16 or w % 16:
            raise ValueError(f"encoder input size must be divisible by 16, got {h}x{w}")
        feats = []
        for i, block in enumerate(self.blocks):
            if i > 0:
                x = self.pool(x)
            x = block(x)
            feats.append(x)
        return tuple(feats)
