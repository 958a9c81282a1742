"""Image-level classifier producing class localization maps.

A residual backbone with the striding of its last two stages replaced by
dilation (output stride 8, i.e. 44 x 44 maps for a 352 input) feeds a 1x1
convolution head with one output map per category. Training pools the maps
into scores with attention pooling; at inference the pooling is dropped and
the raw maps are the CAMs.
"""

import math
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn

from ..data.augment import resize_image
from ..data.rasters import load_image
from ..errors import ParameterError, ValidationError
from .attention import attention_pool

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


@dataclass
class BLGClassifierSpec:
    num_categories: int
    backbone: str = "resnet50"  # resnet50 | resnet18 | tiny
    input_size: int = 352


@dataclass
class BLGTrainConfig:
    epochs: int = 20
    steps: int = 0          # optional hard cap on optimizer steps (0 = no cap)
    batch_size: int = 4
    learning_rate: float = 1e-4
    seed: int = 0


class BasicBlock(nn.Module):
    expansion = 1

    def __init__(self, inplanes, planes, stride=1, dilation=1, downsample=None):
        super().__init__()
        self.conv1 = nn.Conv2d(inplanes, planes, 3, stride=stride, padding=dilation,
                               dilation=dilation, bias=False)
        self.bn1 = nn.BatchNorm2d(planes)
        self.conv2 = nn.Conv2d(planes, planes, 3, padding=dilation, dilation=dilation,
                               bias=False)
        self.bn2 = nn.BatchNorm2d(planes)
        self.relu = nn.ReLU(inplace=True)
        self.downsample = downsample

    def forward(self, x):
        identity = x
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        if self.downsample is not None:
            identity = self.downsample(x)
        return self.relu(out + identity)


class Bottleneck(nn.Module):
    expansion = 4

    def __init__(self, inplanes, planes, stride=1, dilation=1, downsample=None):
        super().__init__()
        self.conv1 = nn.Conv2d(inplanes, planes, 1, bias=False)
        self.bn1 = nn.BatchNorm2d(planes)
        self.conv2 = nn.Conv2d(planes, planes, 3, stride=stride, padding=dilation,
                               dilation=dilation, bias=False)
        self.bn2 = nn.BatchNorm2d(planes)
        self.conv3 = nn.Conv2d(planes, planes * self.expansion, 1, bias=False)
        self.bn3 = nn.BatchNorm2d(planes * self.expansion)
        self.relu = nn.ReLU(inplace=True)
        self.downsample = downsample

    def forward(self, x):
        identity = x
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.relu(self.bn2(self.conv2(out)))
        out = self.bn3(self.conv3(out))
        if self.downsample is not None:
            identity = self.downsample(x)
        return self.relu(out + identity)


class DilatedResNet(nn.Module):
    """ResNet trunk ending at output stride 8 (stages 3 and 4 dilated)."""

    def __init__(self, block, layers, width=64):
        super().__init__()
        self.inplanes = width
        self.conv1 = nn.Conv2d(3, width, 7, stride=2, padding=3, bias=False)
        self.bn1 = nn.BatchNorm2d(width)
        self.relu = nn.ReLU(inplace=True)
        self.maxpool = nn.MaxPool2d(3, stride=2, padding=1)
        self.layer1 = self._stage(block, width, layers[0], stride=1, dilation=1)
        self.layer2 = self._stage(block, width * 2, layers[1], stride=2, dilation=1)
        self.layer3 = self._stage(block, width * 4, layers[2], stride=1, dilation=2)
        self.layer4 = self._stage(block, width * 8, layers[3], stride=1, dilation=4)
        self.out_channels = width * 8 * block.expansion
        for m in self.modules():
            if isinstance(m, nn.Conv2d):
                nn.init.kaiming_normal_(m.weight, mode="fan_out", nonlinearity="relu")

    def _stage(self, block, planes, blocks, stride, dilation):
        downsample = None
        if stride != 1 or self.inplanes != planes * block.expansion:
            downsample = nn.Sequential(
                nn.Conv2d(self.inplanes, planes * block.expansion, 1, stride=stride,
                          bias=False),
                nn.BatchNorm2d(planes * block.expansion))
        layers = [block(self.inplanes, planes, stride, dilation, downsample)]
        self.inplanes = planes * block.expansion
        for _ in range(1, blocks):
            layers.append(block(self.inplanes, planes, dilation=dilation))
        return nn.Sequential(*layers)

    def forward(self, x):
        x = self.maxpool(self.relu(self.bn1(self.conv1(x))))
        x = self.layer1(x)
        x = self.layer2(x)
        x = self.layer3(x)
        return self.layer4(x)


class TinyBackbone(nn.Module):
    """Small stride-8 trunk for fast tests and desk-scale runs."""

    def __init__(self, width=32):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, width, 3, stride=2, padding=1), nn.BatchNorm2d(width),
            nn.ReLU(inplace=True),
            nn.Conv2d(width, width, 3, stride=2, padding=1), nn.BatchNorm2d(width),
            nn.ReLU(inplace=True),
            nn.Conv2d(width, width * 2, 3, stride=2, padding=1), nn.BatchNorm2d(width * 2),
            nn.ReLU(inplace=True),
            nn.Conv2d(width * 2, width * 2, 3, padding=1), nn.BatchNorm2d(width * 2),
            nn.ReLU(inplace=True))
        self.out_channels = width * 2

    def forward(self, x):
        return self.features(x)


def build_backbone(name):
    if name == "resnet50":
        return DilatedResNet(Bottleneck, [3, 4, 6, 3])
    if name == "resnet18":
        return DilatedResNet(BasicBlock, [2, 2, 2, 2])
    if name == "tiny":
        return TinyBackbone()
    raise ParameterError(f"unknown classifier backbone '{name}'")


class BoundaryLabelClassifier(nn.Module):
    def __init__(self, spec):
        super().__init__()
        if spec.num_categories < 1:
            raise ParameterError("classifier needs at least one category")
        self.spec = spec
        self.backbone = build_backbone(spec.backbone)
        self.head = nn.Conv2d(self.backbone.out_channels, spec.num_categories, 1)
        mean = torch.tensor(IMAGENET_MEAN).view(1, 3, 1, 1)
        std = torch.tensor(IMAGENET_STD).view(1, 3, 1, 1)
        self.register_buffer("mean", mean)
        self.register_buffer("std", std)

    def forward(self, image01):
        """image01: (B, 3, H, W) in [0, 1]. Returns class maps (B, C, h, w)."""
        x = (image01 - self.mean) / self.std
        return self.head(self.backbone(x))


def classifier_forward(image, spec, params):
    """Run one image through the classifier; returns (C, h, w) float32 maps.

    image: H x W x 3 array in [0, 1]; params: a state dict for the spec.
    """
    model = BoundaryLabelClassifier(spec)
    try:
        model.load_state_dict(params)
    except RuntimeError as exc:
        raise ValidationError(f"classifier weights do not match spec: {exc}") from exc
    model.eval()
    x = image_to_tensor(image, spec.input_size)
    with torch.no_grad():
        maps = model(x)
    return maps[0].numpy()


def image_to_tensor(image, size):
    arr = resize_image(np.asarray(image, dtype=np.float32), size)
    return torch.from_numpy(np.ascontiguousarray(arr.transpose(2, 0, 1))).unsqueeze(0)


def train_classifier(manifest, spec, config=None):
    """Fit the classifier on image-level tags with multi-label cross-entropy.

    Attention pooling reduces the class maps to scores during training;
    returns the trained state dict.
    """
    config = config or BLGTrainConfig()
    records = manifest.train
    untagged = [r.id for r in records if not r.tags]
    if untagged:
        raise ValidationError(f"train samples without category tags: {untagged}")
    if spec.num_categories != len(manifest.categories):
        raise ValidationError(
            f"spec declares {spec.num_categories} categories, manifest has "
            f"{len(manifest.categories)}")

    torch.manual_seed(config.seed)
    model = BoundaryLabelClassifier(spec)
    model.train()
    opt = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    bce = nn.BCEWithLogitsLoss()

    images = [image_to_tensor(load_image(r.image), spec.input_size) for r in records]
    targets = []
    for r in records:
        t = torch.zeros(spec.num_categories)
        t[list(r.tags)] = 1.0
        targets.append(t)

    rng = np.random.default_rng(config.seed)
    step = 0
    steps_per_epoch = max(1, math.ceil(len(records) / config.batch_size))
    total_epochs = config.epochs if not config.steps else math.ceil(
        config.steps / steps_per_epoch)
    for epoch in range(total_epochs):
        order = rng.permutation(len(records))
        for start in range(0, len(records), config.batch_size):
            if config.steps and step >= config.steps:
                return model.state_dict()
            idx = order[start:start + config.batch_size]
            x = torch.cat([images[i] for i in idx], dim=0)
            y = torch.stack([targets[i] for i in idx], dim=0)
            scores, _ = attention_pool(model(x))
            loss = bce(scores, y)
            if not torch.isfinite(loss):
                raise RuntimeError(
                    f"classifier loss diverged (NaN/inf) at step {step}, epoch {epoch}")
            opt.zero_grad()
            loss.backward()
            opt.step()
            step += 1
    return model.state_dict()
