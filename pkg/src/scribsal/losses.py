"""Training objectives: boundary, gated structure-aware, partial cross-entropy.

All three are differentiable torch expressions (the optimizer consumes
their autograd gradients) and preserve the input dtype, so float64 inputs
give float64-accurate values for the finite-difference checks. Batched
inputs return the mean of the per-image losses; 2-D inputs return the
per-map value directly.

Conventions fixed here:
  - probabilities are clamped to [1e-7, 1 - 1e-7] before any log;
  - a boundary/non-boundary set that is empty contributes 0, not NaN;
  - spatial derivatives are forward differences with replicate padding,
    so the last row/column difference is exactly 0;
  - the structure loss smooths |dS| through psi(t) = sqrt(t^2 + 1e-6),
    giving a floor of 2*H*W*1e-3 at constant saliency.
"""

import warnings
from dataclasses import dataclass

import torch
import torch.nn.functional as F

from .data.rasters import BACKGROUND, BOUNDARY, FOREGROUND, NON_BOUNDARY_BG, NON_BOUNDARY_FG

CLAMP_EPS = 1e-7
PSI_EPS = 1e-6


@dataclass
class BoundaryLossConfig:
    # per-pixel weight on the boundary term; None means W == 1 everywhere
    weight: object = None


@dataclass
class GatedStructureLossConfig:
    alpha: float = 10.0
    gate: str = "none"  # "none" (G == 1) or "saliency"
    gate_threshold: float = 0.5
    gate_dilation: int = 5


def boundary_loss(pred, labels, cfg=None):
    """Relaxed boundary classification loss.

    pred: boundary probabilities in (0, 1); labels: codes
    {non-boundary bg/fg, boundary, ignore}. Ignore pixels drop out of both
    terms; each term averages over its own pixel set.
    """
    cfg = cfg or BoundaryLossConfig()
    pred, labels = _as_batch(pred), _as_batch(labels)
    _check_same_size(pred, labels)
    p = pred.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS)
    bry = labels == BOUNDARY
    fb = (labels == NON_BOUNDARY_BG) | (labels == NON_BOUNDARY_FG)
    w = cfg.weight
    if w is None:
        w = torch.ones_like(p)
    else:
        w = torch.as_tensor(w, dtype=p.dtype, device=p.device).expand_as(p)

    total = pred.new_zeros(())
    for b in range(p.shape[0]):
        n_bry = bry[b].sum()
        n_fb = fb[b].sum()
        term1 = (-(w[b] * p[b].log())[bry[b]].sum() / n_bry) if n_bry > 0 else p.new_zeros(())
        term2 = (-0.5 * (1.0 - p[b]).log()[fb[b]].sum() / n_fb) if n_fb > 0 else p.new_zeros(())
        total = total + term1 + term2
    return total / p.shape[0]


def gated_structure_loss(sal, image, cfg=None, initial_saliency=None):
    """Edge-modulated smoothness penalty on the saliency map.

    Sums psi(|dS| * exp(-alpha * |d(G * I)|)) over both axes and all
    pixels, where I is the channel-mean intensity of the image and G is
    either 1 or a dilated, thresholded (detached) initial saliency map.
    """
    cfg = cfg or GatedStructureLossConfig()
    sal = _as_batch(sal)
    intensity = _as_intensity(image, like=sal)
    _check_same_size(sal, intensity)
    gate = _gate_map(cfg, sal, initial_saliency)
    gated = gate * intensity

    loss = sal.new_zeros(())
    for axis in (1, 2):  # rows, cols of (B, H, W)
        ds = _forward_diff(sal, axis)
        di = _forward_diff(gated, axis)
        term = _psi(ds.abs() * torch.exp(-cfg.alpha * di.abs()))
        loss = loss + term.sum(dim=(1, 2)).mean()
    return loss


def partial_cross_entropy(sal, scribble):
    """Cross-entropy restricted to scribble-labeled pixels (sum, not mean)."""
    sal, scribble = _as_batch(sal), _as_batch(scribble)
    _check_same_size(sal, scribble)
    s = sal.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS)
    fg = scribble == FOREGROUND
    bg = scribble == BACKGROUND
    if not (fg.any() or bg.any()):
        warnings.warn("partial_cross_entropy: scribble mask has no labeled pixels")
        return sal.new_zeros(())
    per_pixel = -(fg.to(s.dtype) * s.log() + bg.to(s.dtype) * (1.0 - s).log())
    return per_pixel.sum(dim=(1, 2)).mean()


def total_loss(boundary_pred, sal, boundary_labels, scribble, image,
               boundary_cfg=None, structure_cfg=None, initial_saliency=None):
    """Sum of the three objectives with unit weights; returns (total, breakdown)."""
    l_gs = gated_structure_loss(sal, image, structure_cfg, initial_saliency)
    l_pce = partial_cross_entropy(sal, scribble)
    if boundary_pred is not None and boundary_labels is not None:
        l_b = boundary_loss(boundary_pred, boundary_labels, boundary_cfg)
    else:
        l_b = sal.new_zeros(()) if torch.is_tensor(sal) else torch.zeros(())
    total = l_b + l_gs + l_pce
    return total, {"boundary": l_b, "structure": l_gs, "partial_ce": l_pce,
                   "total": total}


def _psi(t):
    return torch.sqrt(t * t + PSI_EPS)


def _forward_diff(x, axis):
    """x[i+1] - x[i] along axis with replicate padding (last difference 0)."""
    if axis == 1:
        padded = torch.cat([x, x[:, -1:, :]], dim=1)
        return padded[:, 1:, :] - x
    padded = torch.cat([x, x[:, :, -1:]], dim=2)
    return padded[:, :, 1:] - x


def _gate_map(cfg, sal, initial_saliency):
    if cfg.gate == "none":
        return sal.new_ones(())
    if cfg.gate != "saliency":
        raise ValueError(f"unknown structure-loss gate '{cfg.gate}'")
    if initial_saliency is None:
        raise ValueError("gate='saliency' needs the initial saliency map")
    init = _as_batch(initial_saliency).detach()
    if init.shape[-2:] != sal.shape[-2:]:
        init = F.interpolate(init.unsqueeze(1), size=sal.shape[-2:], mode="bilinear",
                             align_corners=False).squeeze(1)
    hard = (torch.sigmoid(init) > cfg.gate_threshold).to(sal.dtype)
    k = 2 * cfg.gate_dilation + 1
    return F.max_pool2d(hard.unsqueeze(1), k, stride=1, padding=cfg.gate_dilation).squeeze(1)


def _as_batch(x):
    """Canonicalize (H, W) / (B, H, W) / (B, 1, H, W) to (B, H, W)."""
    t = x if torch.is_tensor(x) else torch.as_tensor(x)
    if t.dim() == 2:
        return t.unsqueeze(0)
    if t.dim() == 4 and t.shape[1] == 1:
        return t[:, 0]
    if t.dim() == 3:
        return t
    raise ValueError(f"expected a 2-4 dim map, got shape {tuple(t.shape)}")


def _as_intensity(image, like):
    """Channel-mean intensity as (B, H, W), matching the saliency dtype."""
    t = image if torch.is_tensor(image) else torch.as_tensor(image)
    if t.dim() == 3 and t.shape[-1] == 3:       # H x W x 3 array layout
        t = t.mean(dim=-1).unsqueeze(0)
    elif t.dim() == 4:                           # B x 3 x H x W
        t = t.mean(dim=1)
    elif t.dim() == 2:
        t = t.unsqueeze(0)
    # dim == 3 without trailing channel: already (B, H, W) intensity
    return t.to(dtype=like.dtype, device=like.device)


def _check_same_size(a, b):
    if a.shape[-2:] != b.shape[-2:] or a.shape[0] != b.shape[0]:
        raise ValueError(f"size mismatch: {tuple(a.shape)} vs {tuple(b.shape)}")
