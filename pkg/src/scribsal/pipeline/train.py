"""The saliency training loop: scribbles + boundary pseudo-labels -> weights.

Two-phase protocol: boundary labels must already exist on disk (produced
by blg-generate), or be generated on the fly from classifier weights. One
optimizer owns the parameters; data loading/augmentation happens inline so
a fixed seed gives an identical loss trace.
"""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np
import torch

from ..data.augment import augment_arrays
from ..data.rasters import load_boundary_labels, load_image, load_scribble_mask
from ..errors import ValidationError
from ..losses import BoundaryLossConfig, GatedStructureLossConfig, total_loss
from ..net.canny import canny_edges
from ..net.model import BoundaryAwareSaliencyNet
from .checkpoint import load_into_model, save_checkpoint
from .config import config_hash


@dataclass
class RunState:
    step: int = 0
    epoch: int = 0
    best_loss: float = math.inf
    loss_history: list = field(default_factory=list)  # epoch-mean totals

    def to_dict(self):
        return {"step": self.step, "epoch": self.epoch, "best_loss": self.best_loss,
                "loss_history": list(self.loss_history)}


def train(config, manifest, boundary_dir=None, out_dir=".", encoder_init=None,
          log_path=None, blg=None):
    """Train the saliency network; returns (checkpoint path, RunState).

    blg: optional (spec, params, gen config) triple enabling on-the-fly
    boundary-label generation when ``boundary_dir`` has no labels yet.
    """
    config = config.validate()
    os.makedirs(out_dir, exist_ok=True)
    records = manifest.train
    if not records:
        raise ValidationError("manifest has no train samples")

    needs_boundary = config.jau_mode != "off"
    if needs_boundary:
        if boundary_dir is None:
            raise ValidationError("boundary label directory required (or pass blg=... )")
        missing = [r.id for r in records
                   if not os.path.isfile(os.path.join(boundary_dir, f"{r.id}.png"))]
        if missing and blg is not None:
            from ..blg.generate import generate_boundary_labels
            spec, params, gen_cfg = blg
            generate_boundary_labels(manifest, spec, params, boundary_dir, gen_cfg)
            missing = [r.id for r in records
                       if not os.path.isfile(os.path.join(boundary_dir, f"{r.id}.png"))]
        if missing:
            raise ValidationError(f"missing boundary labels for samples: {missing}")

    if config.deterministic:
        torch.set_num_threads(1)
    torch.manual_seed(config.seed)
    model = BoundaryAwareSaliencyNet(config.network_config())
    if encoder_init:
        load_into_model(model, encoder_init, partial=True)
    model.train()
    opt = torch.optim.Adam(model.parameters(), lr=config.learning_rate,
                           weight_decay=config.weight_decay)

    samples = []
    for r in records:
        image = load_image(r.image)
        scribble = load_scribble_mask(r.scribble)
        boundary = None
        if needs_boundary:
            boundary = load_boundary_labels(os.path.join(boundary_dir, f"{r.id}.png"))
        samples.append((r.id, image, scribble, boundary))

    b_cfg = BoundaryLossConfig(weight=None if config.boundary_weight == 1.0
                               else config.boundary_weight)
    s_cfg = GatedStructureLossConfig(alpha=config.structure_alpha,
                                     gate=config.structure_gate)
    aug_cfg = config.augment_config()
    state = RunState()
    log = open(log_path, "w") if log_path else None
    rng = np.random.default_rng(config.seed)
    try:
        for epoch in range(config.epochs):
            order = rng.permutation(len(samples))
            epoch_losses = []
            for start in range(0, len(samples), config.batch_size):
                idx = order[start:start + config.batch_size]
                batch = _make_batch(samples, idx, config, aug_cfg, epoch)
                images, scribbles, boundaries, edges = batch
                sal, bdry = model(images, edge_map=edges)
                loss, parts = total_loss(
                    bdry, sal, boundaries, scribbles, images,
                    boundary_cfg=b_cfg, structure_cfg=s_cfg)
                if not torch.isfinite(loss):
                    raise RuntimeError(
                        f"training loss is not finite at step {state.step} "
                        f"(epoch {epoch}): " +
                        ", ".join(f"{k}={v.item():.4g}" for k, v in parts.items()))
                opt.zero_grad()
                loss.backward()
                if config.grad_clip > 0:
                    torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
                opt.step()
                state.step += 1
                epoch_losses.append(loss.item())
                if log:
                    log.write(json.dumps({
                        "step": state.step, "epoch": epoch,
                        "L_b": parts["boundary"].item(),
                        "L_gs": parts["structure"].item(),
                        "L_pce": parts["partial_ce"].item(),
                        "L_total": loss.item()}) + "\n")
            state.epoch = epoch + 1
            epoch_mean = float(np.mean(epoch_losses))
            state.loss_history.append(epoch_mean)
            state.best_loss = min(state.best_loss, epoch_mean)
            if config.checkpoint_every and (epoch + 1) % config.checkpoint_every == 0:
                _save(model, config, state, os.path.join(out_dir, f"ckpt_epoch{epoch + 1:04d}.npz"))
    finally:
        if log:
            log.close()

    final = os.path.join(out_dir, "model.npz")
    _save(model, config, state, final)
    return final, state


def _save(model, config, state, path):
    meta = config.to_dict()
    meta["config_hash"] = config_hash(config)
    save_checkpoint(path, model.state_dict(), config=meta, run_state=state.to_dict())


def _make_batch(samples, idx, config, aug_cfg, epoch):
    images, scribbles, boundaries, edges = [], [], [], []
    canny = config.network_config().canny
    use_eau = config.eau
    for i in idx:
        sid, image, scribble, boundary = samples[int(i)]
        masks = [scribble] + ([boundary] if boundary is not None else [])
        seed = (config.seed * 1_000_003 + epoch * 10_007 + int(i)) % (2 ** 32)
        aug_image, aug_masks = augment_arrays(image, masks, seed, aug_cfg)
        images.append(aug_image.transpose(2, 0, 1))
        scribbles.append(aug_masks[0])
        if boundary is not None:
            boundaries.append(aug_masks[1])
        if use_eau:
            edges.append(canny_edges(aug_image, low=canny.low, high=canny.high,
                                     sigma=canny.sigma))
    to = torch.from_numpy
    images_t = to(np.ascontiguousarray(np.stack(images), dtype=np.float32))
    scribbles_t = to(np.stack(scribbles).astype(np.int64))
    boundaries_t = to(np.stack(boundaries).astype(np.int64)) if boundaries else None
    edges_t = None
    if use_eau:
        edges_t = to(np.stack(edges)[:, None].astype(np.float32))
    return images_t, scribbles_t, boundaries_t, edges_t
