"""Parameter checkpoints: a single npz archive of named arrays.

Layout: one ``param/<module.path>`` entry per state-dict tensor plus a
``__meta__`` JSON blob carrying the format version, the training config
and the run state. Saving is byte-deterministic, so identical inputs give
identical files. Loading refuses key mismatches unless ``partial=True``
(the escape hatch for encoder-only pretrained weights).
"""

import io
import json

import numpy as np
import torch

from ..errors import CheckpointError

FORMAT_VERSION = 1
_PREFIX = "param/"


def save_checkpoint(path, state_dict, config=None, run_state=None):
    arrays = {}
    for key, tensor in state_dict.items():
        arrays[_PREFIX + key] = tensor.detach().cpu().numpy()
    meta = {"format_version": FORMAT_VERSION, "config": config or {},
            "run_state": run_state or {}}
    arrays["__meta__"] = np.frombuffer(
        json.dumps(meta, sort_keys=True).encode(), dtype=np.uint8)
    buf = io.BytesIO()
    np.savez(buf, **arrays)
    with open(path, "wb") as fh:
        fh.write(buf.getvalue())


def load_checkpoint(path):
    """Returns (state_dict, config dict, run_state dict)."""
    try:
        archive = np.load(path)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if "__meta__" not in archive:
        raise CheckpointError(f"{path} is not a checkpoint (missing metadata)")
    meta = json.loads(bytes(archive["__meta__"]).decode())
    if meta.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint format version {meta.get('format_version')}")
    state = {}
    for key in archive.files:
        if key.startswith(_PREFIX):
            state[key[len(_PREFIX):]] = torch.from_numpy(archive[key].copy())
    return state, meta.get("config", {}), meta.get("run_state", {})


def load_into_model(model, path, partial=False):
    """Load checkpoint weights into a model, checking key sets.

    Unknown or missing keys fail loudly unless ``partial`` is set, in which
    case only the intersection is loaded (shape mismatches still fail).
    Returns (config, run_state).
    """
    state, config, run_state = load_checkpoint(path)
    model_keys = set(model.state_dict().keys())
    ckpt_keys = set(state.keys())
    if not partial and model_keys != ckpt_keys:
        unknown = sorted(ckpt_keys - model_keys)
        missing = sorted(model_keys - ckpt_keys)
        raise CheckpointError(
            f"checkpoint/model key mismatch (use partial=True to allow): "
            f"unknown={unknown[:5]} missing={missing[:5]}")
    usable = {k: v for k, v in state.items() if k in model_keys}
    result = model.load_state_dict(usable, strict=not partial)
    if not partial and (result.missing_keys or result.unexpected_keys):
        raise CheckpointError("checkpoint does not fully match the model")
    return config, run_state
