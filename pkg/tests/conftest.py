"""Shared fixtures: synthetic shape datasets with programmatic scribbles,
plus the end-of-run acceptance summary."""

import json
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make `oracles` importable

# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    failed = [rep.nodeid.split("::")[-1]
              for rep in terminalreporter.stats.get("failed", [])
              if "test_acceptance" in rep.nodeid]
    skipped = [rep.nodeid.split("::")[-1]
               for rep in terminalreporter.stats.get("skipped", [])
               if "test_acceptance" in rep.nodeid]
    if not (ACCEPTANCE_LINES or failed or skipped):
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    for name in failed:
        terminalreporter.write_line(f"FAIL: {name}")
    for name in skipped:
        terminalreporter.write_line(f"SKIP: {name} (full-scale data not present)")

from scribsal.data.manifest import load_manifest
from scribsal.data.rasters import save_image, save_scribble_mask

SQUARE_COLOR = (0.85, 0.25, 0.20)
DISK_COLOR = (0.20, 0.35, 0.85)
BG_COLOR = (0.45, 0.55, 0.45)


def make_shape_image(kind, size=64, seed=0):
    """Noisy background with one solid square or disk; returns (image, gt)."""
    rng = np.random.default_rng(seed)
    image = np.asarray(BG_COLOR)[None, None, :] + rng.normal(0, 0.04, (size, size, 3))
    half = int(rng.integers(size // 6, size // 4))
    cy = int(rng.integers(half + 2, size - half - 2))
    cx = int(rng.integers(half + 2, size - half - 2))
    yy, xx = np.mgrid[0:size, 0:size]
    if kind == "square":
        gt = (np.abs(yy - cy) <= half) & (np.abs(xx - cx) <= half)
        color = SQUARE_COLOR
    else:
        gt = (yy - cy) ** 2 + (xx - cx) ** 2 <= half ** 2
        color = DISK_COLOR
    image[gt] = np.asarray(color) + rng.normal(0, 0.04, (int(gt.sum()), 3))
    image = np.clip(image, 0.0, 1.0).astype(np.float32)
    return image, gt.astype(np.uint8), (cy, cx, half)


def make_scribble(gt, center, size):
    """Cross-shaped foreground stroke inside the object; background strokes
    wander around it: a border frame plus both diagonals, clipped to the
    true background."""
    cy, cx, half = center
    arm = max(2, half - 2)
    fg = np.zeros((size, size), dtype=bool)
    fg[cy - 1:cy + 2, max(cx - arm, 0):cx + arm + 1] = True
    fg[max(cy - arm, 0):cy + arm + 1, cx - 1:cx + 2] = True
    fg &= gt.astype(bool)
    bg = np.zeros((size, size), dtype=bool)
    bg[1:3, 1:-1] = True
    bg[-3:-1, 1:-1] = True
    bg[1:-1, 1:3] = True
    bg[1:-1, -3:-1] = True
    idx = np.arange(size)
    for off in (-1, 0, 1):
        d = np.clip(idx + off, 0, size - 1)
        bg[idx, d] = True
        bg[idx, size - 1 - d] = True
    bg &= ~gt.astype(bool)
    scr = np.zeros((size, size), dtype=np.uint8)
    scr[fg] = 1
    scr[bg] = 2
    return scr


def build_synthetic_dataset(root, n=8, size=64, seed=0, with_test=False):
    """Write images/scribbles/dense GT plus a manifest; returns its path."""
    os.makedirs(os.path.join(root, "images"), exist_ok=True)
    os.makedirs(os.path.join(root, "scribbles"), exist_ok=True)
    os.makedirs(os.path.join(root, "gt"), exist_ok=True)
    samples = []
    for i in range(n):
        kind = "square" if i % 2 == 0 else "disk"
        image, gt, center = make_shape_image(kind, size=size, seed=seed + i)
        sid = f"s{i:03d}"
        save_image(os.path.join(root, "images", f"{sid}.png"), image)
        scr = make_scribble(gt, center, size)
        save_scribble_mask(os.path.join(root, "scribbles", f"{sid}.png"), scr)
        from PIL import Image
        Image.fromarray(gt * 255, mode="L").save(os.path.join(root, "gt", f"{sid}.png"))
        samples.append({"id": sid, "image": f"images/{sid}.png",
                        "scribble": f"scribbles/{sid}.png",
                        "tags": [kind], "split": "train"})
    if with_test:
        for i in range(2):
            kind = "square" if i % 2 == 0 else "disk"
            image, gt, _ = make_shape_image(kind, size=size, seed=seed + 100 + i)
            sid = f"t{i:03d}"
            save_image(os.path.join(root, "images", f"{sid}.png"), image)
            from PIL import Image
            Image.fromarray(gt * 255, mode="L").save(os.path.join(root, "gt", f"{sid}.png"))
            samples.append({"id": sid, "image": f"images/{sid}.png", "split": "test"})
    doc = {"name": "synthetic-shapes", "root": ".",
           "categories": ["square", "disk"], "samples": samples}
    path = os.path.join(root, "manifest.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
    return path


@pytest.fixture(scope="session")
def synthetic_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("shapes")
    manifest_path = build_synthetic_dataset(str(root), n=8, size=64, seed=7)
    return load_manifest(manifest_path)
