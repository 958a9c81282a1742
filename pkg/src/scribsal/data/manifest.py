"""Dataset manifests: the JSON index tying images, scribbles and tags together.

Schema::

    {
      "name": "s-eor",
      "root": ".",                        # resolved against the manifest dir
      "categories": ["ship", "plane"],    # dataset-level category table
      "samples": [
        {"id": "0001", "image": "img/0001.jpg",
         "scribble": "scr/0001.png",      # required for split == "train"
         "tags": ["ship"],                # optional, BLG training only
         "split": "train"}
      ]
    }
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from ..errors import ManifestError, ValidationError
from .rasters import load_scribble_mask

SPLITS = ("train", "test")


@dataclass
class SampleRecord:
    id: str
    image: str
    split: str
    scribble: str = None
    tags: tuple = None  # category indices into the manifest table


@dataclass
class DatasetManifest:
    root: str
    samples: list
    name: str = ""
    categories: tuple = ()

    def split(self, name):
        return [s for s in self.samples if s.split == name]

    @property
    def train(self):
        return self.split("train")

    @property
    def test(self):
        return self.split("test")


def load_manifest(path):
    """Load and validate a manifest file; paths come back absolute."""
    if not os.path.isfile(path):
        raise ManifestError(f"manifest file not found: {path}")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "samples" not in doc:
        raise ManifestError(f"manifest {path} lacks a 'samples' list")

    base = os.path.dirname(os.path.abspath(path))
    root = os.path.normpath(os.path.join(base, doc.get("root", ".")))
    categories = tuple(doc.get("categories", ()))
    if len(set(categories)) != len(categories):
        raise ManifestError("duplicate category names in manifest")

    samples = []
    seen = set()
    for i, rec in enumerate(doc["samples"]):
        rid = rec.get("id")
        if not rid:
            raise ManifestError(f"sample #{i} has no id")
        if rid in seen:
            raise ManifestError(f"duplicate sample id '{rid}'")
        seen.add(rid)
        split = rec.get("split", "train")
        if split not in SPLITS:
            raise ManifestError(f"sample '{rid}': unknown split '{split}'")
        if "image" not in rec:
            raise ManifestError(f"sample '{rid}' has no image path")
        image = _resolve(root, rec["image"])
        if not os.path.isfile(image):
            raise ManifestError(f"sample '{rid}': image file missing: {image}")
        scribble = None
        if rec.get("scribble"):
            scribble = _resolve(root, rec["scribble"])
            if not os.path.isfile(scribble):
                raise ManifestError(f"sample '{rid}': scribble file missing: {scribble}")
        elif split == "train":
            raise ManifestError(f"train sample '{rid}' has no scribble annotation")
        tags = None
        if rec.get("tags") is not None:
            tags = []
            for t in rec["tags"]:
                if t not in categories:
                    raise ManifestError(f"sample '{rid}': tag '{t}' not in category table")
                tags.append(categories.index(t))
            tags = tuple(sorted(set(tags)))
        samples.append(SampleRecord(id=rid, image=image, split=split,
                                    scribble=scribble, tags=tags))

    if not samples:
        raise ManifestError(f"manifest {path} declares no samples")
    return DatasetManifest(root=root, samples=samples,
                           name=doc.get("name", ""), categories=categories)


def save_manifest(path, manifest):
    """Write a manifest document; paths are stored relative to its root."""
    doc = {
        "name": manifest.name,
        "root": os.path.relpath(manifest.root, os.path.dirname(os.path.abspath(path))),
        "categories": list(manifest.categories),
        "samples": [],
    }
    for s in manifest.samples:
        rec = {"id": s.id, "image": os.path.relpath(s.image, manifest.root),
               "split": s.split}
        if s.scribble:
            rec["scribble"] = os.path.relpath(s.scribble, manifest.root)
        if s.tags is not None:
            rec["tags"] = [manifest.categories[t] for t in s.tags]
        doc["samples"].append(rec)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def annotation_density(manifest):
    """Mean labeled-pixel fraction over all scribbled samples.

    Samples without a scribble file (e.g. the test split) are skipped;
    a manifest with no scribbles at all is a validation error.
    """
    fractions = []
    for s in manifest.samples:
        if not s.scribble:
            continue
        mask = load_scribble_mask(s.scribble)
        fractions.append(float(np.count_nonzero(mask)) / mask.size)
    if not fractions:
        raise ValidationError("annotation_density: manifest has no scribbled samples")
    return float(np.mean(fractions))


def _resolve(root, p):
    return p if os.path.isabs(p) else os.path.normpath(os.path.join(root, p))
