"""Full CLI pass over a tiny dataset: blg-train -> blg-generate -> train ->
infer -> evaluate, all through the argparse surface."""

import json
import os

from PIL import Image

from scribsal.pipeline.cli import main as cli_main

from conftest import build_synthetic_dataset


def test_two_phase_protocol_via_cli(tmp_path):
    root = tmp_path / "data"
    root.mkdir()
    manifest_path = build_synthetic_dataset(str(root), n=4, size=32, seed=3)

    weights = tmp_path / "blg.npz"
    rc = cli_main(["blg-train", "--manifest", manifest_path, "--out", str(weights),
                   "--backbone", "tiny", "--input-size", "64", "--epochs", "0",
                   "--steps", "20", "--lr", "1e-3", "--seed", "0"])
    assert rc == 0 and weights.is_file()

    boundary_dir = tmp_path / "boundary"
    rc = cli_main(["blg-generate", "--manifest", manifest_path,
                   "--weights", str(weights), "--out", str(boundary_dir),
                   "--input-size", "64"])
    assert rc == 0
    labels = sorted(os.listdir(boundary_dir))
    assert labels == ["s000.png", "s001.png", "s002.png", "s003.png"]

    # idempotence: regenerating overwrites with identical bytes
    first = (boundary_dir / "s000.png").read_bytes()
    rc = cli_main(["blg-generate", "--manifest", manifest_path,
                   "--weights", str(weights), "--out", str(boundary_dir),
                   "--input-size", "64"])
    assert rc == 0
    assert (boundary_dir / "s000.png").read_bytes() == first

    run_dir = tmp_path / "run"
    rc = cli_main(["train", "--manifest", manifest_path,
                   "--boundary-labels", str(boundary_dir), "--out", str(run_dir),
                   "--epochs", "1", "--batch-size", "4", "--input-size", "32",
                   "--seed", "0", "--deterministic",
                   "--log", str(tmp_path / "loss.jsonl")])
    assert rc == 0
    assert (run_dir / "model.npz").is_file()
    records = [json.loads(line) for line in (tmp_path / "loss.jsonl").read_text().splitlines()]
    assert len(records) == 1 and records[0]["step"] == 1

    pred_dir = tmp_path / "pred"
    rc = cli_main(["infer", "--checkpoint", str(run_dir / "model.npz"),
                   "--images", str(root / "images"), "--out", str(pred_dir)])
    assert rc == 0
    preds = sorted(os.listdir(pred_dir))
    assert preds == ["s000.png", "s001.png", "s002.png", "s003.png"]
    with Image.open(pred_dir / "s000.png") as im:
        assert im.size == (32, 32)
        assert im.mode == "L"

    # re-run is bit-identical
    first_pred = (pred_dir / "s000.png").read_bytes()
    rc = cli_main(["infer", "--checkpoint", str(run_dir / "model.npz"),
                   "--images", str(root / "images"), "--out", str(pred_dir)])
    assert rc == 0
    assert (pred_dir / "s000.png").read_bytes() == first_pred

    report_path = tmp_path / "report.json"
    rc = cli_main(["evaluate", "--pred", str(pred_dir), "--gt", str(root / "gt"),
                   "--report", str(report_path), "--curves", str(tmp_path / "curves")])
    assert rc == 0
    doc = json.loads(report_path.read_text())
    assert doc["dataset"]["num_images"] == 4
    for key in ("s_measure", "e_avg", "e_max", "f_avg", "f_max", "mae"):
        assert 0.0 <= doc["dataset"][key] <= 1.0
    assert len(doc["curves"]["threshold"]) == 256
    assert (tmp_path / "curves" / "pr_curve.csv").is_file()
    assert (tmp_path / "curves" / "f_curve.csv").is_file()
