"""Command-line surface: blg-train, blg-generate, train, infer, evaluate,
export-curves, annotate.

Exit codes: 0 success, 1 validation error (bad inputs/config), 2 runtime
failure.
"""

import argparse
import sys

from ..errors import ValidationError


def build_parser():
    parser = argparse.ArgumentParser(
        prog="scribsal",
        description="Scribble-supervised salient object detection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("blg-train", help="train the boundary-label classifier")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="output weights file (.npz)")
    p.add_argument("--backbone", default="resnet50",
                   choices=["resnet50", "resnet18", "tiny"])
    p.add_argument("--input-size", type=int, default=352)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=4)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("blg-generate", help="generate boundary pseudo-labels")
    p.add_argument("--manifest", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--out", required=True, help="output label directory")
    p.add_argument("--backbone", default="resnet50",
                   choices=["resnet50", "resnet18", "tiny"])
    p.add_argument("--input-size", type=int, default=352)
    p.add_argument("--tf", type=float, default=0.30)
    p.add_argument("--tb", type=float, default=0.07)
    p.add_argument("--window", type=int, default=13)
    p.add_argument("--rho", type=float, default=0.3)
    p.add_argument("--tau", type=float, default=0.5)

    p = sub.add_parser("train", help="train the saliency network")
    p.add_argument("--manifest", required=True)
    p.add_argument("--boundary-labels", default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--encoder-init", default=None,
                   help="checkpoint with (partial) encoder weights")
    p.add_argument("--log", default=None, help="JSONL loss log path")
    p.add_argument("--on-the-fly", action="store_true",
                   help="generate boundary labels from --blg-weights before training")
    p.add_argument("--blg-weights", default=None)
    p.add_argument("--blg-backbone", default="resnet50")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--input-size", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--das", dest="das", action="store_true", default=None)
    p.add_argument("--no-das", dest="das", action="store_false")
    p.add_argument("--jau-mode", choices=["jau", "ca", "sc", "off"], default=None)
    p.add_argument("--eau", dest="eau", action="store_true", default=None)
    p.add_argument("--no-eau", dest="eau", action="store_false")

    p = sub.add_parser("infer", help="predict saliency rasters")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--images", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="score predictions against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--report", required=True, help="output report JSON")
    p.add_argument("--curves", default=None, help="also export curve CSVs here")

    p = sub.add_parser("export-curves", help="write PR/F CSVs from a report")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("annotate", help="serve the scribble annotation UI")
    p.add_argument("--serve", required=True, help="image directory to annotate")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--static", default=None, help="built frontend directory")

    return parser


def cmd_blg_train(args):
    from ..blg.classifier import BLGClassifierSpec, BLGTrainConfig, train_classifier
    from ..data.manifest import load_manifest
    from .checkpoint import save_checkpoint

    manifest = load_manifest(args.manifest)
    spec = BLGClassifierSpec(num_categories=len(manifest.categories),
                             backbone=args.backbone, input_size=args.input_size)
    cfg = BLGTrainConfig(epochs=args.epochs, steps=args.steps,
                         batch_size=args.batch_size, learning_rate=args.lr,
                         seed=args.seed)
    weights = train_classifier(manifest, spec, cfg)
    save_checkpoint(args.out, weights,
                    config={"backbone": spec.backbone,
                            "num_categories": spec.num_categories,
                            "input_size": spec.input_size})
    print(f"wrote classifier weights to {args.out}")
    return 0


def _load_blg(weights_path, backbone, input_size=None):
    from ..blg.classifier import BLGClassifierSpec
    from .checkpoint import load_checkpoint

    state, meta, _ = load_checkpoint(weights_path)
    spec = BLGClassifierSpec(
        num_categories=meta.get("num_categories"),
        backbone=meta.get("backbone", backbone),
        input_size=input_size or meta.get("input_size", 352))
    return spec, state


def cmd_blg_generate(args):
    from ..blg.generate import BoundaryGenConfig, generate_boundary_labels
    from ..data.manifest import load_manifest

    manifest = load_manifest(args.manifest)
    spec, state = _load_blg(args.weights, args.backbone, args.input_size)
    cfg = BoundaryGenConfig(t_f=args.tf, t_b=args.tb, window=args.window,
                            rho=args.rho, tau=args.tau)
    written = generate_boundary_labels(manifest, spec, state, args.out, cfg)
    print(f"wrote {len(written)} boundary label rasters to {args.out}")
    return 0


def cmd_train(args):
    from ..data.manifest import load_manifest
    from .config import TrainConfig, config_from_dict, load_config
    from .train import train

    cfg = load_config(args.config) if args.config else TrainConfig()
    overrides = {}
    for key, value in (("epochs", args.epochs), ("batch_size", args.batch_size),
                       ("learning_rate", args.lr), ("input_size", args.input_size),
                       ("seed", args.seed), ("das", args.das),
                       ("jau_mode", args.jau_mode), ("eau", args.eau)):
        if value is not None:
            overrides[key] = value
    if args.deterministic:
        overrides["deterministic"] = True
    cfg = config_from_dict(overrides, base=cfg)

    manifest = load_manifest(args.manifest)
    blg = None
    if args.on_the_fly:
        if not args.blg_weights:
            raise ValidationError("--on-the-fly requires --blg-weights")
        from ..blg.generate import BoundaryGenConfig
        spec, state = _load_blg(args.blg_weights, args.blg_backbone)
        blg = (spec, state, BoundaryGenConfig())
    path, state = train(cfg, manifest, boundary_dir=args.boundary_labels,
                        out_dir=args.out, encoder_init=args.encoder_init,
                        log_path=args.log, blg=blg)
    print(f"wrote final checkpoint to {path} after {state.step} steps")
    return 0


def cmd_infer(args):
    from .infer import infer

    written, skipped = infer(args.checkpoint, args.images, args.out)
    print(f"wrote {len(written)} saliency rasters to {args.out}")
    if skipped:
        print(f"skipped unreadable images: {skipped}", file=sys.stderr)
        return 2
    return 0


def cmd_evaluate(args):
    from ..metrics.report import evaluate_dataset, export_curves, write_report

    report = evaluate_dataset(args.pred, args.gt)
    write_report(report, args.report)
    if args.curves and report.f_curve is not None:
        export_curves(report, args.curves)
    summary = " ".join(f"{k}={v:.4f}" for k, v in report.summary().items())
    print(f"evaluated {len(report.per_image)} images: {summary}")
    if report.skipped:
        print(f"unmatched ids: {report.skipped}", file=sys.stderr)
        return 1
    return 0


def cmd_export_curves(args):
    from ..metrics.report import export_curves, read_report

    doc = read_report(args.report)
    pr_path, f_path = export_curves(doc, args.out)
    print(f"wrote {pr_path} and {f_path}")
    return 0


def cmd_annotate(args):
    from ..annotate.server import serve

    serve(args.serve, port=args.port, static_dir=args.static)
    return 0


COMMANDS = {
    "blg-train": cmd_blg_train,
    "blg-generate": cmd_blg_generate,
    "train": cmd_train,
    "infer": cmd_infer,
    "evaluate": cmd_evaluate,
    "export-curves": cmd_export_curves,
    "annotate": cmd_annotate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
