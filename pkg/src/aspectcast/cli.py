"""``aspectcast`` command line: staged access to the review-to-forecast pipeline."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import evaluation as eval_mod
from . import features as features_mod
from .models import ForecasterSpec, fit_spec, model_from_json, model_to_json, predict_with
from .models.arima import ArimaModel
from .pipeline import PipelineConfig, StageError, load_inputs, run_pipeline, score_reviews


def _load_config(args, extra_overrides=None) -> PipelineConfig:
    overrides = {
        "out": getattr(args, "out", None),
        "seed": getattr(args, "seed", None),
        "aspects": getattr(args, "aspects", None),
    }
    if getattr(args, "no_lag", False):
        overrides["include_lag"] = False
    overrides.update(extra_overrides or {})
    if getattr(args, "config", None):
        return PipelineConfig.from_file(args.config, overrides)
    return PipelineConfig.from_dict({}, overrides)


def _write(out_dir: Path, name: str, data: bytes) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_bytes(data)
    print(f"wrote {path}", file=sys.stderr)
    return path


def cmd_ingest(args) -> None:
    cfg = _load_config(args)
    reviews, revenue, _, _, _ = load_inputs(cfg)
    _write(cfg.out_dir, "reviews.jsonl", corpus_mod.reviews_to_jsonl(reviews))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["quarter", "revenue"])
    for q, v in zip(revenue.quarters, revenue.values):
        writer.writerow([str(q), repr(v)])
    _write(cfg.out_dir, "revenue.csv", buf.getvalue().encode("utf-8"))
    print(f"{len(reviews)} reviews, {len(revenue)} revenue quarters", file=sys.stderr)


def cmd_sentiment(args) -> None:
    cfg = _load_config(args)
    reviews, _, _, lexicon, heuristics = load_inputs(cfg)
    scores = score_reviews(reviews, lexicon, heuristics)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "quarter", "pos", "neu", "neg", "compound"])
    for review, s in zip(reviews, scores):
        writer.writerow(
            [review.id, str(review.quarter),
             f"{s.positive:.6f}", f"{s.neutral:.6f}", f"{s.negative:.6f}", f"{s.compound:.6f}"]
        )
    _write(cfg.out_dir, "sentiment.csv", buf.getvalue().encode("utf-8"))


def cmd_features(args) -> None:
    from .pipeline import build_matrix

    cfg = _load_config(args)
    inputs = load_inputs(cfg)
    matrix, _ = build_matrix(cfg, *inputs)
    _write(cfg.out_dir, "features.csv", matrix.to_csv())


def cmd_fit(args) -> None:
    cfg = _load_config(args)
    matrix = features_mod.FeatureMatrix.from_csv(Path(args.features).read_bytes())
    params = json.loads(args.params) if args.params else {}
    spec = ForecasterSpec.make(args.kind, label=args.kind, seed=cfg.seed, **params)
    try:
        if spec.kind == "arima":
            model = fit_spec(spec, matrix.y)
        else:
            model = fit_spec(spec, matrix)
    except Exception as e:
        raise StageError("fit", str(e)) from None
    _write(cfg.out_dir, f"model_{args.kind}.json", model_to_json(model))


def cmd_predict(args) -> None:
    cfg = _load_config(args)
    model = model_from_json(Path(args.model).read_bytes())
    matrix = features_mod.FeatureMatrix.from_csv(Path(args.features).read_bytes())
    try:
        predicted = predict_with(model, matrix)
    except Exception as e:
        raise StageError("predict", str(e)) from None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["quarter", "predicted"])
    for q, v in zip(matrix.quarters, predicted):
        writer.writerow([str(q), f"{float(v):.9f}"])
    _write(cfg.out_dir, "predictions.csv", buf.getvalue().encode("utf-8"))


def cmd_evaluate(args) -> None:
    cfg = _load_config(args)
    matrix = features_mod.FeatureMatrix.from_csv(Path(args.features).read_bytes())
    rows = list(csv.DictReader(io.StringIO(Path(args.predictions).read_text("utf-8"))))
    predicted = {row["quarter"]: float(row["predicted"]) for row in rows}
    missing = [str(q) for q in matrix.quarters if str(q) not in predicted]
    if missing:
        raise StageError("evaluate", f"predictions missing quarters: {missing}")
    p = np.asarray([predicted[str(q)] for q in matrix.quarters])
    a = matrix.y
    report = eval_mod.EvalReport(
        rows=[
            eval_mod.EvalRow(
                label=args.label,
                mse=eval_mod.mse(a, p),
                rmse=eval_mod.rmse(a, p),
                theils_u=eval_mod.theils_u(a, p, variant="U2"),
                quarters=[str(q) for q in matrix.quarters],
                actual=[float(v) for v in a],
                predicted=[float(v) for v in p],
            )
        ]
    )
    _write(cfg.out_dir, "report.csv", eval_mod.emit_report_csv(report))
    _write(cfg.out_dir, "report.json", eval_mod.emit_report_json(report))


def cmd_pipeline(args) -> None:
    cfg = _load_config(args)
    report = run_pipeline(cfg)
    _write(cfg.out_dir, "report.csv", eval_mod.emit_report_csv(report))
    _write(cfg.out_dir, "report.json", eval_mod.emit_report_json(report))
    _write(cfg.out_dir, "plot_data.csv", eval_mod.emit_plot_csv(report))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspectcast",
        description="Aspect-level review sentiment features and revenue-growth forecasting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, help="seed for stochastic fits")
        p.add_argument("--aspects", choices=["13", "16"], help="aspect set")
        p.add_argument("--no-lag", action="store_true", dest="no_lag",
                       help="drop the lagged-growth feature column")

    for name, fn, desc in [
        ("ingest", cmd_ingest, "validate inputs and write normalized copies"),
        ("sentiment", cmd_sentiment, "write per-review sentiment scores"),
        ("features", cmd_features, "write the perception feature matrix"),
        ("pipeline", cmd_pipeline, "run the full backtest and write reports"),
    ]:
        p = sub.add_parser(name, help=desc)
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("fit", help="fit one model on a feature CSV")
    common(p)
    p.add_argument("--features", required=True)
    p.add_argument("--kind", required=True, choices=["lr", "mlp", "svr", "arima"])
    p.add_argument("--params", help="JSON object of model hyperparameters")
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("predict", help="predict a feature CSV with a saved model")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("evaluate", help="score predictions against a feature CSV's targets")
    common(p)
    p.add_argument("--features", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--label", default="model")
    p.set_defaults(fn=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except StageError as e:
        print(f"error {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error [{args.command}] {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
