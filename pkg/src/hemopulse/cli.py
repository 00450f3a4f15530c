"""Command-line entry point.

Subcommands wire the library into the full workflow: synthesize a cohort,
explore it (correlations, scree, loadings), train and persist a single
model, predict with a persisted model, or run the full three-space
benchmark.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure,
5 benchmark finished with failed cells.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import classifiers
from .classifiers import ClassifierSpec, doc_to_model, model_to_doc
from .classifiers.serialize import _decode, _encode
from .cohort import Cohort, load_cohort, save_cohort
from .errors import ConfigError, DataError, HemopulseError, ModelFormatError, NumericError
from .evaluation import DEFAULT_GRIDS, report_to_csv, report_to_json, run_benchmark
from .metrics import compute_confusion, compute_metrics
from .plots import heatmap_svg, scree_svg
from .preprocess import (
    DEFAULT_VARIANCE_THRESHOLD,
    FeatureSpaceModel,
    FittedScaler,
    PcaModel,
    apply_feature_space,
    correlation_matrix,
    explained_variance,
    fit_feature_space,
    fit_pca,
    fit_scaler,
    transform,
)
from .rng import RngStream
from .synth import GeneratorConfig, generate_cohort

BUNDLE_FORMAT = "hemopulse-bundle"
BUNDLE_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4
EXIT_PARTIAL = 5


def _csv_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _csv_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _csv_names(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _hyper_pair(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, raw = text.split("=", 1)
    value: object
    if raw.lower() in ("none", "null"):
        value = None
    else:
        try:
            value = int(raw)
        except ValueError:
            try:
                value = float(raw)
            except ValueError:
                value = raw
    return key, value


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="hemopulse",
        description="Hemorrhage screening pipeline: synthetic cohorts, PCA, six classifiers, benchmark reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="flat key=value file; explicit flags override")
        subparsers[name] = p
        return p

    g = add("generate", "synthesize a cohort CSV")
    g.add_argument("--n", type=int, default=2000, help="number of samples")
    g.add_argument("--imbalance", type=float, default=9.0, help="tbi count / healthy count")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--out", required=True, help="output cohort CSV path")
    g.add_argument("--angles", type=_csv_floats, default=(0.0, 15.0, 30.0, 45.0, 60.0))
    g.add_argument("--healthy-amp", type=float, default=1.0)
    g.add_argument("--tbi-amp", type=float, default=2.2)
    g.add_argument("--healthy-noise-sd", type=float, default=0.052)
    g.add_argument("--tbi-noise-sd", type=float, default=0.13)
    g.add_argument("--harmonic-weights", type=_csv_floats, default=(1.0, 0.45))

    e = add("eda", "correlation, scree, and loading-vector tables (CSV, optional SVG)")
    e.add_argument("--in", dest="infile", required=True, help="cohort CSV path")
    e.add_argument("--out-dir", required=True, help="directory for corr/scree/loadings files")
    e.add_argument("--threshold", type=float, default=DEFAULT_VARIANCE_THRESHOLD)
    e.add_argument("--svg", action="store_true", help="also write scree.svg and corr-heatmap.svg")

    t = add("train", "fit one model on a cohort and persist it with its preprocessing")
    t.add_argument("--in", dest="infile", required=True, help="cohort CSV path")
    t.add_argument("--out", required=True, help="output model bundle (JSON)")
    t.add_argument("--model", required=True, choices=classifiers.KINDS)
    t.add_argument("--space", default="original", choices=("original", "reduced", "pca"))
    t.add_argument("--threshold", type=float, default=DEFAULT_VARIANCE_THRESHOLD)
    t.add_argument("--reduced-frames", type=_csv_ints, default=None)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument(
        "--hyper",
        type=_hyper_pair,
        action="append",
        default=None,
        metavar="KEY=VALUE",
        help="hyperparameter override; repeatable",
    )

    p = add("predict", "predict labels and scores for a cohort with a saved bundle")
    p.add_argument("--in", dest="infile", required=True, help="cohort CSV path")
    p.add_argument("--model-file", required=True, help="model bundle from `train`")
    p.add_argument("--out", required=True, help="output prediction CSV")

    b = add("bench", "train and evaluate every (space, model) cell")
    b.add_argument("--in", dest="infile", required=True, help="cohort CSV path")
    b.add_argument("--out-csv", default="report.csv")
    b.add_argument("--out-json", default="report.json")
    b.add_argument("--spaces", type=_csv_names, default=("original", "reduced", "pca"))
    b.add_argument("--models", type=_csv_names, default=classifiers.KINDS)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--k", type=int, default=5, help="fold count recorded in provenance")
    b.add_argument("--threshold", type=float, default=DEFAULT_VARIANCE_THRESHOLD)
    b.add_argument("--reduced-frames", type=_csv_ints, default=None)
    b.add_argument(
        "--grid",
        choices=("default", "none"),
        default="default",
        help="'none' skips the search and uses default hyperparameters",
    )

    return parser, subparsers


def _read_config_file(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, value = stripped.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _apply_config(subparser: argparse.ArgumentParser, raw: dict[str, str]) -> None:
    """Convert config values with each option's own type and install as defaults."""
    actions = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            actions[opt.lstrip("-")] = action
        actions[action.dest] = action
    defaults = {}
    for key, raw_value in raw.items():
        action = actions.get(key)
        if action is None or action.dest in ("help", "config"):
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[action.dest] = raw_value.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                defaults[action.dest] = action.type(raw_value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from exc
        else:
            defaults[action.dest] = raw_value
    subparser.set_defaults(**defaults)


def _write_matrix_csv(path: Path, corner: str, col_names, row_names, matrix) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join([corner, *col_names]) + "\n")
        for name, row in zip(row_names, matrix):
            fh.write(",".join([name, *(repr(float(v)) for v in row)]) + "\n")


def cmd_generate(args) -> int:
    cfg = GeneratorConfig(
        n_samples=args.n,
        imbalance_ratio=args.imbalance,
        angle_set=tuple(args.angles),
        healthy_amp=args.healthy_amp,
        tbi_amp=args.tbi_amp,
        healthy_noise_sd=args.healthy_noise_sd,
        tbi_noise_sd=args.tbi_noise_sd,
        harmonic_weights=tuple(args.harmonic_weights),
        seed=args.seed,
    )
    cohort = generate_cohort(cfg)
    save_cohort(cohort, args.out)
    healthy, tbi = cohort.class_counts()
    print(f"wrote {args.out}: {cohort.n_samples} rows ({tbi} tbi / {healthy} healthy)")
    return EXIT_OK


def cmd_eda(args) -> int:
    cohort = load_cohort(args.infile)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    corr = correlation_matrix(cohort.features)
    names = list(cohort.feature_names)
    _write_matrix_csv(out_dir / "corr.csv", "feature", names, names, corr)

    scaler = fit_scaler(cohort.features)
    pca = fit_pca(transform(scaler, cohort.features), args.threshold, scaler=scaler)
    rho = explained_variance(pca)
    cumulative = np.cumsum(rho)
    with open(out_dir / "scree.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("index,lambda,rho,cumulative\n")
        for i in range(len(rho)):
            fh.write(f"{i + 1},{pca.eigenvalues[i]!r},{rho[i]!r},{cumulative[i]!r}\n")

    pc_names = [f"pc{i:02d}" for i in range(1, len(names) + 1)]
    _write_matrix_csv(out_dir / "loadings.csv", "feature", pc_names, names, pca.loading_vectors)

    if args.svg:
        scree_svg(rho, cumulative, out_dir / "scree.svg")
        heatmap_svg(corr, names, out_dir / "corr-heatmap.svg")

    print(
        f"wrote corr/scree/loadings to {out_dir}: "
        f"{pca.retained_rank} components explain >= {args.threshold:g} of variance"
    )
    return EXIT_OK


def _feature_space_to_doc(fsm: FeatureSpaceModel) -> dict:
    doc: dict = {
        "kind": fsm.kind,
        "scaler": {
            "means": _encode(fsm.scaler.means),
            "deviations": _encode(fsm.scaler.deviations),
            "constant_mask": _encode(fsm.scaler.constant_mask),
        },
        "frames": list(fsm.frames) if fsm.frames else None,
        "pca": None,
    }
    if fsm.pca is not None:
        doc["pca"] = {
            "eigenvalues": _encode(fsm.pca.eigenvalues),
            "loading_vectors": _encode(fsm.pca.loading_vectors),
            "retained_rank": fsm.pca.retained_rank,
            "variance_threshold": fsm.pca.variance_threshold,
        }
    return doc


def _feature_space_from_doc(doc: dict) -> FeatureSpaceModel:
    scaler = FittedScaler(
        means=_decode(doc["scaler"]["means"]),
        deviations=_decode(doc["scaler"]["deviations"]),
        constant_mask=_decode(doc["scaler"]["constant_mask"]),
    )
    pca = None
    if doc.get("pca") is not None:
        p = doc["pca"]
        pca = PcaModel(
            eigenvalues=_decode(p["eigenvalues"]),
            loading_vectors=_decode(p["loading_vectors"]),
            retained_rank=int(p["retained_rank"]),
            variance_threshold=float(p["variance_threshold"]),
            fitted_scaler=scaler,
        )
    frames = tuple(doc["frames"]) if doc.get("frames") else None
    return FeatureSpaceModel(kind=doc["kind"], scaler=scaler, pca=pca, frames=frames)


def cmd_train(args) -> int:
    cohort = load_cohort(args.infile)
    cohort.require_both_classes()
    fsm = fit_feature_space(cohort, args.space, args.threshold, args.reduced_frames)
    training = apply_feature_space(fsm, cohort)
    hyper = dict(args.hyper) if args.hyper else {}
    model = classifiers.train(
        ClassifierSpec(args.model, hyper),
        training.features,
        training.labels,
        RngStream(args.seed),
        feature_space=args.space,
    )
    predicted = classifiers.predict(model, training.features, input_space=args.space)
    accuracy = compute_metrics(compute_confusion(predicted, training.labels)).accuracy
    bundle = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "feature_space": _feature_space_to_doc(fsm),
        "model": model_to_doc(model),
        "train_accuracy": accuracy,
        "seed": args.seed,
    }
    Path(args.out).write_text(json.dumps(bundle, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(
        f"trained {args.model} on {training.n_samples} rows in space '{args.space}' "
        f"(d={training.dim}); training accuracy {accuracy:.4f}; wrote {args.out}"
    )
    return EXIT_OK


def _load_bundle(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise DataError(f"model file not found: {path}")
    try:
        bundle = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model bundle is not valid JSON: {exc}") from exc
    if not isinstance(bundle, dict) or bundle.get("format") != BUNDLE_FORMAT:
        raise ModelFormatError(f"not a {BUNDLE_FORMAT} document")
    if bundle.get("version") != BUNDLE_VERSION:
        raise ModelFormatError(
            f"unsupported bundle version {bundle.get('version')!r}, expected {BUNDLE_VERSION}"
        )
    return bundle


def cmd_predict(args) -> int:
    bundle = _load_bundle(args.model_file)
    fsm = _feature_space_from_doc(bundle["feature_space"])
    model = doc_to_model(bundle["model"])
    cohort = load_cohort(args.infile)
    transformed = apply_feature_space(fsm, cohort)
    scores = classifiers.decision_scores(
        model, transformed.features, input_space=transformed.space_tag()
    )
    labels = (scores >= 0.0).astype(int)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("row,predicted_label,decision_score\n")
        for i, (lab, score) in enumerate(zip(labels, scores)):
            fh.write(f"{i},{lab},{score!r}\n")
    accuracy = compute_metrics(compute_confusion(labels, cohort.labels)).accuracy
    print(
        f"wrote {args.out}: {len(labels)} predictions "
        f"({int(labels.sum())} positive); accuracy vs file labels {accuracy:.4f}"
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    cohort = load_cohort(args.infile)
    grids = None
    if args.grid == "none":
        grids = {kind: [{}] for kind in classifiers.KINDS}
    report = run_benchmark(
        cohort,
        spaces=args.spaces,
        kinds=args.models,
        seeds=args.seed,
        k=args.k,
        grids=grids,
        threshold=args.threshold,
        reduced_frames=args.reduced_frames,
    )
    Path(args.out_csv).write_text(report_to_csv(report), encoding="utf-8")
    Path(args.out_json).write_text(report_to_json(report), encoding="utf-8")
    for row in report.rows:
        print(
            f"{row.model:>12s} | {row.space:<8s} | acc {row.accuracy:.3f} "
            f"P {row.precision:.3f} R {row.recall:.3f} F1 {row.f1_binary:.3f}"
        )
    for failure in report.failures:
        print(f"{failure.model:>12s} | {failure.space:<8s} | FAILED: {failure.error}")
    print(f"wrote {args.out_csv} and {args.out_json}")
    return EXIT_PARTIAL if report.failures else EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "eda": cmd_eda,
    "train": cmd_train,
    "predict": cmd_predict,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser, subparsers = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(subparsers[args.command], _read_config_file(args.config))
            args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except HemopulseError as exc:  # fallback for future error kinds
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
