"""Command-line interface.

Subcommands compose the library operations; results print as line-oriented
text by default or as structured records under --json (one JSON object per
record).  Exit codes: 0 success, 1 usage error, 2 data/ingest error,
3 numerical or regime error.  Stochastic subcommands require --seed and
are byte-identical for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import baseline, clustering, ensemble, modelio, perceptron, sampling
from .encoding import EncodingScheme, FeatureVector, encode
from .errors import (DataError, InvalidInputError, ModelFormatError,
                     NoSupportError, NumericIntegrityError,
                     QuantumPerceptronError, TrainingError,
                     UnphysicalModelError)
from .perceptron import LABEL_ORDER, NormalizationMode

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

_DATA_ERRORS = (DataError, TrainingError, InvalidInputError, ModelFormatError)
_NUMERIC_ERRORS = (NumericIntegrityError, UnphysicalModelError, NoSupportError)


class _Parser(argparse.ArgumentParser):
    """argparse with the package exit-code contract (usage errors exit 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _fmt(value: float) -> str:
    return repr(float(value))


_LABEL_KEYS = {-1: "-1", +1: "+1", 0: "0"}


def _parse_vector(text: str) -> FeatureVector:
    try:
        return FeatureVector(tuple(float(cell) for cell in text.split(",")))
    except (ValueError, InvalidInputError) as exc:
        raise UsageError(f"cannot parse --input vector {text!r}: {exc}") from exc


def _emit(args, text_lines: Sequence[str], json_records: Sequence[dict]) -> None:
    if args.json:
        for record in json_records:
            print(json.dumps(record))
    else:
        for line in text_lines:
            print(line)


def _regime_dict(report: perceptron.RegimeReport) -> dict:
    return {
        "case": report.case,
        "orthogonality_defect": report.orthogonality_defect,
        "completeness_defect": report.completeness_defect,
        "p_zero_min_eig": report.p_zero_min_eig,
        "physical": report.physical,
    }


def _regime_lines(report: perceptron.RegimeReport) -> list[str]:
    return [
        f"case={report.case}",
        f"orthogonality_defect={_fmt(report.orthogonality_defect)}",
        f"completeness_defect={_fmt(report.completeness_defect)}",
        f"p_zero_min_eig={_fmt(report.p_zero_min_eig)}",
        f"physical={'true' if report.physical else 'false'}",
    ]


def _classification_record(result: perceptron.ClassificationResult) -> dict:
    return {
        "label": result.label,
        "expectations": {_LABEL_KEYS[k]: result.expectations[k] for k in LABEL_ORDER},
        "mode": result.mode,
    }


def _classification_line(result: perceptron.ClassificationResult) -> str:
    e = result.expectations
    return (f"label={result.label:+d} e[-1]={_fmt(e[-1])} "
            f"e[+1]={_fmt(e[+1])} e[0]={_fmt(e[0])}")


def _load_labeled(path: str, label: Optional[str], need_labels: bool):
    if need_labels and label is None:
        raise UsageError("--label is required for this command")
    return modelio.ingest_csv(path, label_column=label)


# ---------------------------------------------------------------- commands

def _cmd_train(args) -> int:
    data = _load_labeled(args.data, args.label, need_labels=True)
    model = perceptron.train(
        data,
        encoding=EncodingScheme(args.encoding),
        norm_mode=NormalizationMode(args.norm),
        allow_negative=args.allow_negative,
    )
    metadata = {"command": "train", "source": args.data}
    modelio.save_model(model, args.out, metadata)
    _emit(args, [
        (f"trained: dim={model.dim} encoding={model.encoding.value} "
         f"norm={model.norm_mode.value} samples={len(data)}"),
        *_regime_lines(model.regime),
        f"saved={args.out}",
    ], [{
        "command": "train",
        "dim": model.dim,
        "encoding": model.encoding.value,
        "norm_mode": model.norm_mode.value,
        "samples": len(data),
        "regime": _regime_dict(model.regime),
        "out": args.out,
    }])
    return EXIT_OK


def _cmd_classify(args) -> int:
    model = modelio.load_model(args.model)
    if args.input is not None:
        records = [_parse_vector(args.input)]
    else:
        records = modelio.ingest_csv(args.data, label_column=args.label)
    lines, docs = [], []
    for fv in records:
        result = perceptron.classify_feature(model, fv)
        lines.append(_classification_line(result))
        docs.append(_classification_record(result))
    _emit(args, lines, docs)
    return EXIT_OK


def _cmd_regime(args) -> int:
    model = modelio.load_model(args.model)
    modelio.verify_regime(model)
    report = perceptron.regime(model)
    _emit(args, _regime_lines(report), [_regime_dict(report)])
    return EXIT_OK


def _cmd_sample(args) -> int:
    model = modelio.load_model(args.model)
    fv = _parse_vector(args.input)
    state = encode(fv, model.encoding, allow_negative=model.allow_negative)
    rng = sampling.RandomSource(args.seed)
    outcomes = sampling.sample_outcomes(model, state, rng, args.trials)
    counts = {label: int((outcomes == label).sum()) for label in LABEL_ORDER}
    lines = [f"draws={args.trials}"]
    if args.trials == 1:
        lines.append(f"outcome={int(outcomes[0]):+d}")
    for label in LABEL_ORDER:
        freq = counts[label] / args.trials
        lines.append(f"count[{_LABEL_KEYS[label]}]={counts[label]} freq={_fmt(freq)}")
    record = {
        "command": "sample",
        "seed": args.seed,
        "draws": args.trials,
        "counts": {_LABEL_KEYS[k]: counts[k] for k in LABEL_ORDER},
        "frequencies": {_LABEL_KEYS[k]: counts[k] / args.trials for k in LABEL_ORDER},
    }
    if args.trials == 1:
        record["outcome"] = int(outcomes[0])
    _emit(args, lines, [record])
    return EXIT_OK


def _cmd_accuracy(args) -> int:
    model = modelio.load_model(args.model)
    data = _load_labeled(args.data, args.label, need_labels=True)
    rng = sampling.RandomSource(args.seed)
    accuracy = sampling.empirical_accuracy(model, data, args.trials, rng)
    draws = len(data) * args.trials
    _emit(args,
          [f"accuracy={_fmt(accuracy)} draws={draws}"],
          [{"command": "accuracy", "accuracy": accuracy, "draws": draws,
            "trials_per_datum": args.trials, "seed": args.seed}])
    return EXIT_OK


def _cmd_cluster(args) -> int:
    records = modelio.ingest_csv(args.data, label_column=None)
    scheme = EncodingScheme(args.encoding)
    vectors = [encode(fv, scheme) for fv in records]
    state = clustering.cluster(vectors, count_normalized=args.count_normalized)
    lines = [f"vectors={len(vectors)}"]
    lines.extend(f"row={i + 1} cluster={label:+d}"
                 for i, label in enumerate(state.labels))
    record = {
        "command": "cluster",
        "assignments": list(state.labels),
    }
    if args.consensus is not None:
        if args.seed is None:
            raise UsageError("--consensus requires --seed")
        rng = sampling.RandomSource(args.seed)
        report = clustering.cluster_consensus(
            vectors, args.consensus, rng, count_normalized=args.count_normalized)
        lines.append(f"consensus runs={report.runs} agreement={_fmt(report.agreement)}")
        record["consensus"] = {
            "runs": report.runs,
            "agreement": report.agreement,
            "co_cluster": [[float(v) for v in row] for row in report.co_cluster],
            "seed": args.seed,
        }
    _emit(args, lines, [record])
    return EXIT_OK


def _cmd_ensemble_train(args) -> int:
    datasets = [_load_labeled(path, args.label, need_labels=True)
                for path in args.data]
    model = ensemble.train_ensemble(
        datasets, norm_mode=NormalizationMode(args.norm))
    metadata = {"command": "ensemble-train", "sources": ";".join(args.data)}
    modelio.save_ensemble(model, args.out, metadata)
    lines = [f"trained ensemble: dofs={model.n_dof} channels={model.n_features}"]
    for i, p in enumerate(model.perceptrons):
        lines.append(f"dof{i}: case={p.regime.case} reference={_fmt(model.references[i])}")
    lines.append(f"saved={args.out}")
    _emit(args, lines, [{
        "command": "ensemble-train",
        "dofs": model.n_dof,
        "channels": model.n_features,
        "references": list(model.references),
        "regimes": [p.regime.case for p in model.perceptrons],
        "out": args.out,
    }])
    return EXIT_OK


def _decision_line(decision: ensemble.EnsembleDecision) -> str:
    labels = ",".join(f"{label:+d}" for label, _ in decision.per_dof)
    acts = ",".join(_fmt(act) for _, act in decision.per_dof)
    active = ";".join(f"{dof}:{sign:+d}"
                      for dof, sign in sorted(decision.active_set))
    return (f"kind={decision.kind} labels={labels} activations={acts} "
            f"active={active or 'none'}")


def _decision_record(decision: ensemble.EnsembleDecision) -> dict:
    return {
        "kind": decision.kind,
        "per_dof": [{"label": label, "activation": act}
                    for label, act in decision.per_dof],
        "active_set": [[dof, sign] for dof, sign in sorted(decision.active_set)],
    }


def _cmd_ensemble_classify(args) -> int:
    model = modelio.load_ensemble(args.model)
    if args.input is not None:
        records = [_parse_vector(args.input)]
    else:
        records = modelio.ingest_csv(args.data, label_column=None)
    lines, docs = [], []
    for fv in records:
        decision = ensemble.classify_ensemble(model, fv, threshold=args.threshold)
        lines.append(_decision_line(decision))
        docs.append(_decision_record(decision))
    _emit(args, lines, docs)
    return EXIT_OK


def _cmd_capacity(args) -> int:
    capacity = ensemble.class_capacity(args.n)
    _emit(args,
          [f"originals={capacity.originals} superpositions={capacity.superpositions}"],
          [{"command": "capacity", "n": args.n,
            "originals": capacity.originals,
            "superpositions": capacity.superpositions}])
    return EXIT_OK


def _cmd_synth(args) -> int:
    config = ensemble.SyntheticEmgConfig.channel_disjoint(
        channels=args.channels, dofs=args.dofs, noise_sigma=args.sigma,
        seed=args.seed, amplitude=args.amplitude)
    dataset = ensemble.generate_synthetic(config, args.trials)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    channel_names = [f"ch{i}" for i in range(args.channels)]

    written = []
    for dof, training in enumerate(dataset.training):
        path = out_dir / f"train_dof{dof}.csv"
        rows = [list(fv.features) + [f"{fv.label:+d}"] for fv in training]
        modelio.write_csv(path, channel_names + ["label"], rows)
        written.append((str(path), len(rows)))

    combined_path = out_dir / "combined.csv"
    truth_names = [f"dof{i}" for i in range(args.dofs)]
    rows = []
    for trial in dataset.combined:
        truth = {dof: sign for dof, sign in trial.active}
        rows.append(list(trial.features)
                    + [f"{truth.get(d, 0):+d}" for d in range(args.dofs)])
    modelio.write_csv(combined_path, channel_names + truth_names, rows)
    written.append((str(combined_path), len(rows)))

    _emit(args,
          [f"wrote {path} rows={count}" for path, count in written],
          [{"command": "synth", "seed": args.seed,
            "files": [{"path": path, "rows": count} for path, count in written]}])
    return EXIT_OK


def _cmd_baseline_train(args) -> int:
    data = _load_labeled(args.data, args.label, need_labels=True)
    rng = sampling.RandomSource(args.seed)
    result = baseline.train_classical(
        data, max_updates=args.max_updates, rng=rng,
        bias=args.bias, shuffle=args.shuffle)
    converged = isinstance(result, baseline.LinearWeights)
    doc = {
        "version": modelio.WEIGHTS_FORMAT_VERSION,
        "weights": list(result.weights),
        "bias": result.bias,
        "update_count": result.update_count,
        "converged": converged,
    }
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    weights = ",".join(_fmt(w) for w in result.weights)
    _emit(args,
          [f"converged={'true' if converged else 'false'} "
           f"updates={result.update_count}",
           f"weights={weights}",
           f"saved={args.out}"],
          [{"command": "baseline-train", "converged": converged,
            "updates": result.update_count, "weights": list(result.weights),
            "bias": result.bias, "out": args.out, "seed": args.seed}])
    return EXIT_OK


def _cmd_baseline_predict(args) -> int:
    try:
        doc = json.loads(Path(args.model).read_text(encoding="utf-8"))
        weights = baseline.LinearWeights(
            weights=tuple(float(w) for w in doc["weights"]),
            update_count=int(doc["update_count"]),
            bias=bool(doc["bias"]))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"cannot load weights file {args.model}: {exc}") from exc
    fv = _parse_vector(args.input)
    label = baseline.predict_classical(weights, fv)
    _emit(args, [f"label={label:+d}"],
          [{"command": "baseline-predict", "label": label}])
    return EXIT_OK


# ----------------------------------------------------------------- parser

def build_parser() -> _Parser:
    parser = _Parser(prog="qperceptron",
                     description="Projector-sum POVM perceptron toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true",
                       help="emit structured records instead of text")
        return p

    p = add("train", _cmd_train, "train a POVM perceptron from labeled CSV data")
    p.add_argument("--data", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--encoding", choices=[e.value for e in EncodingScheme],
                   default=EncodingScheme.QUBIT.value)
    p.add_argument("--norm", choices=[m.value for m in NormalizationMode],
                   default=NormalizationMode.RESCALE.value)
    p.add_argument("--allow-negative", action="store_true",
                   help="permit negative features under direct encoding")
    p.add_argument("--out", required=True)

    p = add("classify", _cmd_classify, "classify inputs with a trained model")
    p.add_argument("--model", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", help="comma-separated feature vector")
    group.add_argument("--data", help="CSV file of feature vectors")
    p.add_argument("--label", help="label column to exclude when reading --data")

    p = add("regime", _cmd_regime, "report the regime diagnosis of a model")
    p.add_argument("--model", required=True)

    p = add("sample", _cmd_sample, "draw stochastic classification outcomes")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)

    p = add("accuracy", _cmd_accuracy, "empirical sampled accuracy on labeled data")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--trials", type=int, required=True,
                   help="draws per datum")
    p.add_argument("--seed", type=int, required=True)

    p = add("cluster", _cmd_cluster, "unsupervised two-class protocol")
    p.add_argument("--data", required=True)
    p.add_argument("--encoding", choices=[e.value for e in EncodingScheme],
                   default=EncodingScheme.DIRECT.value)
    p.add_argument("--count-normalized", action="store_true")
    p.add_argument("--consensus", type=int,
                   help="number of permutation re-runs")
    p.add_argument("--seed", type=int)

    p = add("ensemble-train", _cmd_ensemble_train,
            "train one perceptron per DOF (repeat --data per DOF)")
    p.add_argument("--data", action="append", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--norm", choices=[m.value for m in NormalizationMode],
                   default=NormalizationMode.RESCALE.value)
    p.add_argument("--out", required=True)

    p = add("ensemble-classify", _cmd_ensemble_classify,
            "per-DOF classification with superposition detection")
    p.add_argument("--model", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--input")
    group.add_argument("--data")
    p.add_argument("--threshold", type=float, default=ensemble.DEFAULT_THRESHOLD)

    p = add("capacity", _cmd_capacity, "class counts for an n-perceptron ensemble")
    p.add_argument("--n", type=int, required=True)

    p = add("synth", _cmd_synth, "generate synthetic EMG-like CSV datasets")
    p.add_argument("--channels", type=int, required=True)
    p.add_argument("--dofs", type=int, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--out-dir", required=True)

    p = add("baseline-train", _cmd_baseline_train,
            "train the classical perceptron baseline")
    p.add_argument("--data", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--max-updates", type=int, default=10_000)
    p.add_argument("--bias", action="store_true")
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = add("baseline-predict", _cmd_baseline_predict,
            "predict with trained classical weights")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qperceptron: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"qperceptron: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _DATA_ERRORS as exc:
        print(f"qperceptron: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except QuantumPerceptronError as exc:
        print(f"qperceptron: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
