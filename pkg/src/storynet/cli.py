"""Command-line frontend for the full pipeline.

Subcommands compose the library: build-net, features, train, classify,
eval, sweep-m, sweep-length, baseline-zipf. Human-readable summaries go
to stdout, machine-readable CSV/JSON to files named by --out, and every
output file carries a config echo sufficient to reproduce the run.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import experiment
from .classify import (
    bootstrap_accuracy,
    classify as classify_point,
    evaluate,
    load_model,
    save_model,
    separating_plane,
)
from .corpus import load_manifest
from .errors import DataError, NumericalError, StorynetError
from .fitting import read_feature_csv, write_feature_csv
from .measures import clustering_by_degree, degree_distribution
from .semnet import build_network, edge_count, edge_list_lines
from .tokenizer import make_stream

__all__ = ["main"]

log = logging.getLogger("storynet")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; this tool reserves 2 for data errors."""

    def error(self, message):  # noqa: D102
        self.print_usage(sys.stderr)
        raise SystemExit(_usage_error(message))


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=4, help="word distance (default 4)")
    parser.add_argument(
        "--window", type=int, default=500,
        help="window length in words; 0 uses the whole text (default 500)",
    )
    parser.add_argument(
        "--split-basis", choices=("vertices", "words"), default="vertices",
        help="what N means in the sqrt(N) region break (default vertices)",
    )
    parser.add_argument(
        "--lemmatizer", choices=("stemmer", "identity"), default="stemmer",
        help="lemma grouping rule (default stemmer)",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    parser.add_argument(
        "--random-offset", action="store_true",
        help="draw each sample's window start uniformly instead of starting at word 0",
    )
    parser.add_argument(
        "--min-fit-points", type=int, default=3,
        help="minimum positive points per power-law fit (default 3)",
    )
    parser.add_argument(
        "--raw-region-fallback", action="store_true",
        help="retry a degenerate degree region on unbinned points",
    )
    parser.add_argument(
        "--with-geodesic", action="store_true",
        help="also compute the mean geodesic distance per sample",
    )
    parser.add_argument("--ridge", type=float, default=0.0, help="ridge term for training")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for batch commands")


def _config_from_args(args: argparse.Namespace, **overrides) -> experiment.RunConfig:
    base = dict(
        m=args.m,
        window_length=args.window,
        split_basis=args.split_basis,
        lemmatizer=args.lemmatizer,
        seed=args.seed,
        random_offset=args.random_offset,
        min_fit_points=args.min_fit_points,
        raw_region_fallback=args.raw_region_fallback,
        ridge=args.ridge,
        include_geodesic=args.with_geodesic,
        jobs=args.jobs,
        control_fraction=getattr(args, "control_fraction", 0.5),
        bootstrap_iterations=getattr(args, "iterations", 200),
    )
    base.update(overrides)
    return experiment.RunConfig(**base)


def _write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _fmt_opt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cmd_build_net(args) -> int:
    text = Path(args.text).read_text(encoding="utf-8")
    stream = make_stream(text, Path(args.text).stem, lemmatizer=args.lemmatizer)
    net = build_network(stream, args.m)
    if args.out:
        Path(args.out).write_text(
            "\n".join(edge_list_lines(net)) + "\n", encoding="utf-8"
        )
    print(
        f"vertices={net.n_vertices} words={net.n_words} edges={edge_count(net)} m={net.m}"
    )
    return EXIT_OK


def _dump_distributions(net, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    dd = degree_distribution(net)
    pk = "\n".join(f"{k}\t{v}" for k, v in dd.points())
    (out_dir / f"{net.source_id}_pk.txt").write_text(pk + "\n", encoding="utf-8")
    cbd = clustering_by_degree(net)
    ck = "\n".join(f"{k}\t{repr(v)}" for k, v in cbd.points())
    (out_dir / f"{net.source_id}_ck.txt").write_text(ck + "\n", encoding="utf-8")


def cmd_features(args) -> int:
    config = _config_from_args(args)
    manifest = load_manifest(args.manifest)
    rows = experiment.compute_features(manifest, config)
    write_feature_csv(args.out, rows, config.echo())
    n_failed = sum(1 for r in rows if not r.ok)
    print(f"wrote {len(rows)} rows to {args.out} ({n_failed} failed)")
    if args.dump_distributions:
        from .corpus import SampleWindow, choose_window_start, extract_window

        for entry in manifest.entries:
            try:
                stream = make_stream(entry.read_text(), entry.id, lemmatizer=config.lemmatizer)
                if config.window_length > 0:
                    start = choose_window_start(
                        stream.n_words, config.window_length, entry.id,
                        config.seed, config.random_offset,
                    )
                    stream = extract_window(
                        stream, SampleWindow(entry.id, start, config.window_length)
                    )
                _dump_distributions(build_network(stream, config.m), Path(args.dump_distributions))
            except StorynetError as exc:
                log.warning("no distribution dump for %s: %s", entry.id, exc)
    return EXIT_OK


def cmd_train(args) -> int:
    rows = []
    for path in args.features:
        _, part = read_feature_csv(path)
        rows.extend(part)
    config = experiment.RunConfig(ridge=args.ridge, seed=args.seed)
    model = experiment.train_from_rows(rows, config)
    save_model(args.out, model)
    print(f"trained on {sum(1 for r in rows if r.ok)} samples; plane: {separating_plane(model)}")
    return EXIT_OK


def cmd_classify(args) -> int:
    model = load_model(args.model)
    _, rows = read_feature_csv(args.features)
    lines = []
    for row in rows:
        if row.ok:
            lines.append(f"{row.sample_id},{classify_point(model, row.features())}")
        else:
            lines.append(f"{row.sample_id},NA")
            log.warning("sample %s has no features: %s", row.sample_id, row.error)
    text = "\n".join(lines)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_eval(args) -> int:
    model = load_model(args.model)
    _, rows = read_feature_csv(args.features)
    usable = [r for r in rows if r.ok]
    labeled = [(r.features(), r.label) for r in usable]
    accuracy = evaluate(model, labeled)
    payload = {
        "accuracy": accuracy,
        "n_samples": {lab: sum(1 for r in usable if r.label == lab) for lab in model.labels},
        "failed_samples": [r.sample_id for r in rows if not r.ok],
        "separating_plane": separating_plane(model),
        "model_config": model.config,
        "bootstrap": None,
        "seed": args.seed,
    }
    if args.iterations > 0:
        per_label = {lab: sum(1 for r in usable if r.label == lab) for lab in model.labels}
        subset = max(2, int(args.control_fraction * min(per_label.values())))
        report = bootstrap_accuracy(
            labeled, subset_size=subset, iterations=args.iterations,
            seed=args.seed, ridge=args.ridge,
        )
        payload["bootstrap"] = report.to_dict()
    if args.out:
        _write_json(args.out, payload)
    for lab in sorted(accuracy):
        print(f"accuracy[{lab}] = {accuracy[lab]:.3f}")
    return EXIT_OK


def _write_sweep_csv(path, parameter, points, labels, config) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        writer = csv.writer(fh)
        header = [parameter]
        for lab in labels:
            header += [f"accuracy_{lab}", f"error_{lab}"]
        header += ["n_failed", "error"]
        writer.writerow(header)
        for pt in points:
            row = [pt.value]
            for lab in labels:
                row.append(_fmt_opt(pt.mean_accuracy.get(lab)))
                row.append(_fmt_opt(pt.error.get(lab)))
            row += [pt.n_failed, pt.failure]
            writer.writerow(row)


def _run_sweep(args, parameter: str, values: list[int]) -> int:
    config = _config_from_args(args)
    manifest = load_manifest(args.manifest)
    labels = sorted({e.label for e in manifest.entries})
    points = experiment.sweep(manifest, config, parameter, values)
    _write_sweep_csv(args.out, parameter, points, labels, config.echo())
    for pt in points:
        if pt.failure:
            print(f"{parameter}={pt.value}: failed ({pt.failure})")
        else:
            acc = ", ".join(
                f"{lab}={pt.mean_accuracy[lab]:.3f}±{pt.error[lab]:.3f}" for lab in labels
            )
            print(f"{parameter}={pt.value}: {acc} [{pt.n_failed} samples failed]")
    return EXIT_OK


def cmd_sweep_m(args) -> int:
    return _run_sweep(args, "m", args.m_list)


def cmd_sweep_length(args) -> int:
    return _run_sweep(args, "window_length", args.lengths)


def cmd_baseline_zipf(args) -> int:
    config = _config_from_args(args)
    manifest = load_manifest(args.manifest)
    report = experiment.run_zipf_baseline(manifest, config)
    if args.out:
        _write_json(args.out, report.to_dict())
    for lab in report.labels:
        print(
            f"zipf accuracy[{lab}]: mean-midpoint={report.accuracy_mean_midpoint[lab]:.3f} "
            f"median-midpoint={report.accuracy_median_midpoint[lab]:.3f}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="storynet", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-net", help="dump one text's co-occurrence network")
    p.add_argument("text", help="UTF-8 text file")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--lemmatizer", choices=("stemmer", "identity"), default="stemmer")
    p.add_argument("--out", help="edge-list output path")
    p.set_defaults(func=cmd_build_net)

    p = sub.add_parser("features", help="feature CSV for every manifest sample")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-distributions", help="directory for per-sample P(k)/C(k) dumps")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train the discriminant from feature CSVs")
    p.add_argument("--features", nargs="+", required=True)
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label each feature row with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="per-category accuracy of a model on a feature CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", help="report JSON path")
    p.add_argument("--iterations", type=int, default=0, help="bootstrap iterations (0 = off)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--control-fraction", type=float, default=0.5, dest="control_fraction")
    p.add_argument("--ridge", type=float, default=0.0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep-m", help="accuracy as a function of word distance")
    p.add_argument("--manifest", required=True)
    p.add_argument("--m-list", type=_int_list, required=True, dest="m_list")
    p.add_argument("--out", required=True)
    p.add_argument("--iterations", type=int, default=200)
    p.add_argument("--control-fraction", type=float, default=0.5, dest="control_fraction")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_sweep_m)

    p = sub.add_parser("sweep-length", help="accuracy as a function of window length")
    p.add_argument("--manifest", required=True)
    p.add_argument("--lengths", type=_int_list, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--iterations", type=int, default=200)
    p.add_argument("--control-fraction", type=float, default=0.5, dest="control_fraction")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_sweep_length)

    p = sub.add_parser("baseline-zipf", help="word-frequency baseline accuracy report")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", help="report JSON path")
    p.add_argument("--iterations", type=int, default=200)
    p.add_argument("--control-fraction", type=float, default=0.5, dest="control_fraction")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_baseline_zipf)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if getattr(args, "m", 1) < 1:
            return _usage_error("--m must be >= 1")
        if getattr(args, "window", 1) < 0:
            return _usage_error("--window must be >= 0")
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        return _usage_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
