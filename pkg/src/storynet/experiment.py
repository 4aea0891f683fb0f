"""End-to-end experiment runs: feature tables, training, sweeps, baselines.

Everything here is deterministic for a fixed config and seed. Per-sample
failures (short texts, degenerate fits) are recorded on the affected row
and never abort a batch; downstream training simply skips those rows.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .classify import (
    BootstrapReport,
    DiscriminantModel,
    bootstrap_accuracy,
    evaluate,
    midpoint_variant,
    separating_plane,
    train_discriminant,
    zipf_exponent,
)
from .corpus import (
    CorpusManifest,
    ManifestEntry,
    SampleWindow,
    choose_window_start,
    extract_window,
    split_control_eval,
)
from .errors import DataError, StorynetError
from .fitting import FeatureOptions, FeatureRow, extract_features
from .measures import mean_geodesic, small_world_check
from .semnet import build_network
from .tokenizer import make_stream

__all__ = [
    "RunConfig",
    "compute_features",
    "featurize_entry",
    "train_from_rows",
    "run_classification",
    "run_zipf_baseline",
    "sweep",
    "SweepPoint",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """All knobs of a pipeline run, echoed into every output file."""

    m: int = 4
    window_length: int = 500  # 0 means the whole text
    split_basis: str = "vertices"
    lemmatizer: str = "stemmer"
    seed: int = 0
    control_fraction: float = 0.5
    bootstrap_iterations: int = 200
    random_offset: bool = False
    min_fit_points: int = 3
    raw_region_fallback: bool = False
    ridge: float = 0.0
    include_geodesic: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.window_length < 0:
            raise ValueError("window length must be >= 0")
        if not 0.0 < self.control_fraction < 1.0:
            raise ValueError("control fraction must be in (0, 1)")

    def echo(self) -> dict:
        return dataclasses.asdict(self)

    def feature_options(self) -> FeatureOptions:
        return FeatureOptions(
            split_basis=self.split_basis,
            min_fit_points=self.min_fit_points,
            raw_region_fallback=self.raw_region_fallback,
            include_geodesic=self.include_geodesic,
        )


def featurize_entry(entry: ManifestEntry, config: RunConfig) -> FeatureRow:
    """Text file -> window -> network -> exponents, as one feature row.

    Any domain failure lands in the row's error field instead of raising.
    """
    try:
        stream = make_stream(entry.read_text(), entry.id, lemmatizer=config.lemmatizer)
        if config.window_length > 0:
            start = choose_window_start(
                stream.n_words,
                config.window_length,
                entry.id,
                config.seed,
                config.random_offset,
            )
            stream = extract_window(
                stream, SampleWindow(entry.id, start, config.window_length)
            )
        net = build_network(stream, config.m)
        vec = extract_features(net, config.feature_options())
        return FeatureRow.from_vector(vec, entry.label, config.m)
    except StorynetError as exc:
        log.debug("sample %s failed: %s", entry.id, exc)
        return FeatureRow(sample_id=entry.id, label=entry.label, m=config.m, error=str(exc))


def _featurize_star(args: tuple[ManifestEntry, RunConfig]) -> FeatureRow:
    return featurize_entry(*args)


def compute_features(manifest: CorpusManifest, config: RunConfig) -> list[FeatureRow]:
    """Feature rows for every manifest entry, sorted by sample id."""
    if config.jobs > 1 and len(manifest) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_featurize_star, [(e, config) for e in manifest.entries]))
    else:
        rows = [featurize_entry(e, config) for e in manifest.entries]
    return sorted(rows, key=lambda r: r.sample_id)


def _rows_by_label(rows: list[FeatureRow]) -> dict[str, list[FeatureRow]]:
    ok = [r for r in rows if r.ok]
    grouped: dict[str, list[FeatureRow]] = {}
    for r in ok:
        grouped.setdefault(r.label, []).append(r)
    return grouped


def train_from_rows(
    rows: list[FeatureRow], config: RunConfig, labels: tuple[str, str] | None = None
) -> DiscriminantModel:
    """Train the discriminant on the usable rows of a feature table."""
    grouped = _rows_by_label(rows)
    if labels is None:
        if len(grouped) != 2:
            raise DataError(
                f"training needs exactly 2 labels, feature table has {sorted(grouped)}"
            )
        labels = tuple(sorted(grouped))
    for lab in labels:
        if len(grouped.get(lab, [])) < 2:
            raise DataError(f"category {lab!r} has too few usable samples to train")
    g1 = [r.features() for r in grouped[labels[0]]]
    g2 = [r.features() for r in grouped[labels[1]]]
    return train_discriminant(
        g1,
        g2,
        labels=labels,
        ridge=config.ridge,
        feature_names=("gamma1", "gamma2", "gamma3"),
        config=config.echo(),
    )


@dataclass
class ClassificationReport:
    labels: tuple[str, str]
    accuracy: dict[str, float]
    plane: str
    n_control: dict[str, int]
    n_eval: dict[str, int]
    failed: list[str]
    bootstrap: BootstrapReport | None
    config: dict

    def to_dict(self) -> dict:
        out = {
            "labels": list(self.labels),
            "accuracy": self.accuracy,
            "separating_plane": self.plane,
            "n_control": self.n_control,
            "n_eval": self.n_eval,
            "failed_samples": self.failed,
            "config": self.config,
        }
        out["bootstrap"] = self.bootstrap.to_dict() if self.bootstrap else None
        return out


def run_classification(
    manifest: CorpusManifest,
    config: RunConfig,
    rows: list[FeatureRow] | None = None,
    with_bootstrap: bool = True,
) -> ClassificationReport:
    """Split, train on control features, evaluate on the held-out rest.

    Also bootstraps the full usable pool for error bars when asked.
    """
    if rows is None:
        rows = compute_features(manifest, config)
    control_manifest, eval_manifest = split_control_eval(
        manifest, config.control_fraction, config.seed
    )
    control_ids = {e.id for e in control_manifest.entries}
    eval_ids = {e.id for e in eval_manifest.entries}
    control_rows = [r for r in rows if r.ok and r.sample_id in control_ids]
    eval_rows = [r for r in rows if r.ok and r.sample_id in eval_ids]
    failed = [r.sample_id for r in rows if not r.ok]

    model = train_from_rows(control_rows, config)
    labels = model.labels
    accuracy = evaluate(model, [(r.features(), r.label) for r in eval_rows])

    report_bootstrap = None
    if with_bootstrap:
        pool = [(r.features(), r.label) for r in rows if r.ok]
        per_label = _rows_by_label(rows)
        smallest = min(len(v) for v in per_label.values())
        subset = max(2, int(config.control_fraction * smallest))
        report_bootstrap = bootstrap_accuracy(
            pool,
            subset_size=subset,
            iterations=config.bootstrap_iterations,
            seed=config.seed,
            ridge=config.ridge,
        )

    def _count(rs: list[FeatureRow]) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in rs:
            out[r.label] = out.get(r.label, 0) + 1
        return out

    return ClassificationReport(
        labels=labels,
        accuracy={lab: accuracy.get(lab, 0.0) for lab in labels},
        plane=separating_plane(model),
        n_control=_count(control_rows),
        n_eval=_count(eval_rows),
        failed=failed,
        bootstrap=report_bootstrap,
        config=config.echo(),
    )


@dataclass
class ZipfReport:
    labels: tuple[str, str]
    accuracy_mean_midpoint: dict[str, float]
    accuracy_median_midpoint: dict[str, float]
    failed: list[str]
    bootstrap: BootstrapReport | None
    config: dict

    def to_dict(self) -> dict:
        out = {
            "labels": list(self.labels),
            "accuracy_mean_midpoint": self.accuracy_mean_midpoint,
            "accuracy_median_midpoint": self.accuracy_median_midpoint,
            "failed_samples": self.failed,
            "config": self.config,
        }
        out["bootstrap"] = self.bootstrap.to_dict() if self.bootstrap else None
        return out


def zipf_exponent_rows(
    manifest: CorpusManifest, config: RunConfig
) -> list[tuple[str, str, float | None, str]]:
    """(id, label, exponent or None, error) for each entry."""
    out: list[tuple[str, str, float | None, str]] = []
    for entry in manifest.entries:
        try:
            stream = make_stream(entry.read_text(), entry.id, lemmatizer=config.lemmatizer)
            if config.window_length > 0:
                start = choose_window_start(
                    stream.n_words,
                    config.window_length,
                    entry.id,
                    config.seed,
                    config.random_offset,
                )
                stream = extract_window(
                    stream, SampleWindow(entry.id, start, config.window_length)
                )
            out.append((entry.id, entry.label, zipf_exponent(stream), ""))
        except StorynetError as exc:
            out.append((entry.id, entry.label, None, str(exc)))
    return sorted(out, key=lambda t: t[0])


def run_zipf_baseline(
    manifest: CorpusManifest, config: RunConfig, with_bootstrap: bool = True
) -> ZipfReport:
    """Word-frequency baseline: 1-D discriminant on rank-frequency exponents.

    Reports both midpoint variants because a skewed exponent distribution
    moves the mean midpoint off-center.
    """
    samples = zipf_exponent_rows(manifest, config)
    failed = [sid for sid, _, exp, _ in samples if exp is None]
    usable = [(sid, lab, exp) for sid, lab, exp, _ in samples if exp is not None]

    labels = tuple(sorted({lab for _, lab, _ in usable}))
    if len(labels) != 2:
        raise DataError(f"baseline needs exactly 2 labels, got {list(labels)}")

    control_manifest, eval_manifest = split_control_eval(
        manifest, config.control_fraction, config.seed
    )
    control_ids = {e.id for e in control_manifest.entries}
    g1 = [[exp] for sid, lab, exp in usable if lab == labels[0] and sid in control_ids]
    g2 = [[exp] for sid, lab, exp in usable if lab == labels[1] and sid in control_ids]
    if len(g1) < 2 or len(g2) < 2:
        raise DataError("too few usable control samples for the baseline")

    model = train_discriminant(
        g1, g2, labels=labels, ridge=config.ridge,
        feature_names=("zipf_exponent",), config=config.echo(),
    )
    eval_pts = [
        ([exp], lab) for sid, lab, exp in usable if sid not in control_ids
    ]
    acc_mean = evaluate(model, eval_pts)
    w_median = midpoint_variant(model, "median", g1, g2)
    acc_median = evaluate(model, eval_pts, w=w_median)

    report_bootstrap = None
    if with_bootstrap:
        pool = [([exp], lab) for _, lab, exp in usable]
        smallest = min(sum(1 for _, lab, _ in usable if lab == l) for l in labels)
        subset = max(2, int(config.control_fraction * smallest))
        report_bootstrap = bootstrap_accuracy(
            pool,
            subset_size=subset,
            iterations=config.bootstrap_iterations,
            seed=config.seed,
            ridge=config.ridge,
        )

    return ZipfReport(
        labels=labels,
        accuracy_mean_midpoint={lab: acc_mean.get(lab, 0.0) for lab in labels},
        accuracy_median_midpoint={lab: acc_median.get(lab, 0.0) for lab in labels},
        failed=failed,
        bootstrap=report_bootstrap,
        config=config.echo(),
    )


@dataclass
class SweepPoint:
    """One sweep row: a parameter value with its bootstrapped accuracies."""

    value: int
    mean_accuracy: dict[str, float]
    error: dict[str, float]
    n_failed: int
    failure: str = ""


def sweep(
    manifest: CorpusManifest,
    config: RunConfig,
    parameter: str,
    values: list[int],
) -> list[SweepPoint]:
    """Bootstrap-backed accuracy across m values or window lengths.

    Sweeps force min_fit_points=2 and the raw-region fallback: short
    windows and wide bins otherwise leave a region with too few points to
    fit at all, and a sweep exists precisely to probe those regimes.
    """
    if parameter not in ("m", "window_length"):
        raise ValueError(f"unknown sweep parameter {parameter!r}")
    points: list[SweepPoint] = []
    for value in values:
        cfg = dataclasses.replace(
            config,
            min_fit_points=2,
            raw_region_fallback=True,
            **{parameter: value},
        )
        try:
            rows = compute_features(manifest, cfg)
            pool = [(r.features(), r.label) for r in rows if r.ok]
            grouped = _rows_by_label(rows)
            if len(grouped) != 2:
                raise DataError(
                    f"usable samples cover {len(grouped)} categories, need 2"
                )
            smallest = min(len(v) for v in grouped.values())
            subset = max(2, int(cfg.control_fraction * smallest))
            report = bootstrap_accuracy(
                pool,
                subset_size=subset,
                iterations=cfg.bootstrap_iterations,
                seed=cfg.seed,
                ridge=cfg.ridge,
            )
            points.append(
                SweepPoint(
                    value=value,
                    mean_accuracy=report.mean_accuracy,
                    error=report.error,
                    n_failed=sum(1 for r in rows if not r.ok),
                )
            )
        except StorynetError as exc:
            log.warning("sweep point %s=%s failed: %s", parameter, value, exc)
            points.append(
                SweepPoint(
                    value=value, mean_accuracy={}, error={}, n_failed=len(manifest),
                    failure=str(exc),
                )
            )
    return points


def small_world_ratios(manifest: CorpusManifest, config: RunConfig) -> dict[str, float]:
    """l / log10(N) for every sample network (diagnostic for the run)."""
    ratios: dict[str, float] = {}
    for entry in manifest.entries:
        stream = make_stream(entry.read_text(), entry.id, lemmatizer=config.lemmatizer)
        if config.window_length > 0:
            start = choose_window_start(
                stream.n_words, config.window_length, entry.id,
                config.seed, config.random_offset,
            )
            stream = extract_window(stream, SampleWindow(entry.id, start, config.window_length))
        net = build_network(stream, config.m)
        ratios[entry.id] = small_world_check(mean_geodesic(net)).ratio
    return ratios
