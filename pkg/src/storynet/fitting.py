"""Power-law fitting and the three-exponent feature vector.

The degree distribution of a co-occurrence network oscillates with period
2m (an artifact of how edges accumulate per occurrence), so it is smoothed
with fixed-width running-average bins before fitting. Two separate
power laws are fitted on either side of the break at sqrt(N), and a third
to the clustering-by-degree curve. The exponents (gamma1, gamma2, gamma3)
form the per-sample feature vector used by the classifier.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FitError, RegionFitError
from .measures import clustering_by_degree, degree_distribution, mean_geodesic
from .semnet import SemanticNetwork

__all__ = [
    "BinnedSeries",
    "PowerLawFit",
    "FeatureVector",
    "FeatureOptions",
    "FeatureRow",
    "bin_running_average",
    "fit_power_law",
    "split_regions",
    "extract_feature_fits",
    "extract_features",
    "write_feature_csv",
    "read_feature_csv",
    "FEATURE_CSV_HEADER",
]

log = logging.getLogger(__name__)

FEATURE_CSV_HEADER = [
    "id",
    "label",
    "gamma1",
    "gamma2",
    "gamma3",
    "l",
    "n_vertices",
    "n_words",
    "m",
    "error",
]


@dataclass(frozen=True)
class BinnedSeries:
    """Averaged (k_center, value) points over consecutive k-intervals."""

    points: tuple[tuple[float, float], ...]
    bin_width: int


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line on log-log axes: value = amplitude * k**(-gamma)."""

    gamma: float
    amplitude: float
    k_range: tuple[float, float]
    n_points: int
    quality: float  # reduced chi-squared of the log-log residuals


@dataclass(frozen=True)
class FeatureVector:
    sample_id: str
    gamma1: float
    gamma2: float
    gamma3: float
    n_vertices: int
    n_words: int
    mean_geodesic: float | None = None


@dataclass(frozen=True)
class FeatureOptions:
    """Knobs for feature extraction.

    split_basis chooses what N means in the sqrt(N) region break: the
    vertex count ("vertices") or the window word count ("words").
    raw_region_fallback retries a degenerate region on unbinned points,
    which keeps very short windows usable in length sweeps.
    """

    split_basis: str = "vertices"
    min_fit_points: int = 3
    raw_region_fallback: bool = False
    include_geodesic: bool = False
    bin_width: int | None = None  # None means 2m

    def __post_init__(self) -> None:
        if self.split_basis not in ("vertices", "words"):
            raise ValueError(f"split_basis must be 'vertices' or 'words', got {self.split_basis!r}")
        if self.min_fit_points < 2:
            raise ValueError("min_fit_points must be >= 2")


def bin_running_average(
    raw: Iterable[tuple[float, float]], bin_width: int, origin: float | None = None
) -> BinnedSeries:
    """Average values over consecutive k-intervals of fixed width.

    Intervals are anchored at ``origin`` (the smallest k present when not
    given); each produced point is (interval midpoint, mean of values
    falling in the interval), and empty intervals produce nothing. Degree
    distributions are binned with origin 1 so the intervals read
    [1, w], [w+1, 2w], ... regardless of the lowest degree observed.
    """
    pts = list(raw)
    if not pts:
        raise ValueError("cannot bin an empty series")
    if bin_width < 1:
        raise ValueError(f"bin width must be >= 1, got {bin_width}")
    anchor = min(k for k, _ in pts) if origin is None else origin
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for k, v in pts:
        idx = math.floor((k - anchor) / bin_width)
        sums[idx] = sums.get(idx, 0.0) + v
        counts[idx] = counts.get(idx, 0) + 1
    out = tuple(
        (anchor + idx * bin_width + (bin_width - 1) / 2, sums[idx] / counts[idx])
        for idx in sorted(sums)
    )
    return BinnedSeries(points=out, bin_width=bin_width)


def fit_power_law(
    series: BinnedSeries | Sequence[tuple[float, float]],
    k_range: tuple[float, float] | None = None,
    min_points: int = 3,
) -> PowerLawFit:
    """Ordinary least squares on (log k, log value).

    Only points with k > 0 and value > 0 inside k_range participate.
    gamma is the negated slope and amplitude the exponentiated intercept.
    The reduced chi-squared uses unit weights in log space; an exact fit
    with no spare degrees of freedom reports 0.
    """
    pts = series.points if isinstance(series, BinnedSeries) else tuple(series)
    lo, hi = k_range if k_range is not None else (-math.inf, math.inf)
    used = [(k, v) for k, v in pts if k > 0 and v > 0 and lo <= k <= hi]
    if len(used) < max(2, min_points):
        raise FitError(
            f"power-law fit needs at least {max(2, min_points)} positive points, "
            f"got {len(used)}"
        )
    xs = [math.log(k) for k, _ in used]
    ys = [math.log(v) for _, v in used]
    n = len(used)
    x_bar = sum(xs) / n
    y_bar = sum(ys) / n
    sxx = sum((x - x_bar) ** 2 for x in xs)
    if sxx == 0.0:
        raise FitError("all points share one k value; slope is undefined")
    sxy = sum((x - x_bar) * (y - y_bar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar
    chi2 = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    quality = chi2 / (n - 2) if n > 2 else 0.0
    return PowerLawFit(
        gamma=-slope,
        amplitude=math.exp(intercept),
        k_range=(min(k for k, _ in used), max(k for k, _ in used)),
        n_points=n,
        quality=quality,
    )


def _fit_region(
    name: str,
    binned_pts: list[tuple[float, float]],
    raw_pts: list[tuple[float, float]],
    options: FeatureOptions,
) -> PowerLawFit:
    try:
        return fit_power_law(binned_pts, min_points=options.min_fit_points)
    except FitError as exc:
        if options.raw_region_fallback:
            try:
                fit = fit_power_law(raw_pts, min_points=options.min_fit_points)
                log.debug("%s: binned fit degenerate, used %d raw points", name, fit.n_points)
                return fit
            except FitError as raw_exc:
                raise RegionFitError(name, str(raw_exc)) from raw_exc
        raise RegionFitError(name, str(exc)) from exc


def split_regions(
    points: Sequence[tuple[float, float]], boundary: float
) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    """Partition points at the region boundary; the boundary itself goes up."""
    lo = [p for p in points if p[0] < boundary]
    hi = [p for p in points if p[0] >= boundary]
    return lo, hi


def extract_feature_fits(
    net: SemanticNetwork, options: FeatureOptions | None = None
) -> dict[str, PowerLawFit]:
    """The three per-network power-law fits, keyed by exponent name.

    The degree distribution is binned at width 2m, split at sqrt(N) with
    the boundary point assigned to the upper region, and each side fitted
    separately. The clustering fit uses the unbinned per-degree means,
    positive values only, so no logarithm ever sees a non-positive value.
    """
    opts = options or FeatureOptions()
    width = opts.bin_width if opts.bin_width is not None else 2 * net.m

    dist = degree_distribution(net)
    raw = [(float(k), float(c)) for k, c in dist.points()]
    binned = bin_running_average(raw, width, origin=1.0)

    basis = net.n_vertices if opts.split_basis == "vertices" else net.n_words
    split = math.sqrt(basis)

    binned_lo, binned_hi = split_regions(binned.points, split)
    raw_lo, raw_hi = split_regions(raw, split)

    fit1 = _fit_region("gamma1", binned_lo, raw_lo, opts)
    fit2 = _fit_region("gamma2", binned_hi, raw_hi, opts)

    cbd = clustering_by_degree(net)
    c_pts = [(float(k), c) for k, c in cbd.points() if c > 0]
    try:
        fit3 = fit_power_law(c_pts, min_points=opts.min_fit_points)
    except FitError as exc:
        raise RegionFitError("gamma3", str(exc)) from exc

    log.debug(
        "features %s: split=%.2f fit points g1=%d g2=%d g3=%d chi2=(%.3g, %.3g, %.3g)",
        net.source_id, split, fit1.n_points, fit2.n_points, fit3.n_points,
        fit1.quality, fit2.quality, fit3.quality,
    )
    return {"gamma1": fit1, "gamma2": fit2, "gamma3": fit3}


def extract_features(net: SemanticNetwork, options: FeatureOptions | None = None) -> FeatureVector:
    """Compute the (gamma1, gamma2, gamma3) feature vector for one network."""
    opts = options or FeatureOptions()
    fits = extract_feature_fits(net, opts)
    geodesic = mean_geodesic(net).mean_geodesic if opts.include_geodesic else None
    return FeatureVector(
        sample_id=net.source_id,
        gamma1=fits["gamma1"].gamma,
        gamma2=fits["gamma2"].gamma,
        gamma3=fits["gamma3"].gamma,
        n_vertices=net.n_vertices,
        n_words=net.n_words,
        mean_geodesic=geodesic,
    )


@dataclass
class FeatureRow:
    """One line of the feature CSV; failed samples carry an error message."""

    sample_id: str
    label: str
    m: int
    gamma1: float | None = None
    gamma2: float | None = None
    gamma3: float | None = None
    mean_geodesic: float | None = None
    n_vertices: int | None = None
    n_words: int | None = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.error == ""

    def features(self) -> tuple[float, float, float]:
        if not self.ok:
            raise ValueError(f"sample {self.sample_id} has no features: {self.error}")
        return (self.gamma1, self.gamma2, self.gamma3)

    @classmethod
    def from_vector(cls, vec: FeatureVector, label: str, m: int) -> "FeatureRow":
        return cls(
            sample_id=vec.sample_id,
            label=label,
            m=m,
            gamma1=vec.gamma1,
            gamma2=vec.gamma2,
            gamma3=vec.gamma3,
            mean_geodesic=vec.mean_geodesic,
            n_vertices=vec.n_vertices,
            n_words=vec.n_words,
        )


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(value)


def write_feature_csv(path: str | Path, rows: Iterable[FeatureRow], config: dict | None = None) -> None:
    """Write the feature interchange CSV, preceded by a config-echo comment."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        if config is not None:
            fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        writer = csv.writer(fh)
        writer.writerow(FEATURE_CSV_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.sample_id,
                    row.label,
                    _fmt(row.gamma1),
                    _fmt(row.gamma2),
                    _fmt(row.gamma3),
                    _fmt(row.mean_geodesic),
                    _fmt(row.n_vertices),
                    _fmt(row.n_words),
                    str(row.m),
                    row.error,
                ]
            )


def read_feature_csv(path: str | Path) -> tuple[dict | None, list[FeatureRow]]:
    """Read rows back; returns (config echo or None, rows)."""
    path = Path(path)
    config = None
    rows: list[FeatureRow] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        first = fh.readline()
        if first.startswith("# config:"):
            config = json.loads(first.split(":", 1)[1])
        else:
            fh.seek(0)
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                FeatureRow(
                    sample_id=rec["id"],
                    label=rec["label"],
                    m=int(rec["m"]),
                    gamma1=float(rec["gamma1"]) if rec["gamma1"] else None,
                    gamma2=float(rec["gamma2"]) if rec["gamma2"] else None,
                    gamma3=float(rec["gamma3"]) if rec["gamma3"] else None,
                    mean_geodesic=float(rec["l"]) if rec["l"] else None,
                    n_vertices=int(rec["n_vertices"]) if rec["n_vertices"] else None,
                    n_words=int(rec["n_words"]) if rec["n_words"] else None,
                    error=rec.get("error", "") or "",
                )
            )
    return config, rows
