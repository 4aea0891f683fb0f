"""Two-group linear discriminant over feature vectors.

Training follows the classic pooled-covariance construction: project an
observation x0 onto d = S_pooled^-1 (mean1 - mean2) and compare the scalar
y0 = d . x0 against the midpoint w; y0 >= w assigns group 1. Errors on
evaluation accuracy come from resampling the control pool.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, SingularCovarianceError
from .fitting import fit_power_law
from .tokenizer import TokenStream

__all__ = [
    "DiscriminantModel",
    "BootstrapReport",
    "pooled_covariance",
    "train_discriminant",
    "project",
    "classify",
    "evaluate",
    "midpoint_variant",
    "bootstrap_accuracy",
    "zipf_exponent",
    "separating_plane",
    "save_model",
    "load_model",
]


def _as_matrix(group) -> np.ndarray:
    x = np.asarray(group, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise ValueError(f"expected a (n, d) array of observations, got shape {x.shape}")
    return x


def pooled_covariance(group1, group2) -> np.ndarray:
    """Within-group scatter of both groups over n1 + n2 - 2."""
    x1 = _as_matrix(group1)
    x2 = _as_matrix(group2)
    if x1.shape[1] != x2.shape[1]:
        raise ValueError(f"feature dimensions differ: {x1.shape[1]} vs {x2.shape[1]}")
    n1, n2 = x1.shape[0], x2.shape[0]
    if n1 + n2 < 3:
        raise ValueError("need at least 3 observations across both groups")
    c1 = x1 - x1.mean(axis=0)
    c2 = x2 - x2.mean(axis=0)
    return (c1.T @ c1 + c2.T @ c2) / (n1 + n2 - 2)


@dataclass(frozen=True)
class DiscriminantModel:
    direction: np.ndarray
    w: float
    mean1: np.ndarray
    mean2: np.ndarray
    labels: tuple[str, str]
    dispersions: np.ndarray
    feature_names: tuple[str, ...] = ("gamma1", "gamma2", "gamma3")
    config: dict = field(default_factory=dict)


def train_discriminant(
    group1,
    group2,
    labels: tuple[str, str] = ("group1", "group2"),
    ridge: float = 0.0,
    condition_limit: float = 1e12,
    feature_names: Sequence[str] | None = None,
    config: dict | None = None,
) -> DiscriminantModel:
    """Fit the discriminant direction and midpoint from two control groups.

    The pooled covariance is solved against (mean1 - mean2) rather than
    inverted. Ill-conditioned systems fail loudly with the condition
    number; a ridge term lambda*I can be supplied to push through
    degenerate control sets.
    """
    x1 = _as_matrix(group1)
    x2 = _as_matrix(group2)
    s = pooled_covariance(x1, x2)
    if ridge:
        s = s + ridge * np.eye(s.shape[0])
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or cond > condition_limit:
        raise SingularCovarianceError(
            f"pooled covariance is singular or ill-conditioned (cond={cond:.3g}, "
            f"ridge={ridge}); pass a positive ridge to regularize"
        )
    mean1 = x1.mean(axis=0)
    mean2 = x2.mean(axis=0)
    direction = np.linalg.solve(s, mean1 - mean2)
    w = 0.5 * float(direction @ (mean1 + mean2))
    dispersions = np.std(np.vstack([x1, x2]), axis=0, ddof=1)
    if feature_names is None:
        feature_names = tuple(f"f{i + 1}" for i in range(s.shape[0]))
    return DiscriminantModel(
        direction=direction,
        w=w,
        mean1=mean1,
        mean2=mean2,
        labels=tuple(labels),
        dispersions=dispersions,
        feature_names=tuple(feature_names),
        config=dict(config or {}),
    )


def project(model: DiscriminantModel, x0) -> float:
    """Scalar image y0 = direction . x0."""
    x = np.asarray(x0, dtype=np.float64).reshape(-1)
    if x.shape[0] != model.direction.shape[0]:
        raise ValueError(
            f"dimension mismatch: model is {model.direction.shape[0]}-d, point is {x.shape[0]}-d"
        )
    return float(model.direction @ x)


def classify(model: DiscriminantModel, x0, w: float | None = None) -> str:
    """Group label for one observation; the boundary belongs to group 1."""
    midpoint = model.w if w is None else w
    return model.labels[0] if project(model, x0) >= midpoint else model.labels[1]


def evaluate(
    model: DiscriminantModel,
    labeled: Iterable[tuple[Sequence[float], str]],
    w: float | None = None,
) -> dict[str, float]:
    """Per-category fraction of correct classifications."""
    correct: Counter[str] = Counter()
    total: Counter[str] = Counter()
    for x, label in labeled:
        if label not in model.labels:
            raise DataError(f"label {label!r} is not one of {model.labels}")
        total[label] += 1
        if classify(model, x, w=w) == label:
            correct[label] += 1
    if not total:
        raise DataError("nothing to evaluate")
    return {label: correct[label] / total[label] for label in total}


def midpoint_variant(model: DiscriminantModel, mode: str, group1, group2) -> float:
    """Midpoint from group means (the trained w) or from projection medians.

    The median variant is less sensitive to a skewed projection
    distribution in one of the groups.
    """
    if mode == "mean":
        return model.w
    if mode != "median":
        raise ValueError(f"mode must be 'mean' or 'median', got {mode!r}")
    x1 = _as_matrix(group1)
    x2 = _as_matrix(group2)
    if x1.shape[0] == 0 or x2.shape[0] == 0:
        raise ValueError("median midpoint needs non-empty groups")
    y1 = x1 @ model.direction
    y2 = x2 @ model.direction
    return 0.5 * (float(np.median(y1)) + float(np.median(y2)))


@dataclass(frozen=True)
class BootstrapReport:
    """Accuracy distribution over repeated random control subsets."""

    accuracies: dict[str, list[float]]
    mean_accuracy: dict[str, float]
    error: dict[str, float]  # twice the sample standard deviation
    iterations: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "mean_accuracy": self.mean_accuracy,
            "error_2sigma": self.error,
            "iterations": self.iterations,
            "seed": self.seed,
        }


def bootstrap_accuracy(
    pool: Sequence[tuple[Sequence[float], str]],
    subset_size: int,
    iterations: int,
    seed: int,
    ridge: float = 0.0,
    retrain: bool = True,
    with_replacement: bool = False,
) -> BootstrapReport:
    """Resample control sets and track per-category accuracy.

    Each iteration draws subset_size samples per category (without
    replacement unless asked otherwise), trains on them, and evaluates on
    the untouched remainder. Iteration i uses seed + i, so reports are
    reproducible and independent of scheduling.
    """
    if iterations < 2:
        raise ValueError("bootstrap needs at least 2 iterations")
    by_label: dict[str, list[np.ndarray]] = {}
    for x, label in pool:
        by_label.setdefault(label, []).append(np.asarray(x, dtype=np.float64).reshape(-1))
    if len(by_label) != 2:
        raise DataError(f"bootstrap needs exactly 2 categories, got {sorted(by_label)}")
    labels = tuple(sorted(by_label))
    groups = {lab: np.vstack(by_label[lab]) for lab in labels}
    for lab in labels:
        n = groups[lab].shape[0]
        if subset_size > n or (not with_replacement and subset_size >= n):
            raise DataError(
                f"category {lab!r} has {n} samples; cannot train on {subset_size} "
                "and still hold anything out"
            )

    fixed_model = None
    if not retrain:
        fixed_model = train_discriminant(
            groups[labels[0]], groups[labels[1]], labels=labels, ridge=ridge
        )

    accuracies: dict[str, list[float]] = {lab: [] for lab in labels}
    for i in range(iterations):
        rng = np.random.default_rng(seed + i)
        train_idx = {}
        eval_idx = {}
        for lab in labels:
            n = groups[lab].shape[0]
            if with_replacement:
                chosen = rng.choice(n, size=subset_size, replace=True)
            else:
                chosen = rng.permutation(n)[:subset_size]
            train_idx[lab] = chosen
            eval_idx[lab] = np.setdiff1d(np.arange(n), chosen)
        model = fixed_model
        if retrain:
            model = train_discriminant(
                groups[labels[0]][train_idx[labels[0]]],
                groups[labels[1]][train_idx[labels[1]]],
                labels=labels,
                ridge=ridge,
            )
        held_out = [
            (groups[lab][j], lab) for lab in labels for j in eval_idx[lab]
        ]
        result = evaluate(model, held_out)
        for lab in labels:
            accuracies[lab].append(result.get(lab, 0.0))

    mean_accuracy = {lab: float(np.mean(accuracies[lab])) for lab in labels}
    error = {lab: 2.0 * float(np.std(accuracies[lab], ddof=1)) for lab in labels}
    return BootstrapReport(
        accuracies=accuracies,
        mean_accuracy=mean_accuracy,
        error=error,
        iterations=iterations,
        seed=seed,
    )


def zipf_exponent(stream: TokenStream) -> float:
    """Power-law exponent of the lemma rank-frequency curve.

    Lemmas are ranked by descending frequency (ties broken alphabetically
    for determinism) and the same log-log least squares used for network
    distributions is fitted to (rank, frequency).
    """
    freqs = Counter(stream.lemmas())
    if len(freqs) < 3:
        raise DataError(
            f"rank-frequency fit needs at least 3 distinct lemmas, got {len(freqs)}"
        )
    ordered = sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0]))
    points = [(float(rank), float(count)) for rank, (_, count) in enumerate(ordered, start=1)]
    return fit_power_law(points, min_points=3).gamma


def separating_plane(model: DiscriminantModel, digits: int = 1) -> str:
    """Render the decision boundary in dispersion-normalized coordinates.

    Each feature is divided by its control-set standard deviation, so the
    plane reads  c1*f1' + c2*f2' + ... = w  with ci = direction_i * std_i.
    """
    coeffs = model.direction * model.dispersions
    terms = " + ".join(
        f"{c:.{digits}f}*{name}'" for c, name in zip(coeffs, model.feature_names)
    )
    return f"{terms} = {model.w:.{digits}f}"


def save_model(path: str | Path, model: DiscriminantModel) -> None:
    payload = {
        "direction": model.direction.tolist(),
        "w": model.w,
        "mean1": model.mean1.tolist(),
        "mean2": model.mean2.tolist(),
        "labels": list(model.labels),
        "dispersions": model.dispersions.tolist(),
        "feature_names": list(model.feature_names),
        "config": model.config,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> DiscriminantModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return DiscriminantModel(
        direction=np.asarray(payload["direction"], dtype=np.float64),
        w=float(payload["w"]),
        mean1=np.asarray(payload["mean1"], dtype=np.float64),
        mean2=np.asarray(payload["mean2"], dtype=np.float64),
        labels=tuple(payload["labels"]),
        dispersions=np.asarray(payload["dispersions"], dtype=np.float64),
        feature_names=tuple(payload["feature_names"]),
        config=payload.get("config", {}),
    )
