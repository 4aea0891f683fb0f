"""Discriminant training, projection, bootstrap, and the Zipf baseline."""

import math

import numpy as np
import pytest

from storynet.classify import (
    DiscriminantModel,
    bootstrap_accuracy,
    classify,
    evaluate,
    load_model,
    midpoint_variant,
    pooled_covariance,
    project,
    save_model,
    separating_plane,
    train_discriminant,
    zipf_exponent,
)
from storynet.errors import DataError, SingularCovarianceError
from storynet.tokenizer import stream_from_tokens

G1 = [[0.0], [1.0]]
G2 = [[4.0], [5.0]]


def oracle_pooled(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Direct double-sum of outer products, one observation at a time."""
    d = x1.shape[1]
    scatter = np.zeros((d, d))
    for group in (x1, x2):
        mean = group.mean(axis=0)
        for row in group:
            diff = (row - mean).reshape(-1, 1)
            scatter += diff @ diff.T
    return scatter / (x1.shape[0] + x2.shape[0] - 2)


class TestPooledCovariance:
    def test_hand_case(self):
        s = pooled_covariance(G1, G2)
        assert s.shape == (1, 1)
        assert s[0, 0] == pytest.approx(0.5, abs=1e-15)

    def test_matches_direct_summation(self):
        rng = np.random.default_rng(7)
        x1 = rng.normal(size=(12, 3))
        x2 = rng.normal(size=(9, 3))
        np.testing.assert_allclose(
            pooled_covariance(x1, x2), oracle_pooled(x1, x2), atol=1e-12
        )

    def test_degenerate_group_gives_zero_matrix(self):
        s = pooled_covariance([[1.0], [1.0]], [[2.0], [2.0]])
        assert s[0, 0] == 0.0
        with pytest.raises(SingularCovarianceError):
            train_discriminant([[1.0], [1.0]], [[2.0], [2.0]])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pooled_covariance([[1.0, 2.0]], [[1.0], [2.0]])


class TestTrainAndProject:
    def test_hand_fixture(self):
        model = train_discriminant(G1, G2)
        assert model.direction[0] == pytest.approx(-8.0)
        assert model.w == pytest.approx(-20.0)

    def test_projection_values(self):
        model = train_discriminant(G1, G2)
        assert project(model, [1.0]) == pytest.approx(-8.0)
        assert project(model, [0.0]) == 0.0
        assert project(model, [2.5]) == pytest.approx(model.w)

    def test_classification_fixture(self):
        model = train_discriminant(G1, G2, labels=("low", "high"))
        assert classify(model, [1.0]) == "low"
        assert classify(model, [4.5]) == "high"
        assert classify(model, [2.5]) == "low"  # boundary goes to group 1

    def test_group_means_classify_to_their_groups(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            x1 = rng.normal(0.0, 1.0, size=(10, 3))
            x2 = rng.normal(1.5, 1.0, size=(12, 3))
            model = train_discriminant(x1, x2, labels=("a", "b"))
            assert classify(model, x1.mean(axis=0)) == "a"
            assert classify(model, x2.mean(axis=0)) == "b"

    def test_swapping_groups_negates_everything(self):
        fwd = train_discriminant(G1, G2, labels=("one", "two"))
        rev = train_discriminant(G2, G1, labels=("two", "one"))
        np.testing.assert_allclose(rev.direction, -fwd.direction)
        assert rev.w == pytest.approx(-fwd.w)
        for x in ([0.5], [2.5], [4.75]):
            got_fwd = classify(fwd, x)
            got_rev = classify(rev, x)
            if project(fwd, x) == fwd.w:
                continue  # exact boundary flips by the >= convention
            assert got_fwd == got_rev

    def test_dimension_mismatch(self):
        model = train_discriminant(G1, G2)
        with pytest.raises(ValueError):
            project(model, [1.0, 2.0])

    def test_invariance_under_invertible_transforms(self):
        rng = np.random.default_rng(11)
        x1 = rng.normal(0.0, 1.0, size=(20, 3))
        x2 = rng.normal(2.0, 1.0, size=(20, 3))
        base = train_discriminant(x1, x2)
        probes = rng.normal(1.0, 2.0, size=(10, 3))
        for _ in range(10):
            mat = rng.normal(size=(3, 3))
            if np.linalg.cond(mat) > 1e4:
                continue
            moved = train_discriminant(x1 @ mat.T, x2 @ mat.T)
            assert moved.w == pytest.approx(base.w, rel=1e-8)
            for x in probes:
                assert project(moved, mat @ x) == pytest.approx(
                    project(base, x), rel=1e-8
                )


class TestEvaluate:
    def test_perfect_classification(self):
        model = train_discriminant(G1, G2, labels=("low", "high"))
        labeled = [([0.2], "low"), ([0.8], "low"), ([4.2], "high")]
        assert evaluate(model, labeled) == {"low": 1.0, "high": 1.0}

    def test_random_labels_near_chance(self):
        rng = np.random.default_rng(123)
        x1 = rng.normal(0.0, 1.0, size=(30, 2))
        x2 = rng.normal(0.05, 1.0, size=(30, 2))  # nearly indistinguishable
        model = train_discriminant(x1, x2, labels=("a", "b"))
        points = rng.normal(0.0, 1.0, size=(2000, 2))
        labels = ["a" if rng.random() < 0.5 else "b" for _ in range(2000)]
        acc = evaluate(model, list(zip(points, labels)))
        # binomial n≈1000 per class: 4 sigma is about 0.063
        assert abs(acc["a"] - 0.5) < 0.1
        assert abs(acc["b"] - 0.5) < 0.1

    def test_unknown_label(self):
        model = train_discriminant(G1, G2, labels=("low", "high"))
        with pytest.raises(DataError):
            evaluate(model, [([1.0], "medium")])


class TestMidpointVariant:
    def _identity_model(self) -> DiscriminantModel:
        return DiscriminantModel(
            direction=np.array([1.0]),
            w=123.0,
            mean1=np.array([0.0]),
            mean2=np.array([1.0]),
            labels=("a", "b"),
            dispersions=np.array([1.0]),
        )

    def test_mean_mode_returns_trained_w(self):
        model = self._identity_model()
        assert midpoint_variant(model, "mean", [[0.0]], [[1.0]]) == 123.0

    def test_median_hand_case(self):
        model = self._identity_model()
        w = midpoint_variant(model, "median", [[0.0], [0.0], [10.0]], [[20.0], [20.0], [30.0]])
        assert w == pytest.approx(10.0)

    def test_symmetric_groups_agree(self):
        g1 = [[-1.0], [0.0], [1.0]]
        g2 = [[9.0], [10.0], [11.0]]
        model = train_discriminant(g1, g2)
        assert midpoint_variant(model, "median", g1, g2) == pytest.approx(model.w)

    def test_rejects_unknown_mode_and_empty_groups(self):
        model = self._identity_model()
        with pytest.raises(ValueError):
            midpoint_variant(model, "midmean", [[0.0]], [[1.0]])
        with pytest.raises(ValueError):
            midpoint_variant(model, "median", [], [[1.0]])


class TestBootstrap:
    def _pool(self, rng, n=20, gap=3.0):
        xs = np.concatenate([rng.normal(0, 1, size=(n, 2)), rng.normal(gap, 1, size=(n, 2))])
        labels = ["a"] * n + ["b"] * n
        return list(zip(xs, labels))

    def test_same_seed_same_report(self):
        rng = np.random.default_rng(5)
        pool = self._pool(rng)
        one = bootstrap_accuracy(pool, subset_size=10, iterations=20, seed=9)
        two = bootstrap_accuracy(pool, subset_size=10, iterations=20, seed=9)
        assert one == two

    def test_zero_variance_pool(self):
        pool = [([0.0, 0.0], "a")] * 10 + [([5.0, 5.0], "b")] * 10
        report = bootstrap_accuracy(pool, subset_size=5, iterations=10, seed=1, ridge=1e-6)
        assert report.mean_accuracy == {"a": 1.0, "b": 1.0}
        assert report.error == {"a": 0.0, "b": 0.0}

    def test_error_is_twice_sample_std(self):
        rng = np.random.default_rng(17)
        pool = self._pool(rng, gap=1.0)
        report = bootstrap_accuracy(pool, subset_size=10, iterations=25, seed=3)
        for lab in ("a", "b"):
            accs = report.accuracies[lab]
            assert report.error[lab] == pytest.approx(2.0 * np.std(accs, ddof=1))
            assert min(accs) <= report.mean_accuracy[lab] <= max(accs)

    def test_convergence_with_iterations(self):
        rng = np.random.default_rng(31)
        pool = self._pool(rng, n=40, gap=1.5)
        short = bootstrap_accuracy(pool, subset_size=20, iterations=100, seed=2)
        long = bootstrap_accuracy(pool, subset_size=20, iterations=200, seed=2)
        for lab in ("a", "b"):
            assert abs(short.mean_accuracy[lab] - long.mean_accuracy[lab]) < 0.01

    def test_pool_too_small(self):
        pool = [([0.0], "a")] * 4 + [([1.0], "b")] * 4
        with pytest.raises(DataError):
            bootstrap_accuracy(pool, subset_size=4, iterations=5, seed=0)

    def test_needs_two_iterations_and_two_labels(self):
        pool = [([0.0], "a")] * 4 + [([1.0], "b")] * 4
        with pytest.raises(ValueError):
            bootstrap_accuracy(pool, subset_size=2, iterations=1, seed=0)
        with pytest.raises(DataError):
            bootstrap_accuracy([([0.0], "a")] * 6, subset_size=2, iterations=5, seed=0)

    def test_with_replacement_mode(self):
        rng = np.random.default_rng(41)
        pool = self._pool(rng)
        report = bootstrap_accuracy(
            pool, subset_size=10, iterations=10, seed=7, with_replacement=True
        )
        assert report.iterations == 10

    def test_evaluate_only_mode(self):
        rng = np.random.default_rng(43)
        pool = self._pool(rng)
        report = bootstrap_accuracy(pool, subset_size=10, iterations=10, seed=7, retrain=False)
        assert set(report.mean_accuracy) == {"a", "b"}


class TestZipf:
    def test_exact_inverse_rank(self):
        # frequencies c/r realized as token counts 12, 6, 4, 3
        words = ["a"] * 12 + ["b"] * 6 + ["c"] * 4 + ["d"] * 3
        stream = stream_from_tokens(words, "zipfy")
        assert zipf_exponent(stream) == pytest.approx(1.0, abs=1e-12)

    def test_three_point_hand_value(self):
        stream = stream_from_tokens(["a", "a", "a", "a", "b", "b", "c"], "tiny")
        # hand least squares on (1,4), (2,2), (3,1) in log space
        xs = [math.log(1), math.log(2), math.log(3)]
        ys = [math.log(4), math.log(2), math.log(1)]
        xb = sum(xs) / 3
        yb = sum(ys) / 3
        slope = sum((x - xb) * (y - yb) for x, y in zip(xs, ys)) / sum(
            (x - xb) ** 2 for x in xs
        )
        assert zipf_exponent(stream) == pytest.approx(-slope)
        assert zipf_exponent(stream) == pytest.approx(1.2337, abs=2e-4)

    def test_too_few_distinct_lemmas(self):
        with pytest.raises(DataError):
            zipf_exponent(stream_from_tokens(["a", "a", "b"], "thin"))

    def test_tie_break_is_deterministic(self):
        one = zipf_exponent(stream_from_tokens(["x", "y", "z", "x", "y", "z"], "t"))
        two = zipf_exponent(stream_from_tokens(["z", "x", "y", "y", "x", "z"], "t"))
        assert one == two


class TestModelIO:
    def test_round_trip(self, tmp_path):
        model = train_discriminant(
            [[0.0, 1.0], [1.0, 2.0], [0.5, 0.2]],
            [[4.0, 0.0], [5.0, 1.0], [4.1, 0.9]],
            labels=("fiction", "news"),
            feature_names=("gamma1", "gamma2"),
            config={"m": 4},
        )
        path = tmp_path / "model.json"
        save_model(path, model)
        loaded = load_model(path)
        np.testing.assert_array_equal(loaded.direction, model.direction)
        assert loaded.w == model.w
        assert loaded.labels == model.labels
        assert loaded.config == {"m": 4}

    def test_plane_format(self):
        model = DiscriminantModel(
            direction=np.array([2.3, 8.2, 2.2]),
            w=14.1,
            mean1=np.zeros(3),
            mean2=np.zeros(3),
            labels=("a", "b"),
            dispersions=np.array([1.0, 1.0, 1.0]),
            feature_names=("gamma1", "gamma2", "gamma3"),
        )
        assert separating_plane(model) == "2.3*gamma1' + 8.2*gamma2' + 2.2*gamma3' = 14.1"
