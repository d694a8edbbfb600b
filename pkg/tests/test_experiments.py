"""Synthetic data generation, corruption, studies, ranking metrics."""

import numpy as np
import pytest

import ensemble_shapley as es


# synthetic generation

def test_generate_synthetic_clean_models_emit_the_base_signal():
    spec = es.SyntheticSpec(n_points=50, n_models=3, signal=0.9, quality_mix=0.0, seed=1)
    ds = es.generate_synthetic(spec)
    pos = ds.labels == 1
    assert np.all(ds.probabilities[pos] == 0.9)
    assert np.all(ds.probabilities[~pos] == pytest.approx(0.1, abs=1e-15))
    assert pos.any() and (~pos).any()


def test_generate_synthetic_is_deterministic_per_seed():
    spec = es.SyntheticSpec(n_points=30, n_models=4, quality_mix=0.5, seed=5)
    first = es.generate_synthetic(spec)
    second = es.generate_synthetic(spec)
    np.testing.assert_array_equal(first.probabilities, second.probabilities)
    np.testing.assert_array_equal(first.labels, second.labels)
    other = es.generate_synthetic(
        es.SyntheticSpec(n_points=30, n_models=4, quality_mix=0.5, seed=6)
    )
    assert not np.array_equal(first.probabilities, other.probabilities)


def test_generate_synthetic_pure_noise_column_is_label_free():
    spec = es.SyntheticSpec(
        n_points=2000, n_models=2, signal=0.9, quality_mix=(0.0, 1.0), seed=8
    )
    ds = es.generate_synthetic(spec)
    noise = ds.probabilities[:, 1]
    # mean of U(0,1) is 0.5; tolerance is ~4.5 standard errors
    assert abs(noise.mean() - 0.5) < 0.03
    pos = ds.labels == 1
    assert abs(noise[pos].mean() - noise[~pos].mean()) < 0.06


def test_generate_synthetic_mix_blends_toward_the_base():
    spec = es.SyntheticSpec(
        n_points=500, n_models=1, signal=0.9, quality_mix=0.25, seed=3
    )
    ds = es.generate_synthetic(spec)
    pos = ds.labels == 1
    # with mix 0.25 the class-1 values live in [0.75*0.9, 0.75*0.9 + 0.25]
    assert np.all(ds.probabilities[pos] >= 0.675 - 1e-12)
    assert np.all(ds.probabilities[pos] <= 0.925 + 1e-12)


def test_synthetic_spec_validation():
    with pytest.raises(es.ValidationError, match="signal"):
        es.SyntheticSpec(n_points=10, n_models=2, signal=0.5)
    with pytest.raises(es.ValidationError, match="quality_mix"):
        es.SyntheticSpec(n_points=10, n_models=2, quality_mix=(0.1,))
    with pytest.raises(es.ValidationError, match="index 1"):
        es.SyntheticSpec(n_points=10, n_models=2, quality_mix=(0.1, 1.4))
    with pytest.raises(es.ValidationError, match="n_points"):
        es.SyntheticSpec(n_points=0, n_models=2)


def test_synthetic_spec_scalar_mix_broadcasts():
    spec = es.SyntheticSpec(n_points=10, n_models=3, quality_mix=0.4)
    assert spec.quality_mix == (0.4, 0.4, 0.4)


# corruption

@pytest.fixture
def base_dataset():
    spec = es.SyntheticSpec(n_points=80, n_models=5, quality_mix=0.2, seed=2)
    return es.generate_synthetic(spec)


def test_corrupt_ratio_zero_is_the_identity(base_dataset):
    corrupted = es.corrupt(base_dataset, (1, 3), 0.0, seed=7)
    np.testing.assert_array_equal(
        corrupted.probabilities, base_dataset.probabilities
    )


def test_corrupt_touches_only_the_targeted_columns(base_dataset):
    corrupted = es.corrupt(base_dataset, (1, 3), 0.8, seed=7)
    untouched = [0, 2, 4]
    np.testing.assert_array_equal(
        corrupted.probabilities[:, untouched],
        base_dataset.probabilities[:, untouched],
    )
    assert not np.array_equal(
        corrupted.probabilities[:, [1, 3]], base_dataset.probabilities[:, [1, 3]]
    )
    np.testing.assert_array_equal(corrupted.labels, base_dataset.labels)


def test_corrupt_uses_one_noise_field_across_ratios(base_dataset):
    # values at ratio 0.5 must be the midpoint of the ratio-0 and ratio-1
    # values because the same (point, model) noise draw is reused
    zero = es.corrupt(base_dataset, (0,), 0.0, seed=9).probabilities
    half = es.corrupt(base_dataset, (0,), 0.5, seed=9).probabilities
    full = es.corrupt(base_dataset, (0,), 1.0, seed=9).probabilities
    np.testing.assert_array_equal(half[:, 0], 0.5 * (zero[:, 0] + full[:, 0]))


def test_corrupt_full_ratio_is_pure_noise(base_dataset):
    corrupted = es.corrupt(base_dataset, (2,), 1.0, seed=11)
    column = corrupted.probabilities[:, 2]
    assert np.all((column >= 0.0) & (column <= 1.0))
    assert abs(column.mean() - 0.5) < 0.2


def test_corrupt_validates_indices(base_dataset):
    with pytest.raises(es.ValidationError, match="position 1"):
        es.corrupt(base_dataset, (0, 9), 0.5)
    with pytest.raises(es.ValidationError, match="duplicates"):
        es.corrupt(base_dataset, (2, 2), 0.5)
    with pytest.raises(es.ValidationError, match="noise_ratio"):
        es.corrupt(base_dataset, (0,), 1.5)


# adversarial study

def test_adversarial_study_blames_the_corrupted_group():
    spec = es.SyntheticSpec(n_points=120, n_models=8, quality_mix=0.0, seed=4)
    ds = es.generate_synthetic(spec)
    study = es.adversarial_study(ds, (0, 1), (0.0, 0.75))
    clean_row, noisy_row = study.rows
    assert clean_row.adversarial_mean == pytest.approx(
        clean_row.honest_mean, abs=1e-12
    )
    assert noisy_row.adversarial_mean < noisy_row.honest_mean
    assert noisy_row.n_positive + noisy_row.n_negative == 120


def test_adversarial_study_validates_the_group():
    spec = es.SyntheticSpec(n_points=10, n_models=3, quality_mix=0.0, seed=4)
    ds = es.generate_synthetic(spec)
    with pytest.raises(es.ValidationError, match="at least one honest"):
        es.adversarial_study(ds, (0, 1, 2), (0.0,))
    with pytest.raises(es.ValidationError, match="at least one model"):
        es.adversarial_study(ds, (), (0.0,))


def test_adversarial_study_rows_serialize():
    spec = es.SyntheticSpec(n_points=40, n_models=4, quality_mix=0.0, seed=4)
    ds = es.generate_synthetic(spec)
    study = es.adversarial_study(ds, (0,), (0.0, 1.0))
    payload = study.to_dict()
    assert payload["kind"] == "adversarial-study"
    assert [row["noise_ratio"] for row in payload["rows"]] == [0.0, 1.0]


# AUC

def test_auc_rankings():
    assert es.auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert es.auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0
    assert es.auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0
    assert es.auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75


def test_auc_ties_count_half():
    assert es.auc([0.5, 0.5, 0.5, 0.5], [0, 1, 0, 1]) == 0.5


def test_auc_is_invariant_to_order_preserving_transforms():
    scores = np.array([0.12, 0.55, 0.3, 0.3, 0.9, 0.02])
    labels = np.array([0, 1, 0, 1, 1, 0])
    assert es.auc(scores, labels) == es.auc(scores * 0.5 + 0.25, labels)


def test_auc_requires_both_classes():
    with pytest.raises(es.UndefinedAUCError, match="both classes"):
        es.auc([0.1, 0.9], [1, 1])


def test_auc_validates_labels():
    with pytest.raises(es.ValidationError, match="row 1"):
        es.auc([0.1, 0.9], [0, 3])


# forward selection

def test_forward_selection_full_prefix_equals_the_whole_ensemble():
    mix = (0.0, 0.0, 1.0)
    value_ds = es.generate_synthetic(es.SyntheticSpec(150, 3, 0.9, mix, seed=31))
    test_ds = es.generate_synthetic(es.SyntheticSpec(150, 3, 0.9, mix, seed=32))
    trace = es.forward_selection(value_ds, test_ds)
    scores = test_ds.probabilities.mean(axis=1)
    accuracy = float(((scores >= 0.5).astype(int) == test_ds.labels).mean())
    assert trace.accuracies[-1] == pytest.approx(accuracy, abs=1e-15)
    assert trace.aucs[-1] == pytest.approx(es.auc(scores, test_ds.labels), abs=1e-15)
    assert len(trace.order) == 3


def test_forward_selection_ranks_clean_models_first():
    mix = (1.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    value_ds = es.generate_synthetic(es.SyntheticSpec(300, 6, 0.9, mix, seed=33))
    test_ds = es.generate_synthetic(es.SyntheticSpec(300, 6, 0.9, mix, seed=34))
    trace = es.forward_selection(value_ds, test_ds)
    assert set(trace.order[:3]) == {1, 3, 5}


def test_forward_selection_breaks_ties_by_model_index():
    # identical columns produce identical attribution, so the order must
    # fall back to ascending index
    probs = np.tile(np.array([[0.9], [0.8], [0.2]]), (1, 4))
    ds = es.PredictionDataset(probs, [1, 1, 0], ("a", "b", "c", "d"))
    trace = es.forward_selection(ds, ds)
    assert trace.order == (0, 1, 2, 3)


def test_forward_selection_validates_split_compatibility():
    a = es.generate_synthetic(es.SyntheticSpec(10, 3, 0.9, 0.0, seed=1))
    b = es.generate_synthetic(es.SyntheticSpec(10, 4, 0.9, 0.0, seed=1))
    with pytest.raises(es.ValidationError, match="number of models"):
        es.forward_selection(a, b)
    c = es.PredictionDataset(
        a.probabilities, a.labels, ("x", "y", "z")
    )
    with pytest.raises(es.ValidationError, match="model_ids"):
        es.forward_selection(a, c)


def test_selection_trace_serializes_rows():
    mix = (0.0, 1.0)
    value_ds = es.generate_synthetic(es.SyntheticSpec(80, 2, 0.9, mix, seed=35))
    trace = es.forward_selection(value_ds, value_ds)
    rows = trace.to_rows()
    assert [row["k"] for row in rows] == [1, 2]
    assert rows[0]["model_id"] == "model_1"
    payload = trace.to_dict()
    assert payload["kind"] == "selection-trace"


# runtime sweep

def test_runtime_sweep_shapes_and_positivity():
    rows = es.runtime_sweep(((8, 4), (16, 4)), ("emc", "mle"), runs=2)
    assert len(rows) == 4
    for row in rows:
        assert row.mean_seconds > 0.0
        assert row.per_point_seconds == pytest.approx(
            row.mean_seconds / row.n_points, rel=1e-12
        )
        assert row.runs == 2


def test_runtime_sweep_validates_runs():
    with pytest.raises(es.ValidationError, match="runs"):
        es.runtime_sweep(((8, 4),), ("emc",), runs=0)
