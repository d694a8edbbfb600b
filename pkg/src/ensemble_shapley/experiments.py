"""Synthetic ensembles and the studies built on top of the valuation pipeline.

The generator draws labels uniformly and mixes, per model, a
label-informed base probability with uniform noise, so model quality is
controlled by one mixing coefficient per column. The studies mirror the
questions the attribution machinery is meant to answer: does noise get
blamed (adversarial study), do attribution ranks pick good submodels
(forward selection), and how does solve time scale (runtime sweep).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedAUCError, ValidationError
from .games import PredictionDataset
from .solvers import SolverConfig
from .valuation import valuate

__all__ = [
    "SyntheticSpec",
    "SelectionTrace",
    "AdversarialRow",
    "AdversarialStudy",
    "BenchmarkRow",
    "generate_synthetic",
    "corrupt",
    "adversarial_study",
    "forward_selection",
    "auc",
    "runtime_sweep",
]


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a synthetic prediction dataset.

    Labels are fair coin flips. Model ``j`` predicts
    ``(1 - quality_mix[j]) * base + quality_mix[j] * uniform`` where
    ``base`` is ``signal`` for class-1 points and ``1 - signal``
    otherwise: mix 0 is a clean model of strength ``signal``, mix 1 is
    pure noise. ``quality_mix`` accepts a scalar for identical models.
    """

    n_points: int
    n_models: int
    signal: float = 0.9
    quality_mix: tuple[float, ...] | float = 0.0
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n_points < 1:
            raise ValidationError(
                f"n_points is {self.n_points!r}, expected a positive integer"
            )
        if self.n_models < 1:
            raise ValidationError(
                f"n_models is {self.n_models!r}, expected a positive integer"
            )
        if not 0.5 < self.signal <= 1.0:
            raise ValidationError(
                f"signal is {self.signal!r}, expected a value in (0.5, 1]"
            )
        mix = self.quality_mix
        if isinstance(mix, (int, float)):
            mix = (float(mix),) * self.n_models
        else:
            mix = tuple(float(v) for v in mix)
        if len(mix) != self.n_models:
            raise ValidationError(
                f"quality_mix has {len(mix)} entries for {self.n_models} models"
            )
        for j, v in enumerate(mix):
            if not 0.0 <= v <= 1.0:
                raise ValidationError(
                    f"quality_mix at index {j} is {v!r}, expected a value in [0, 1]"
                )
        object.__setattr__(self, "quality_mix", mix)


def generate_synthetic(spec: SyntheticSpec) -> PredictionDataset:
    """Draw the dataset described by ``spec``, deterministically per seed."""
    rng = np.random.default_rng(spec.seed)
    labels = rng.integers(0, 2, size=spec.n_points)
    noise = rng.uniform(size=(spec.n_points, spec.n_models))
    base = np.where(labels == 1, spec.signal, 1.0 - spec.signal)[:, None]
    mix = np.asarray(spec.quality_mix, dtype=np.float64)[None, :]
    probabilities = (1.0 - mix) * base + mix * noise
    model_ids = tuple(f"model_{j + 1}" for j in range(spec.n_models))
    return PredictionDataset(probabilities, labels, model_ids)


def corrupt(
    dataset: PredictionDataset,
    adversarial: tuple[int, ...],
    noise_ratio: float,
    seed: int = 42,
) -> PredictionDataset:
    """Blend uniform noise into the adversarial models' probabilities.

    Each targeted column becomes ``(1 - noise_ratio) * p + noise_ratio
    * u``. The noise field is drawn once per (point, model) cell from
    ``seed``, so sweeping the ratio moves every corrupted value along a
    line instead of redrawing it.
    """
    cols = [int(j) for j in adversarial]
    seen: set[int] = set()
    for pos, j in enumerate(cols):
        if not 0 <= j < dataset.n_models:
            raise ValidationError(
                f"adversarial index at position {pos} is {j}, expected a value "
                f"in [0, {dataset.n_models - 1}]"
            )
        if j in seen:
            raise ValidationError(
                f"adversarial index at position {pos} duplicates model {j}"
            )
        seen.add(j)
    if not 0.0 <= noise_ratio <= 1.0:
        raise ValidationError(
            f"noise_ratio is {noise_ratio!r}, expected a value in [0, 1]"
        )
    rng = np.random.default_rng(seed)
    noise = rng.uniform(size=dataset.probabilities.shape)
    probabilities = dataset.probabilities.copy()
    probabilities[:, cols] = (
        (1.0 - noise_ratio) * probabilities[:, cols] + noise_ratio * noise[:, cols]
    )
    return PredictionDataset(probabilities, dataset.labels, dataset.model_ids)


def _group_stats(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    se = float(values.std(ddof=1) / np.sqrt(values.size))
    return mean, se


@dataclass(frozen=True)
class AdversarialRow:
    """Group summary of the positive attribution profile at one noise ratio."""

    noise_ratio: float
    adversarial_mean: float
    adversarial_se: float
    honest_mean: float
    honest_se: float
    n_positive: int
    n_negative: int

    def to_dict(self) -> dict:
        return {
            "noise_ratio": self.noise_ratio,
            "adversarial_mean": self.adversarial_mean,
            "adversarial_se": self.adversarial_se,
            "honest_mean": self.honest_mean,
            "honest_se": self.honest_se,
            "n_positive": self.n_positive,
            "n_negative": self.n_negative,
        }


@dataclass(frozen=True)
class AdversarialStudy:
    """Attribution split between corrupted and honest models across ratios."""

    adversarial: tuple[int, ...]
    cutoff: float
    solver: str
    rows: tuple[AdversarialRow, ...]

    def to_dict(self) -> dict:
        return {
            "schema": "ensemble-shapley/1",
            "kind": "adversarial-study",
            "adversarial": list(self.adversarial),
            "cutoff": self.cutoff,
            "solver": self.solver,
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_rows(self) -> list[dict]:
        return [row.to_dict() for row in self.rows]


def adversarial_study(
    dataset: PredictionDataset,
    adversarial: tuple[int, ...],
    ratios: tuple[float, ...],
    cutoff: float = 0.5,
    config: SolverConfig | None = None,
    solver: str = "emc",
    noise_seed: int | None = None,
) -> AdversarialStudy:
    """Corrupt a model subset at each ratio and compare attribution groups.

    For every ratio the dataset is re-corrupted (same noise field), the
    valuation pipeline is run, and the positive attribution profile is
    averaged within the adversarial group and within the honest rest,
    with standard errors over the group components.
    """
    if config is None:
        config = SolverConfig()
    if not adversarial:
        raise ValidationError("adversarial must name at least one model index")
    if len(adversarial) >= dataset.n_models:
        raise ValidationError(
            "adversarial must leave at least one honest model, got "
            f"{len(adversarial)} of {dataset.n_models}"
        )
    if noise_seed is None:
        noise_seed = config.seed
    adversarial = tuple(int(j) for j in adversarial)
    honest = np.array(
        [j for j in range(dataset.n_models) if j not in set(adversarial)]
    )
    adversarial_arr = np.array(adversarial)

    rows = []
    for ratio in ratios:
        corrupted = corrupt(dataset, adversarial, float(ratio), seed=noise_seed)
        _, report = valuate(corrupted, cutoff, config, solver)
        profile = report.avg_positive
        if profile is None:
            raise ValidationError(
                f"no classified points at noise ratio {ratio!r}; "
                f"the positive attribution profile is undefined"
            )
        adv_mean, adv_se = _group_stats(profile[adversarial_arr])
        hon_mean, hon_se = _group_stats(profile[honest])
        rows.append(
            AdversarialRow(
                noise_ratio=float(ratio),
                adversarial_mean=adv_mean,
                adversarial_se=adv_se,
                honest_mean=hon_mean,
                honest_se=hon_se,
                n_positive=report.n_positive,
                n_negative=report.n_negative,
            )
        )
    return AdversarialStudy(
        adversarial=adversarial,
        cutoff=float(cutoff),
        solver=solver,
        rows=tuple(rows),
    )


def auc(scores, labels) -> float:
    """Area under the ROC curve by rank statistics; ties count half.

    Equals the probability that a random class-1 point outranks a
    random class-0 point. Needs both classes present.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise ValidationError(
            f"scores and labels must be 1-d and aligned, got {scores.shape} "
            f"and {labels.shape}"
        )
    bad = ~np.isin(labels, (0, 1))
    if bad.any():
        row = int(np.argmax(bad))
        raise ValidationError(
            f"label at row {row} is {labels[row]!r}, expected 0 or 1"
        )
    n_pos = int((labels == 1).sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAUCError(
            f"AUC needs both classes, got {n_pos} positive and {n_neg} negative"
        )
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    starts = np.cumsum(counts) - counts
    average_rank = starts + (counts + 1) / 2.0  # 1-based, ties averaged
    ranks = average_rank[inverse]
    rank_sum = float(ranks[labels == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass(frozen=True)
class SelectionTrace:
    """Accuracy/AUC of prefix sub-ensembles in attribution order.

    ``order`` ranks models by positive attribution, best first, ties
    broken by original index; entry ``k - 1`` of the metric tuples
    scores the sub-ensemble of the top ``k`` models on the held-out
    split.
    """

    order: tuple[int, ...]
    model_ids: tuple[str, ...]
    attribution: tuple[float, ...]
    accuracies: tuple[float, ...]
    aucs: tuple[float, ...]
    cutoff: float
    solver: str

    def to_dict(self) -> dict:
        return {
            "schema": "ensemble-shapley/1",
            "kind": "selection-trace",
            "cutoff": self.cutoff,
            "solver": self.solver,
            "order": list(self.order),
            "model_ids": list(self.model_ids),
            "attribution": list(self.attribution),
            "rows": self.to_rows(),
        }

    def to_rows(self) -> list[dict]:
        return [
            {
                "k": k + 1,
                "model_index": self.order[k],
                "model_id": self.model_ids[self.order[k]],
                "accuracy": self.accuracies[k],
                "auc": self.aucs[k],
            }
            for k in range(len(self.order))
        ]


def forward_selection(
    value_split: PredictionDataset,
    test_split: PredictionDataset,
    cutoff: float = 0.5,
    config: SolverConfig | None = None,
    solver: str = "emc",
) -> SelectionTrace:
    """Rank models by positive attribution and score growing prefixes.

    Attribution comes from the valuation split alone; each prefix
    sub-ensemble then averages its members' probabilities on the test
    split and is scored by thresholded accuracy and AUC. The last
    prefix is the full ensemble.
    """
    if config is None:
        config = SolverConfig()
    if value_split.n_models != test_split.n_models:
        raise ValidationError(
            f"splits disagree on the number of models: "
            f"{value_split.n_models} vs {test_split.n_models}"
        )
    if value_split.model_ids != test_split.model_ids:
        raise ValidationError("splits disagree on model_ids")

    _, report = valuate(value_split, cutoff, config, solver)
    profile = report.avg_positive
    if profile is None:
        raise ValidationError(
            "no classified points in the valuation split; "
            "the positive attribution profile is undefined"
        )
    order = np.argsort(-profile, kind="stable")

    probabilities = test_split.probabilities
    labels = test_split.labels
    accuracies = []
    aucs = []
    for k in range(1, len(order) + 1):
        scores = probabilities[:, order[:k]].mean(axis=1)
        predicted = (scores >= cutoff).astype(np.int64)
        accuracies.append(float((predicted == labels).mean()))
        aucs.append(auc(scores, labels))
    return SelectionTrace(
        order=tuple(int(j) for j in order),
        model_ids=value_split.model_ids,
        attribution=tuple(float(v) for v in profile),
        accuracies=tuple(accuracies),
        aucs=tuple(aucs),
        cutoff=float(cutoff),
        solver=solver,
    )


@dataclass(frozen=True)
class BenchmarkRow:
    """Mean wall-clock time to valuate one synthetic dataset."""

    n_points: int
    n_models: int
    solver: str
    mean_seconds: float
    per_point_seconds: float
    runs: int

    def to_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "n_models": self.n_models,
            "solver": self.solver,
            "mean_seconds": self.mean_seconds,
            "per_point_seconds": self.per_point_seconds,
            "runs": self.runs,
        }


def runtime_sweep(
    sizes: tuple[tuple[int, int], ...],
    solvers: tuple[str, ...],
    config: SolverConfig | None = None,
    cutoff: float = 0.5,
    runs: int = 10,
    signal: float = 0.9,
    quality_mix: float = 0.25,
) -> list[BenchmarkRow]:
    """Time the valuation pipeline over (n_points, n_models) grid cells.

    Each cell gets one synthetic dataset; each solver is warmed up once
    and then timed ``runs`` times. Dataset contents are deterministic
    per config seed; the timings themselves naturally are not.
    """
    if config is None:
        config = SolverConfig()
    if runs < 1:
        raise ValidationError(f"runs is {runs!r}, expected a positive integer")
    rows = []
    for n_points, n_models in sizes:
        spec = SyntheticSpec(
            n_points=n_points,
            n_models=n_models,
            signal=signal,
            quality_mix=quality_mix,
            seed=config.seed,
        )
        dataset = generate_synthetic(spec)
        for solver in solvers:
            valuate(dataset, cutoff, config, solver)
            elapsed = []
            for _ in range(runs):
                start = time.perf_counter()
                valuate(dataset, cutoff, config, solver)
                elapsed.append(time.perf_counter() - start)
            mean_seconds = float(np.mean(elapsed))
            rows.append(
                BenchmarkRow(
                    n_points=n_points,
                    n_models=n_models,
                    solver=solver,
                    mean_seconds=mean_seconds,
                    per_point_seconds=mean_seconds / n_points,
                    runs=runs,
                )
            )
    return rows
