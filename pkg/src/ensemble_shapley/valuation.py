"""Per-point attribution of ensemble decisions, and its error bounds.

For each labeled point the ensemble either classifies it (the induced
voting game is won) or misclassifies it (the game is lost). A won game
is solved directly and the resulting Shapley vector credits models for
the correct decision; a lost game is first dualized, and the Shapley
vector of the strictly-won dual assigns the responsibility for the
mistake. Averaging the two kinds of vectors over their subsets gives
one `positive` profile (who drives correct decisions) and one
`negative` profile (who drives errors) per ensemble.

The closing section bounds how far the size-conditioned Gaussian
estimates can drift from the exact dataset averages, and inverts the
bound into a sample-size requirement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import UndefinedEntropyError, ValidationError
from .games import PredictionDataset, build_game, dualize, score_point
from .solvers import ShapleyVector, SolverConfig, solve_game

__all__ = [
    "PointValuation",
    "ConditionalAverages",
    "ValuationReport",
    "BoundParameters",
    "valuate",
    "average_conditional",
    "shapley_entropy",
    "error_bound",
    "required_sample_size",
    "single_game_error_bound",
]


@dataclass(frozen=True)
class PointValuation:
    """Attribution for one point: exactly one of the two vectors is live.

    ``ensemble`` is nonzero only when the point was classified,
    ``dual`` only when it was misclassified; both store raw
    (unnormalized) solver output so averages can be rescaled either
    way afterwards.
    """

    index: int
    classified: bool
    ensemble: ShapleyVector
    dual: ShapleyVector


@dataclass(frozen=True)
class ConditionalAverages:
    """Mean attribution vectors over the classified/misclassified subsets.

    ``positive`` averages ensemble vectors of classified points,
    ``negative`` averages dual vectors of misclassified points; each is
    ``None`` when its subset is empty.
    """

    positive: np.ndarray | None
    negative: np.ndarray | None
    n_positive: int
    n_negative: int


def average_conditional(
    valuations: list[PointValuation], normalized: bool = False
) -> ConditionalAverages:
    """Average the live vectors per subset, raw or per-point normalized."""
    if not valuations:
        raise ValidationError("cannot average an empty list of point valuations")
    positive_rows = []
    negative_rows = []
    for pv in valuations:
        if pv.classified:
            vec = pv.ensemble.normalize() if normalized else pv.ensemble
            positive_rows.append(vec.values)
        else:
            vec = pv.dual.normalize() if normalized else pv.dual
            negative_rows.append(vec.values)
    positive = np.mean(np.stack(positive_rows), axis=0) if positive_rows else None
    negative = np.mean(np.stack(negative_rows), axis=0) if negative_rows else None
    return ConditionalAverages(
        positive=positive,
        negative=negative,
        n_positive=len(positive_rows),
        n_negative=len(negative_rows),
    )


def shapley_entropy(values) -> float:
    """Entropy of an attribution vector after rescaling it to sum to one.

    Measures how evenly credit is spread over the ``m`` models: 0 when
    one model holds everything, ``ln m`` when all hold equal shares.
    Negative components are rejected and an all-zero vector has no
    distribution to take an entropy of.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size < 1:
        raise ValidationError(
            f"values must be a non-empty 1-d vector, got shape {values.shape}"
        )
    negative = values < 0.0
    if negative.any():
        j = int(np.argmax(negative))
        raise ValidationError(
            f"value at index {j} is {values[j]!r}, expected a nonnegative value"
        )
    total = float(values.sum())
    if total <= 0.0:
        raise UndefinedEntropyError(
            "entropy is undefined for an all-zero attribution vector"
        )
    shares = values / total
    positive = shares[shares > 0.0]
    entropy = float(-(positive * np.log(positive)).sum())
    # Round-off can push the sum a hair outside the valid range (or leave
    # a signed zero for a one-hot vector); pin it.
    return min(max(entropy, 0.0), math.log(values.size)) + 0.0


def _guarded_entropy(values: np.ndarray | None) -> float | None:
    if values is None:
        return None
    try:
        return shapley_entropy(values)
    except UndefinedEntropyError:
        return None


@dataclass(frozen=True)
class ValuationReport:
    """Dataset-level attribution summary.

    Stores both the raw averages and the averages of per-point
    normalized vectors; ``avg_positive``/``avg_negative`` select the
    variant named by ``config.normalize``, and the entropies are
    computed on that selected variant. Averages and entropies are
    ``None`` when the corresponding subset is empty.
    """

    model_ids: tuple[str, ...]
    cutoff: float
    solver: str
    config: SolverConfig
    n_points: int
    n_positive: int
    n_negative: int
    avg_positive_raw: np.ndarray | None
    avg_negative_raw: np.ndarray | None
    avg_positive_normalized: np.ndarray | None
    avg_negative_normalized: np.ndarray | None
    entropy_positive: float | None
    entropy_negative: float | None

    @property
    def avg_positive(self) -> np.ndarray | None:
        return (
            self.avg_positive_normalized
            if self.config.normalize
            else self.avg_positive_raw
        )

    @property
    def avg_negative(self) -> np.ndarray | None:
        return (
            self.avg_negative_normalized
            if self.config.normalize
            else self.avg_negative_raw
        )

    def to_dict(self) -> dict:
        def listed(values: np.ndarray | None) -> list[float] | None:
            return None if values is None else [float(v) for v in values]

        return {
            "schema": "ensemble-shapley/1",
            "kind": "valuation-report",
            "model_ids": list(self.model_ids),
            "cutoff": self.cutoff,
            "solver": self.solver,
            "config": {
                "permutations": self.config.permutations,
                "stability": self.config.stability,
                "seed": self.config.seed,
                "normalize": self.config.normalize,
            },
            "n_points": self.n_points,
            "n_positive": self.n_positive,
            "n_negative": self.n_negative,
            "avg_positive": {
                "raw": listed(self.avg_positive_raw),
                "normalized": listed(self.avg_positive_normalized),
            },
            "avg_negative": {
                "raw": listed(self.avg_negative_raw),
                "normalized": listed(self.avg_negative_normalized),
            },
            "entropy_positive": self.entropy_positive,
            "entropy_negative": self.entropy_negative,
        }


def valuate(
    dataset: PredictionDataset,
    cutoff: float = 0.5,
    config: SolverConfig | None = None,
    solver: str = "emc",
) -> tuple[list[PointValuation], ValuationReport]:
    """Attribute every point's decision to the models and summarize.

    Each point is scored into a voting game; a won game is solved as
    is (crediting the classification) while a lost game is dualized
    first (assigning responsibility for the error), so exactly one of
    the two per-point vectors is nonzero. Monte Carlo draws get a
    distinct stream per point, derived from ``config.seed``.
    """
    if config is None:
        config = SolverConfig()
    m = dataset.n_models
    zero = ShapleyVector(np.zeros(m), solver=solver, normalized=False)

    valuations: list[PointValuation] = []
    for i in range(dataset.n_points):
        weights = score_point(dataset.probabilities[i], int(dataset.labels[i]))
        game = build_game(weights, cutoff)
        point_config = replace(config, normalize=False, seed=config.seed + i)
        if game.outcome().won:
            ensemble = solve_game(game, solver, point_config)
            valuations.append(PointValuation(i, True, ensemble, zero))
        else:
            dual = solve_game(dualize(game), solver, point_config)
            valuations.append(PointValuation(i, False, zero, dual))

    raw = average_conditional(valuations, normalized=False)
    normalized = average_conditional(valuations, normalized=True)
    selected = normalized if config.normalize else raw
    report = ValuationReport(
        model_ids=dataset.model_ids,
        cutoff=float(cutoff),
        solver=solver,
        config=config,
        n_points=dataset.n_points,
        n_positive=raw.n_positive,
        n_negative=raw.n_negative,
        avg_positive_raw=raw.positive,
        avg_negative_raw=raw.negative,
        avg_positive_normalized=normalized.positive,
        avg_negative_normalized=normalized.negative,
        entropy_positive=_guarded_entropy(selected.positive),
        entropy_negative=_guarded_entropy(selected.negative),
    )
    return valuations, report


@dataclass(frozen=True)
class BoundParameters:
    """Inputs for the dataset-average error bound.

    ``n`` points, ``m`` models, additive tolerance ``epsilon`` on each
    averaged component, and failure probability ``alpha`` for the
    sample-size inversion.
    """

    n: int
    m: int
    epsilon: float
    alpha: float = 0.05

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n is {self.n!r}, expected a positive integer")
        if self.m < 1:
            raise ValidationError(f"m is {self.m!r}, expected a positive integer")
        if not self.epsilon > 0.0:
            raise ValidationError(
                f"epsilon is {self.epsilon!r}, expected a value > 0"
            )
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(
                f"alpha is {self.alpha!r}, expected a value in (0, 1)"
            )


def error_bound(params: BoundParameters) -> float:
    """Probability bound for the averaged attribution estimates.

    Bounds the chance that a size-conditioned Gaussian average over
    ``n`` points drifts more than ``epsilon`` from the exact average on
    any single component:

        2 * exp(-sqrt(n^2 * m * epsilon^4 * pi / 8))

    The value can exceed 1 for small ``n``, ``m`` or ``epsilon``, in
    which case it is vacuous (callers flag this rather than clip it).
    """
    exponent = math.sqrt(
        params.n**2 * params.m * params.epsilon**4 * math.pi / 8.0
    )
    return 2.0 * math.exp(-exponent)


def required_sample_size(m: int, epsilon: float, alpha: float) -> int:
    """Smallest ``n`` whose error bound is at most ``alpha``.

    Inverts the bound in closed form,

        n >= sqrt(8 * ln(alpha / 2)^2 / (epsilon^4 * m * pi)),

    and rounds up. Grows like ``1 / (epsilon^2 * sqrt(m))``: halving
    ``epsilon`` quadruples the requirement, quadrupling ``m`` halves
    it.
    """
    if m < 1:
        raise ValidationError(f"m is {m!r}, expected a positive integer")
    if not epsilon > 0.0:
        raise ValidationError(f"epsilon is {epsilon!r}, expected a value > 0")
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha is {alpha!r}, expected a value in (0, 1)")
    lower = math.sqrt(
        8.0 * math.log(alpha / 2.0) ** 2 / (epsilon**4 * m * math.pi)
    )
    return max(1, math.ceil(lower))


def single_game_error_bound(m: int) -> float:
    """Worst-case component error of the size-conditioned estimate on one game.

    Equals ``sqrt(8 / (m * pi))``; it shrinks with the ensemble size
    but only becomes informative (below 1) once ``m`` exceeds 2.
    """
    if m < 1:
        raise ValidationError(f"m is {m!r}, expected a positive integer")
    return math.sqrt(8.0 / (m * math.pi))
