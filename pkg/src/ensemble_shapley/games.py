"""Weighted voting games induced by an ensemble of binary classifiers.

An ensemble of ``m`` probabilistic classifiers votes on one data point.
Each classifier contributes a weight equal to the probability mass it
places on the point's true label, scaled by ``1/m``; the ensemble
classifies the point correctly exactly when the weights of all players
together reach the acceptance cutoff. Everything downstream (Shapley
solvers, per-point valuation, experiments) consumes the compact
``SimplifiedGame`` form defined here: a cutoff plus one bounded weight
per player.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "PredictionDataset",
    "SimplifiedGame",
    "GameOutcome",
    "score_point",
    "score_dataset",
    "build_game",
    "dualize",
    "weight_moments",
]


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PredictionDataset:
    """Positive-class probabilities of ``m`` models on ``n`` labeled points.

    ``probabilities`` has shape ``(n, m)``; entry ``(i, j)`` is model
    ``j``'s probability that point ``i`` belongs to class 1. ``labels``
    holds the true classes in ``{0, 1}``. ``model_ids`` names the
    columns and is kept alongside the numbers so reports and files stay
    self-describing.
    """

    probabilities: np.ndarray
    labels: np.ndarray
    model_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        probs = np.array(self.probabilities, dtype=np.float64)
        labels = np.asarray(self.labels)
        ids = tuple(str(s) for s in self.model_ids)

        if probs.ndim != 2:
            raise ValidationError(
                f"probabilities must be 2-dimensional, got shape {probs.shape}"
            )
        n, m = probs.shape
        if n < 1 or m < 1:
            raise ValidationError(
                f"need at least one point and one model, got shape {probs.shape}"
            )
        if labels.shape != (n,):
            raise ValidationError(
                f"labels must have shape ({n},), got {labels.shape}"
            )
        bad_label = ~np.isin(labels, (0, 1))
        if bad_label.any():
            row = int(np.argmax(bad_label))
            raise ValidationError(
                f"label at row {row} is {labels[row]!r}, expected 0 or 1"
            )
        out_of_range = ~((probs >= 0.0) & (probs <= 1.0))
        if out_of_range.any():
            row, col = np.unravel_index(int(np.argmax(out_of_range)), probs.shape)
            raise ValidationError(
                f"probability at row {row}, column {col} is {probs[row, col]!r}, "
                f"expected a value in [0, 1]"
            )
        if len(ids) != m:
            raise ValidationError(
                f"model_ids has {len(ids)} entries for {m} probability columns"
            )

        object.__setattr__(self, "probabilities", _readonly(probs))
        object.__setattr__(self, "labels", _readonly(labels.astype(np.int64)))
        object.__setattr__(self, "model_ids", ids)

    @property
    def n_points(self) -> int:
        return self.probabilities.shape[0]

    @property
    def n_models(self) -> int:
        return self.probabilities.shape[1]


@dataclass(frozen=True)
class GameOutcome:
    """Whether the grand coalition clears the cutoff, and its total weight."""

    won: bool
    total_weight: float


@dataclass(frozen=True)
class SimplifiedGame:
    """A voting game in cutoff/weight form.

    A coalition ``S`` wins exactly when its summed weight reaches
    ``cutoff`` (the comparison is inclusive, ``>=``). The empty
    coalition is worth 0 by convention regardless of the cutoff, so
    the characteristic function stays a proper monotone game even at
    ``cutoff == 0``. Weights from a scored prediction lie in
    ``[0, 1/m]`` and that bound is enforced for every game.
    """

    cutoff: float
    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=np.float64)
        if weights.ndim != 1 or weights.size < 1:
            raise ValidationError(
                f"weights must be a non-empty 1-d vector, got shape {weights.shape}"
            )
        cutoff = float(self.cutoff)
        if not 0.0 <= cutoff <= 1.0:
            raise ValidationError(f"cutoff is {cutoff!r}, expected a value in [0, 1]")
        bound = 1.0 / weights.size
        out = ~((weights >= 0.0) & (weights <= bound))
        if out.any():
            j = int(np.argmax(out))
            raise ValidationError(
                f"weight at index {j} is {weights[j]!r}, expected a value in "
                f"[0, 1/m] = [0, {bound!r}]"
            )
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "weights", _readonly(weights))

    @property
    def n_players(self) -> int:
        return self.weights.size

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def outcome(self) -> GameOutcome:
        total = self.total_weight
        return GameOutcome(won=total >= self.cutoff, total_weight=total)

    def coalition_value(self, members) -> int:
        """Value of the coalition given by an index sequence or boolean mask."""
        members = np.asarray(members)
        if members.dtype == bool:
            if members.shape != self.weights.shape:
                raise ValidationError(
                    f"boolean mask must have shape {self.weights.shape}, "
                    f"got {members.shape}"
                )
            selected = self.weights[members]
        elif members.size == 0:
            return 0
        else:
            selected = self.weights[members.astype(np.intp)]
        if selected.size == 0:
            return 0
        return int(selected.sum() >= self.cutoff)


def score_point(probabilities, label) -> np.ndarray:
    """Turn one row of model probabilities into voting weights.

    With ``m`` models, model ``j`` receives weight ``p_j / m`` when the
    true label is 1 and ``(1 - p_j) / m`` when it is 0: in both cases
    the probability the model assigns to the *correct* class, scaled so
    the weights of a perfect ensemble sum to 1.
    """
    probs = np.array(probabilities, dtype=np.float64)
    if probs.ndim != 1 or probs.size < 1:
        raise ValidationError(
            f"probabilities must be a non-empty 1-d vector, got shape {probs.shape}"
        )
    out = ~((probs >= 0.0) & (probs <= 1.0))
    if out.any():
        j = int(np.argmax(out))
        raise ValidationError(
            f"probability at index {j} is {probs[j]!r}, expected a value in [0, 1]"
        )
    if label not in (0, 1):
        raise ValidationError(f"label is {label!r}, expected 0 or 1")
    m = probs.size
    correct_mass = probs if label == 1 else 1.0 - probs
    return correct_mass / m


def score_dataset(dataset: PredictionDataset) -> np.ndarray:
    """Voting weights for every point, shape ``(n, m)``.

    Row ``i`` equals ``score_point(dataset.probabilities[i],
    dataset.labels[i])`` bit for bit; this is just the vectorized form.
    """
    probs = dataset.probabilities
    correct_mass = np.where(dataset.labels[:, None] == 1, probs, 1.0 - probs)
    return correct_mass / dataset.n_models


def build_game(weights, cutoff: float) -> SimplifiedGame:
    """Validate and assemble a game from a weight vector and a cutoff."""
    return SimplifiedGame(cutoff=cutoff, weights=weights)


def dualize(game: SimplifiedGame) -> SimplifiedGame:
    """The complementary game that credits players for a misclassification.

    Weights map to ``1/m - w_j`` (the probability mass each model put on
    the *wrong* class, scaled by ``1/m``) and the cutoff to
    ``1 - cutoff``. A game that is strictly lost has a strictly won
    dual, so misclassified points can be attributed with the same
    solvers as classified ones. Applying ``dualize`` twice returns the
    original game up to floating-point round-off.
    """
    bound = 1.0 / game.n_players
    return SimplifiedGame(cutoff=1.0 - game.cutoff, weights=bound - game.weights)


def weight_moments(weights) -> tuple[float, float]:
    """Mean and population variance (divisor ``m``) of a weight vector.

    These are the two statistics the Gaussian solvers summarize a game
    by. Under dualization the mean maps to ``1/m - mean`` and the
    variance is unchanged.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.ndim != 1 or weights.size < 1:
        raise ValidationError(
            f"weights must be a non-empty 1-d vector, got shape {weights.shape}"
        )
    mean = float(weights.mean())
    if np.all(weights == weights[0]):
        # Exactly-constant vectors must report exactly zero variance so
        # degenerate inputs are detectable downstream.
        return mean, 0.0
    variance = float(np.mean((weights - mean) ** 2))
    return mean, variance
