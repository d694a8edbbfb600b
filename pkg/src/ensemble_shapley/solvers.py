"""Shapley-value solvers for cutoff/weight voting games.

Four routes to the same quantity, trading accuracy for speed:

``exact``
    Full subset enumeration, ``O(2^m * m)``. Ground truth for small
    ensembles; refuses to run past a configurable player limit.
``mc``
    Seeded Monte Carlo over player permutations. For these 0/1 games
    each permutation credits exactly one pivotal player (when the grand
    coalition wins), so estimates are pivot frequencies.
``mle``
    A single-Gaussian surrogate: coalition weight is modeled as normal
    with the mean and variance implied by treating each player's weight
    as a draw from the empirical weight distribution. Linear in ``m``.
``emc``
    A per-size Gaussian surrogate: conditions on the number of players
    ahead of ``j`` in a random order and models the weight ahead of
    ``j`` at each size ``k`` as normal with ``k`` times the empirical
    moments. Quadratic in ``m`` and the default elsewhere in the
    package.

All solvers return raw marginal estimates and can rescale them to sum
to one on request; rescaling never manufactures values for a vector
that is identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateVarianceError, EnumerationLimitError, ValidationError
from .games import SimplifiedGame, weight_moments

__all__ = [
    "EXACT_PLAYER_LIMIT",
    "SOLVER_NAMES",
    "ShapleyVector",
    "SolverConfig",
    "SolverComparison",
    "exact_shapley",
    "mc_shapley",
    "mle_shapley",
    "emc_shapley",
    "solve_game",
    "compare_solvers",
]

EXACT_PLAYER_LIMIT = 20

SOLVER_NAMES = ("exact", "mc", "mle", "emc")

# Exact values below this magnitude are treated as zero when forming
# percentage errors, to avoid dividing by numerical dust.
PERCENTAGE_ERROR_FLOOR = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the solvers.

    ``permutations`` only affects ``mc``; ``stability`` is the variance
    floor for the Gaussian solvers; ``seed`` feeds every random draw;
    ``normalize`` selects whether solvers rescale their output to sum
    to one.
    """

    permutations: int = 1000
    stability: float = 1e-9
    seed: int = 42
    normalize: bool = True

    def __post_init__(self) -> None:
        if self.permutations < 1:
            raise ValidationError(
                f"permutations is {self.permutations!r}, expected a positive integer"
            )
        if not self.stability >= 0.0:
            raise ValidationError(
                f"stability is {self.stability!r}, expected a value >= 0"
            )


@dataclass(frozen=True)
class ShapleyVector:
    """Per-player attribution values plus provenance.

    ``values[j]`` is player ``j``'s (estimated) Shapley value,
    ``solver`` names the route that produced it, and ``normalized``
    records whether the vector was rescaled to unit sum.
    """

    values: np.ndarray
    solver: str
    normalized: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise ValidationError(
                f"values must be a non-empty 1-d vector, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_players(self) -> int:
        return self.values.size

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def normalize(self) -> "ShapleyVector":
        """Rescale to unit sum; an all-zero vector is returned unchanged."""
        total = self.total
        if total > 0.0:
            values = self.values / total
        else:
            values = self.values
        return ShapleyVector(values=values, solver=self.solver, normalized=True)


def _finish(values: np.ndarray, solver: str, config: SolverConfig) -> ShapleyVector:
    vector = ShapleyVector(values=values, solver=solver, normalized=False)
    return vector.normalize() if config.normalize else vector


def _normal_cdf(x: float, mean: float, variance: float) -> float:
    """CDF of a normal distribution, accurate to double round-off via erf."""
    return 0.5 * (1.0 + math.erf((x - mean) / math.sqrt(2.0 * variance)))


def exact_shapley(
    game: SimplifiedGame,
    config: SolverConfig | None = None,
    *,
    limit: int = EXACT_PLAYER_LIMIT,
) -> ShapleyVector:
    """Exact Shapley values by enumerating all 2^m coalitions.

    Player ``j``'s value is the sum over coalitions ``S`` not containing
    ``j`` of ``|S|! (m - |S| - 1)! / m!`` times the 0/1 gain from adding
    ``j``. For a won game the values sum to the grand-coalition value 1
    (efficiency) and are individually nonnegative because the game is
    monotone; for a lost game every value is 0.
    """
    if config is None:
        config = SolverConfig()
    m = game.n_players
    if m > limit:
        raise EnumerationLimitError(
            f"exact enumeration supports at most {limit} players, got {m}; "
            f"use an approximate solver instead"
        )
    weights = game.weights
    n_masks = 1 << m
    masks = np.arange(n_masks, dtype=np.int64)

    member = np.empty((m, n_masks), dtype=bool)
    coalition_weight = np.zeros(n_masks, dtype=np.float64)
    for j in range(m):
        member[j] = (masks >> j) & 1 == 1
        coalition_weight[member[j]] += weights[j]

    won = coalition_weight >= game.cutoff
    won[0] = False  # empty coalition is worth 0 by convention
    sizes = member.sum(axis=0)

    # coefficient for |S| = s: s! (m-s-1)! / m! == 1 / (m * C(m-1, s))
    coef = np.array(
        [1.0 / (m * math.comb(m - 1, s)) for s in range(m)], dtype=np.float64
    )

    values = np.zeros(m, dtype=np.float64)
    for j in range(m):
        without_j = masks[~member[j]]
        pivotal = won[without_j | (1 << j)] & ~won[without_j]
        values[j] = coef[sizes[without_j[pivotal]]].sum()
    return _finish(values, "exact", config)


def mc_shapley(game: SimplifiedGame, config: SolverConfig | None = None) -> ShapleyVector:
    """Monte Carlo Shapley estimate from seeded random permutations.

    Walks ``permutations`` random player orders; in each, the single
    player whose arrival first pushes the running weight past the
    cutoff earns the permutation's unit of credit. Raw estimates are
    pivot counts over the permutation count, so for a won game they sum
    to the grand-coalition value exactly, and for a lost game the
    estimate is identically zero without sampling.
    """
    if config is None:
        config = SolverConfig()
    m = game.n_players
    p = config.permutations
    if not game.outcome().won:
        return _finish(np.zeros(m, dtype=np.float64), "mc", config)

    rng = np.random.default_rng(config.seed)
    orders = rng.permuted(np.tile(np.arange(m), (p, 1)), axis=1)
    running = np.cumsum(game.weights[orders], axis=1)
    reached = running >= game.cutoff
    pivot_position = np.argmax(reached, axis=1)
    # The grand coalition wins, so every order flips somewhere; if a
    # row's final rounding leaves no flip, credit the last arrival.
    pivot_position[~reached[:, -1]] = m - 1
    pivots = orders[np.arange(p), pivot_position]
    counts = np.bincount(pivots, minlength=m)
    return _finish(counts / p, "mc", config)


def _gaussian_moments(game: SimplifiedGame, config: SolverConfig) -> tuple[float, float]:
    mean, variance = weight_moments(game.weights)
    floored = max(variance, config.stability)
    if floored <= 0.0:
        raise DegenerateVarianceError(
            "weight variance is 0 and the stability floor is 0; "
            "pass a positive stability floor to use a Gaussian solver"
        )
    return mean, floored


def mle_shapley(game: SimplifiedGame, config: SolverConfig | None = None) -> ShapleyVector:
    """Single-Gaussian Shapley estimate, linear in the player count.

    Models the weight accumulated ahead of player ``j`` as one normal
    with the empirical weight mean and (floored) variance, and scores
    ``j`` by the probability mass that lands in the pivotal window
    ``[cutoff - w_j, cutoff)``. Fast and rough; a zero-weight player is
    always scored 0.
    """
    if config is None:
        config = SolverConfig()
    mean, variance = _gaussian_moments(game, config)
    cutoff = game.cutoff
    upper = _normal_cdf(cutoff, mean, variance)
    values = np.array(
        [
            max(0.0, upper - _normal_cdf(cutoff - w, mean, variance))
            for w in game.weights
        ],
        dtype=np.float64,
    )
    return _finish(values, "mle", config)


def emc_shapley(game: SimplifiedGame, config: SolverConfig | None = None) -> ShapleyVector:
    """Size-conditioned Gaussian Shapley estimate, quadratic in ``m``.

    Averages, over the ``m`` equally likely positions player ``j`` can
    take in a random order, the probability that the weight of the
    ``k - 1`` players ahead lands in ``[cutoff - w_j, cutoff)``. The
    weight ahead is exactly 0 when ``j`` arrives first and is modeled
    as normal with ``k - 1`` times the empirical weight moments
    otherwise (the variance floored once, like the single-Gaussian
    route). Shares its moment inputs across all players, so one game
    costs ``O(m^2)``.
    """
    if config is None:
        config = SolverConfig()
    m = game.n_players
    weights = game.weights
    cutoff = game.cutoff
    values = np.zeros(m, dtype=np.float64)

    if m == 1:
        # Only the first-arrival term exists and no Gaussian is needed.
        w = float(weights[0])
        values[0] = 1.0 if (cutoff - w <= 0.0 < cutoff) else 0.0
        return _finish(values / m, "emc", config)

    mean, variance = _gaussian_moments(game, config)
    ahead_mean = [(k - 1) * mean for k in range(2, m + 1)]
    ahead_var = [max((k - 1) * variance, config.stability) for k in range(2, m + 1)]
    upper = [
        _normal_cdf(cutoff, ahead_mean[i], ahead_var[i]) for i in range(m - 1)
    ]
    for j in range(m):
        w = float(weights[j])
        acc = 1.0 if (cutoff - w <= 0.0 < cutoff) else 0.0
        for i in range(m - 1):
            acc += max(
                0.0, upper[i] - _normal_cdf(cutoff - w, ahead_mean[i], ahead_var[i])
            )
        values[j] = acc / m
    return _finish(values, "emc", config)


_SOLVERS = {
    "exact": exact_shapley,
    "mc": mc_shapley,
    "mle": mle_shapley,
    "emc": emc_shapley,
}


def solve_game(
    game: SimplifiedGame, solver: str, config: SolverConfig | None = None
) -> ShapleyVector:
    """Dispatch to a solver by name; see ``SOLVER_NAMES`` for options."""
    try:
        fn = _SOLVERS[solver]
    except KeyError:
        raise ValidationError(
            f"unknown solver {solver!r}, expected one of {', '.join(SOLVER_NAMES)}"
        ) from None
    return fn(game, config)


@dataclass(frozen=True)
class SolverComparison:
    """Per-model percentage errors of each solver against exact values.

    ``percentage_errors[name][j]`` is ``|estimate_j - exact_j|`` over
    ``max(|exact_j|, floor)`` as a percentage; ``floored[j]`` marks
    models whose exact value sits below the floor, where the percentage
    is against the floor rather than a true relative error.
    ``mean_percentage_error`` averages over all models,
    ``mean_percentage_error_clean`` only over unfloored ones (``nan``
    when every model is floored).
    """

    exact_values: np.ndarray
    estimates: dict[str, np.ndarray]
    percentage_errors: dict[str, np.ndarray]
    mean_percentage_error: dict[str, float]
    mean_percentage_error_clean: dict[str, float]
    floored: np.ndarray
    floor: float = PERCENTAGE_ERROR_FLOOR

    def to_dict(self) -> dict:
        return {
            "floor": self.floor,
            "floored_models": [int(j) for j in np.flatnonzero(self.floored)],
            "exact": [float(v) for v in self.exact_values],
            "solvers": {
                name: {
                    "estimate": [float(v) for v in self.estimates[name]],
                    "percentage_error": [
                        float(v) for v in self.percentage_errors[name]
                    ],
                    "mean_percentage_error": float(
                        self.mean_percentage_error[name]
                    ),
                    "mean_percentage_error_clean": float(
                        self.mean_percentage_error_clean[name]
                    ),
                }
                for name in self.estimates
            },
        }


def compare_solvers(
    game: SimplifiedGame,
    config: SolverConfig | None = None,
    solvers: tuple[str, ...] = SOLVER_NAMES,
) -> SolverComparison:
    """Score every requested solver against exact enumeration on one game.

    The exact reference is always raw (unnormalized); the estimates
    honor ``config.normalize``, which is how the solvers are used in
    practice. On a won game the raw exact values already sum to one, so
    the two conventions coincide there.
    """
    if config is None:
        config = SolverConfig()
    reference = exact_shapley(game, replace(config, normalize=False))
    exact_values = reference.values
    floored = np.abs(exact_values) < PERCENTAGE_ERROR_FLOOR
    denominator = np.maximum(np.abs(exact_values), PERCENTAGE_ERROR_FLOOR)

    estimates: dict[str, np.ndarray] = {}
    errors: dict[str, np.ndarray] = {}
    means: dict[str, float] = {}
    means_clean: dict[str, float] = {}
    for name in solvers:
        estimate = solve_game(game, name, config).values
        ape = np.abs(estimate - exact_values) / denominator * 100.0
        estimates[name] = estimate
        errors[name] = ape
        means[name] = float(ape.mean())
        means_clean[name] = (
            float(ape[~floored].mean()) if (~floored).any() else float("nan")
        )
    return SolverComparison(
        exact_values=exact_values,
        estimates=estimates,
        percentage_errors=errors,
        mean_percentage_error=means,
        mean_percentage_error_clean=means_clean,
        floored=floored,
    )
