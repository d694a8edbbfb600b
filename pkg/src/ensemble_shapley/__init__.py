"""Shapley-value attribution for voting ensembles of binary classifiers.

The package turns per-point class probabilities into cooperative voting
games, solves them exactly or approximately for Shapley values, and
aggregates the per-point vectors into model-level credit and blame
profiles with concentration measures, error bounds, and supporting
experiment drivers.
"""

from .errors import (
    DegenerateVarianceError,
    EnsembleShapleyError,
    EnumerationLimitError,
    UndefinedAUCError,
    UndefinedEntropyError,
    ValidationError,
)
from .experiments import (
    AdversarialRow,
    AdversarialStudy,
    BenchmarkRow,
    SelectionTrace,
    SyntheticSpec,
    adversarial_study,
    auc,
    corrupt,
    forward_selection,
    generate_synthetic,
    runtime_sweep,
)
from .games import (
    GameOutcome,
    PredictionDataset,
    SimplifiedGame,
    build_game,
    dualize,
    score_dataset,
    score_point,
    weight_moments,
)
from .io import (
    SCHEMA_VERSION,
    dataset_to_csv,
    dataset_to_dict,
    load_predictions,
    save_predictions,
    schema_for,
    write_csv_rows,
    write_json,
)
from .solvers import (
    EXACT_PLAYER_LIMIT,
    SOLVER_NAMES,
    ShapleyVector,
    SolverComparison,
    SolverConfig,
    compare_solvers,
    emc_shapley,
    exact_shapley,
    mc_shapley,
    mle_shapley,
    solve_game,
)
from .valuation import (
    BoundParameters,
    ConditionalAverages,
    PointValuation,
    ValuationReport,
    average_conditional,
    error_bound,
    required_sample_size,
    shapley_entropy,
    single_game_error_bound,
    valuate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "EnsembleShapleyError",
    "ValidationError",
    "EnumerationLimitError",
    "DegenerateVarianceError",
    "UndefinedEntropyError",
    "UndefinedAUCError",
    "PredictionDataset",
    "SimplifiedGame",
    "GameOutcome",
    "score_point",
    "score_dataset",
    "build_game",
    "dualize",
    "weight_moments",
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
    "SCHEMA_VERSION",
    "load_predictions",
    "save_predictions",
    "dataset_to_csv",
    "dataset_to_dict",
    "schema_for",
    "write_json",
    "write_csv_rows",
]
