"""Command-line interface.

Every subcommand emits one JSON payload (stdout by default, a file with
``--out``); pointing ``--out`` at a ``.csv`` path writes the payload's
row table instead. ``--figures DIR`` additionally renders the payload
as a PNG named after its kind. Exit codes: 0 on success, 1 on data or
validation errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import EnsembleShapleyError, ValidationError
from .experiments import (
    SyntheticSpec,
    adversarial_study,
    forward_selection,
    generate_synthetic,
    runtime_sweep,
)
from .figures import render_figure, save_figure
from .games import build_game, score_point
from .io import (
    SCHEMA_VERSION,
    dataset_to_csv,
    load_predictions,
    save_predictions,
    write_csv_rows,
    write_json,
)
from .solvers import SOLVER_NAMES, SolverConfig, compare_solvers
from .valuation import (
    BoundParameters,
    error_bound,
    required_sample_size,
    single_game_error_bound,
    valuate,
)

__all__ = ["RunConfig", "main", "console_main"]


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: what to run, with which knobs, output where."""

    command: str
    cutoff: float
    solver: str
    solver_config: SolverConfig
    out: Path | None
    figures: Path | None


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        cutoff=getattr(args, "gamma", 0.5),
        solver=getattr(args, "solver", "emc"),
        solver_config=SolverConfig(
            permutations=getattr(args, "permutations", 1000),
            stability=getattr(args, "delta", 1e-9),
            seed=getattr(args, "seed", 42),
            normalize=not getattr(args, "no_normalize", False),
        ),
        out=Path(args.out) if getattr(args, "out", None) else None,
        figures=Path(args.figures) if getattr(args, "figures", None) else None,
    )


def _emit(payload: dict, rows: list[dict] | None, run: RunConfig) -> None:
    if run.out is not None and run.out.suffix.lower() == ".csv":
        if rows is None:
            raise ValidationError(
                f"{payload.get('kind')} has no row table; write JSON instead"
            )
        write_csv_rows(rows, run.out)
    else:
        write_json(payload, run.out)
    if run.figures is not None:
        run.figures.mkdir(parents=True, exist_ok=True)
        fig = render_figure(payload)
        save_figure(fig, run.figures / f"{payload['kind']}.png")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None


def _cmd_value(args: argparse.Namespace) -> None:
    run = _run_config(args)
    dataset = load_predictions(args.input, args.format)
    valuations, report = valuate(dataset, run.cutoff, run.solver_config, run.solver)
    payload = report.to_dict()

    def pick(block: dict, variant: str, j: int):
        vector = block[variant]
        return None if vector is None else vector[j]

    rows = [
        {
            "model_index": j,
            "model_id": model_id,
            "avg_positive_raw": pick(payload["avg_positive"], "raw", j),
            "avg_positive_normalized": pick(payload["avg_positive"], "normalized", j),
            "avg_negative_raw": pick(payload["avg_negative"], "raw", j),
            "avg_negative_normalized": pick(payload["avg_negative"], "normalized", j),
        }
        for j, model_id in enumerate(dataset.model_ids)
    ]
    _emit(payload, rows, run)
    if args.points:
        point_rows = []
        for pv in valuations:
            row: dict = {"point": pv.index, "classified": int(pv.classified)}
            for j, model_id in enumerate(dataset.model_ids):
                row[f"ensemble_{model_id}"] = float(pv.ensemble.values[j])
            for j, model_id in enumerate(dataset.model_ids):
                row[f"dual_{model_id}"] = float(pv.dual.values[j])
            point_rows.append(row)
        write_csv_rows(point_rows, Path(args.points))


def _cmd_entropy(args: argparse.Namespace) -> None:
    run = _run_config(args)
    dataset = load_predictions(args.input, args.format)
    _, report = valuate(dataset, run.cutoff, run.solver_config, run.solver)
    m = dataset.n_models
    payload = {
        "schema": SCHEMA_VERSION,
        "kind": "entropy-report",
        "cutoff": run.cutoff,
        "solver": run.solver,
        "n_points": report.n_points,
        "n_positive": report.n_positive,
        "n_negative": report.n_negative,
        "model_count": m,
        "max_entropy": math.log(m),
        "entropy_positive": report.entropy_positive,
        "entropy_negative": report.entropy_negative,
    }
    rows = [
        {
            "subset": "classified",
            "count": report.n_positive,
            "entropy": report.entropy_positive,
            "max_entropy": math.log(m),
        },
        {
            "subset": "misclassified",
            "count": report.n_negative,
            "entropy": report.entropy_negative,
            "max_entropy": math.log(m),
        },
    ]
    _emit(payload, rows, run)


def _cmd_select(args: argparse.Namespace) -> None:
    run = _run_config(args)
    value_split = load_predictions(args.input, args.format)
    test_split = load_predictions(args.test, args.format)
    trace = forward_selection(
        value_split, test_split, run.cutoff, run.solver_config, run.solver
    )
    _emit(trace.to_dict(), trace.to_rows(), run)


def _cmd_compare(args: argparse.Namespace) -> None:
    run = _run_config(args)
    dataset = load_predictions(args.input, args.format)
    solvers = tuple(args.solvers.split(","))
    for name in solvers:
        if name not in SOLVER_NAMES:
            raise ValidationError(
                f"unknown solver {name!r}, expected one of {', '.join(SOLVER_NAMES)}"
            )
    rows = []
    sums = {name: 0.0 for name in solvers}
    clean_values: dict[str, list[float]] = {name: [] for name in solvers}
    floored_total = 0
    for i in range(dataset.n_points):
        weights = score_point(dataset.probabilities[i], int(dataset.labels[i]))
        game = build_game(weights, run.cutoff)
        config = replace(run.solver_config, seed=run.solver_config.seed + i)
        comparison = compare_solvers(game, config, solvers)
        n_floored = int(comparison.floored.sum())
        floored_total += n_floored
        for name in solvers:
            mean_ape = comparison.mean_percentage_error[name]
            clean = comparison.mean_percentage_error_clean[name]
            rows.append(
                {
                    "point": i,
                    "solver": name,
                    "mean_percentage_error": mean_ape,
                    "mean_percentage_error_clean": clean,
                    "floored_models": n_floored,
                }
            )
            sums[name] += mean_ape
            if clean == clean:  # skip the all-floored points
                clean_values[name].append(clean)
    aggregate = {
        name: {
            "mean_percentage_error": sums[name] / dataset.n_points,
            "mean_percentage_error_clean": (
                float(np.mean(clean_values[name])) if clean_values[name] else None
            ),
            "floored_components": floored_total,
        }
        for name in solvers
    }
    payload = {
        "schema": SCHEMA_VERSION,
        "kind": "solver-comparison",
        "cutoff": run.cutoff,
        "n_points": dataset.n_points,
        "solvers": list(solvers),
        "floor": 1e-12,
        "aggregate": aggregate,
        "rows": rows,
    }
    _emit(payload, rows, run)


def _cmd_bound(args: argparse.Namespace) -> None:
    run = _run_config(args)
    required = required_sample_size(args.m, args.epsilon, args.alpha)
    n = args.n if args.n is not None else required
    params = BoundParameters(n=n, m=args.m, epsilon=args.epsilon, alpha=args.alpha)
    bound = error_bound(params)
    payload = {
        "schema": SCHEMA_VERSION,
        "kind": "bound-report",
        "m": args.m,
        "epsilon": args.epsilon,
        "alpha": args.alpha,
        "n": n,
        "required_n": required,
        "error_bound": bound,
        "vacuous": bound > 1.0,
        "single_game_bound": single_game_error_bound(args.m),
    }
    rows = [{k: v for k, v in payload.items() if k not in ("schema", "kind")}]
    _emit(payload, rows, run)


def _cmd_simulate(args: argparse.Namespace) -> None:
    mix = _parse_floats(args.mix)
    quality_mix: float | tuple[float, ...]
    quality_mix = mix[0] if len(mix) == 1 else tuple(mix)
    spec = SyntheticSpec(
        n_points=args.points,
        n_models=args.models,
        signal=args.signal,
        quality_mix=quality_mix,
        seed=args.seed,
    )
    dataset = generate_synthetic(spec)
    if args.out:
        save_predictions(dataset, args.out, args.format)
    else:
        sys.stdout.write(dataset_to_csv(dataset))


def _cmd_adversarial(args: argparse.Namespace) -> None:
    run = _run_config(args)
    dataset = load_predictions(args.input, args.format)
    if args.adversarial:
        adversarial = tuple(_parse_ints(args.adversarial))
    else:
        adversarial = tuple(range(dataset.n_models // 2))
    ratios = tuple(_parse_floats(args.ratios))
    study = adversarial_study(
        dataset,
        adversarial,
        ratios,
        cutoff=run.cutoff,
        config=run.solver_config,
        solver=run.solver,
        noise_seed=args.noise_seed,
    )
    _emit(study.to_dict(), study.to_rows(), run)


def _cmd_bench(args: argparse.Namespace) -> None:
    run = _run_config(args)
    sizes = []
    for part in args.sizes.split(","):
        part = part.strip()
        fields = part.split("x")
        if len(fields) != 2:
            raise ValidationError(
                f"size {part!r} must look like <points>x<models>, e.g. 256x32"
            )
        sizes.append((int(fields[0]), int(fields[1])))
    solvers = tuple(args.solvers.split(","))
    rows = runtime_sweep(
        tuple(sizes),
        solvers,
        config=run.solver_config,
        cutoff=run.cutoff,
        runs=args.runs,
    )
    payload = {
        "schema": SCHEMA_VERSION,
        "kind": "benchmark-report",
        "runs": args.runs,
        "rows": [row.to_dict() for row in rows],
    }
    _emit(payload, payload["rows"], run)


def _add_io_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output path (.json or .csv); stdout when omitted")
    parser.add_argument(
        "--figures", help="directory to render the report figure (PNG) into"
    )


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, default=0.5,
                        help="acceptance cutoff (default 0.5)")
    parser.add_argument("--delta", type=float, default=1e-9,
                        help="variance stability floor (default 1e-9)")
    parser.add_argument("--solver", choices=SOLVER_NAMES, default="emc",
                        help="attribution solver (default emc)")
    parser.add_argument("--permutations", type=int, default=1000,
                        help="Monte Carlo permutation count (default 1000)")
    parser.add_argument("--seed", type=int, default=42,
                        help="random seed (default 42)")
    parser.add_argument("--no-normalize", action="store_true",
                        help="keep raw attribution instead of unit-sum rescaling")


def _add_input_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="prediction dataset path")
    parser.add_argument("--format", choices=("csv", "json"),
                        help="dataset format when the suffix is ambiguous")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemble-shapley",
        description="Shapley-value attribution for voting ensembles of binary "
                    "classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="attribute a dataset's decisions to its models")
    _add_input_options(p)
    _add_solver_options(p)
    _add_io_options(p)
    p.add_argument("--points", help="also write a per-point attribution CSV here")
    p.set_defaults(handler=_cmd_value)

    p = sub.add_parser("entropy", help="entropy of the averaged attribution profiles")
    _add_input_options(p)
    _add_solver_options(p)
    _add_io_options(p)
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("select", help="rank models by attribution and score prefixes")
    _add_input_options(p)
    p.add_argument("--test", required=True, help="held-out dataset path")
    _add_solver_options(p)
    _add_io_options(p)
    p.set_defaults(handler=_cmd_select)

    p = sub.add_parser("compare", help="score approximate solvers against exact")
    _add_input_options(p)
    _add_solver_options(p)
    p.add_argument("--solvers", default="exact,mc,mle,emc",
                   help="comma-separated solver list (default exact,mc,mle,emc)")
    _add_io_options(p)
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("bound", help="sample-size requirement and error bound")
    p.add_argument("--m", type=int, required=True, help="ensemble size")
    p.add_argument("--epsilon", type=float, required=True,
                   help="tolerated per-component error")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="failure probability (default 0.05)")
    p.add_argument("--n", type=int, help="evaluate the bound at this dataset size")
    _add_io_options(p)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("simulate", help="generate a synthetic prediction dataset")
    p.add_argument("--points", type=int, required=True, help="number of points")
    p.add_argument("--models", type=int, required=True, help="number of models")
    p.add_argument("--signal", type=float, default=0.9,
                   help="base probability of the true class (default 0.9)")
    p.add_argument("--mix", default="0.0",
                   help="noise mix per model: one value or a comma list (default 0)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--out", help="dataset path (.csv or .json); stdout CSV when omitted")
    p.add_argument("--format", choices=("csv", "json"),
                   help="dataset format when the suffix is ambiguous")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("adversarial", help="corrupt a model subset and track blame")
    _add_input_options(p)
    p.add_argument("--adversarial",
                   help="comma-separated model indices (default: first half)")
    p.add_argument("--ratios", default="0.0,0.25,0.5,0.75,1.0",
                   help="comma-separated noise ratios (default 0,0.25,0.5,0.75,1)")
    p.add_argument("--noise-seed", type=int, dest="noise_seed",
                   help="seed for the corruption noise (default: --seed)")
    _add_solver_options(p)
    _add_io_options(p)
    p.set_defaults(handler=_cmd_adversarial)

    p = sub.add_parser("bench", help="time the valuation pipeline on synthetic data")
    p.add_argument("--sizes", required=True,
                   help="comma-separated grid cells, each <points>x<models>")
    p.add_argument("--solvers", default="emc",
                   help="comma-separated solver list (default emc)")
    p.add_argument("--runs", type=int, default=10,
                   help="timed repetitions per cell (default 10)")
    _add_solver_options(p)
    _add_io_options(p)
    p.set_defaults(handler=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.handler(args)
    except (EnsembleShapleyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def console_main() -> None:
    sys.exit(main())
