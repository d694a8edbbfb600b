"""Figure renderings of the report payloads.

Each renderer takes the JSON-ready payload dict produced by the CLI (or
the corresponding ``to_dict()``) and returns a matplotlib ``Figure``.
Rendering works straight from payloads so saved reports can be drawn
later without recomputing anything.
"""

from __future__ import annotations

import math

import numpy as np
from matplotlib.figure import Figure

from .errors import ValidationError

__all__ = ["render_figure", "save_figure"]


def _new_axes(width: float = 7.0, height: float = 4.0):
    fig = Figure(figsize=(width, height))
    ax = fig.subplots()
    ax.grid(True, alpha=0.3)
    return fig, ax


def _valuation_figure(payload: dict) -> Figure:
    variant = "normalized" if payload["config"]["normalize"] else "raw"
    positive = payload["avg_positive"][variant]
    negative = payload["avg_negative"][variant]
    ids = payload["model_ids"]
    x = np.arange(len(ids))
    fig, ax = _new_axes(max(7.0, 0.45 * len(ids)), 4.0)
    width = 0.4
    if positive is not None:
        ax.bar(x - width / 2, positive, width, label="classified (credit)")
    if negative is not None:
        ax.bar(x + width / 2, negative, width, label="misclassified (blame)")
    ax.set_xticks(x)
    ax.set_xticklabels(ids, rotation=90, fontsize=8)
    ax.set_ylabel(f"average attribution ({variant})")
    parts = []
    if payload["entropy_positive"] is not None:
        parts.append(f"H+ = {payload['entropy_positive']:.3f}")
    if payload["entropy_negative"] is not None:
        parts.append(f"H- = {payload['entropy_negative']:.3f}")
    suffix = f" ({', '.join(parts)})" if parts else ""
    ax.set_title(f"Attribution profile, solver {payload['solver']}{suffix}")
    ax.legend()
    return fig


def _entropy_figure(payload: dict) -> Figure:
    fig, ax = _new_axes(5.0, 4.0)
    names = ["classified", "misclassified"]
    values = [payload["entropy_positive"], payload["entropy_negative"]]
    x = np.arange(2)
    heights = [0.0 if v is None else v for v in values]
    ax.bar(x, heights, 0.5)
    for i, v in enumerate(values):
        if v is None:
            ax.annotate("absent", (x[i], 0.02), ha="center", fontsize=9)
    ax.axhline(payload["max_entropy"], linestyle="--", color="gray",
               label=f"ln m = {payload['max_entropy']:.3f}")
    ax.set_xticks(x)
    ax.set_xticklabels(names)
    ax.set_ylabel("attribution entropy")
    ax.set_title(f"Concentration of attribution, solver {payload['solver']}")
    ax.legend()
    return fig


def _selection_figure(payload: dict) -> Figure:
    rows = payload["rows"]
    k = [row["k"] for row in rows]
    fig, ax = _new_axes()
    ax.plot(k, [row["accuracy"] for row in rows], marker="o", label="accuracy")
    ax.plot(k, [row["auc"] for row in rows], marker="s", label="AUC")
    ax.set_xlabel("sub-ensemble size (best-ranked models first)")
    ax.set_ylabel("held-out score")
    ax.set_title(f"Forward selection by attribution, solver {payload['solver']}")
    ax.legend()
    return fig


def _comparison_figure(payload: dict) -> Figure:
    aggregate = payload["aggregate"]
    names = [name for name in aggregate if name != "exact"]
    values = [aggregate[name]["mean_percentage_error_clean"] for name in names]
    fig, ax = _new_axes(5.5, 4.0)
    x = np.arange(len(names))
    ax.bar(x, [0.0 if v is None else v for v in values], 0.5)
    ax.set_xticks(x)
    ax.set_xticklabels(names)
    ax.set_ylabel("mean percentage error vs exact")
    ax.set_title(f"Solver accuracy over {payload['n_points']} games")
    return fig


def _adversarial_figure(payload: dict) -> Figure:
    rows = payload["rows"]
    ratios = [row["noise_ratio"] for row in rows]
    fig, ax = _new_axes()
    ax.errorbar(
        ratios,
        [row["adversarial_mean"] for row in rows],
        yerr=[row["adversarial_se"] for row in rows],
        marker="o",
        capsize=3,
        label="adversarial group",
    )
    ax.errorbar(
        ratios,
        [row["honest_mean"] for row in rows],
        yerr=[row["honest_se"] for row in rows],
        marker="s",
        capsize=3,
        label="honest group",
    )
    ax.set_xlabel("noise ratio")
    ax.set_ylabel("mean positive attribution")
    ax.set_title(f"Attribution under corruption, solver {payload['solver']}")
    ax.legend()
    return fig


def _bound_figure(payload: dict) -> Figure:
    required = payload["required_n"]
    top = max(payload["n"], required) * 2
    grid = np.unique(np.geomspace(1, top, 200).astype(np.int64))
    scale = math.sqrt(payload["m"] * payload["epsilon"] ** 4 * math.pi / 8.0)
    bounds = 2.0 * np.exp(-grid * scale)
    fig, ax = _new_axes()
    ax.plot(grid, bounds, label="failure-probability bound")
    ax.axhline(payload["alpha"], linestyle="--", color="gray",
               label=f"alpha = {payload['alpha']}")
    ax.axvline(required, linestyle=":", color="C3",
               label=f"required n = {required}")
    ax.set_yscale("log")
    ax.set_xlabel("dataset size n")
    ax.set_ylabel("bound")
    ax.set_title(
        f"Sample-size requirement (m = {payload['m']}, "
        f"epsilon = {payload['epsilon']})"
    )
    ax.legend()
    return fig


def _benchmark_figure(payload: dict) -> Figure:
    rows = payload["rows"]
    fig, ax = _new_axes()
    groups: dict[tuple[str, int], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["solver"], row["n_points"]), []).append(row)
    for (solver, n_points), members in sorted(groups.items()):
        members = sorted(members, key=lambda r: r["n_models"])
        ax.plot(
            [r["n_models"] for r in members],
            [r["per_point_seconds"] for r in members],
            marker="o",
            label=f"{solver}, n = {n_points}",
        )
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("ensemble size m")
    ax.set_ylabel("seconds per point")
    ax.set_title("Valuation runtime scaling")
    ax.legend()
    return fig


_RENDERERS = {
    "valuation-report": _valuation_figure,
    "entropy-report": _entropy_figure,
    "selection-trace": _selection_figure,
    "solver-comparison": _comparison_figure,
    "adversarial-study": _adversarial_figure,
    "bound-report": _bound_figure,
    "benchmark-report": _benchmark_figure,
}


def render_figure(payload: dict) -> Figure:
    """Draw the figure matching ``payload['kind']``."""
    kind = payload.get("kind")
    try:
        renderer = _RENDERERS[kind]
    except KeyError:
        raise ValidationError(
            f"no figure renderer for payload kind {kind!r}"
        ) from None
    return renderer(payload)


def save_figure(fig: Figure, path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
