"""Reading and writing prediction datasets and report payloads.

Datasets travel as CSV (header ``label,<model id>,...``, one point per
row) or as JSON (``model_ids``, ``labels``, ``probabilities``). Floats
are written with full round-trip precision so a save/load cycle is
bit-exact. Report payloads are plain dicts tagged with a schema
version; JSON Schema documents for every payload kind ship with the
package.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .games import PredictionDataset

__all__ = [
    "SCHEMA_VERSION",
    "load_predictions",
    "save_predictions",
    "dataset_to_csv",
    "dataset_to_dict",
    "write_json",
    "write_csv_rows",
    "schema_for",
]

SCHEMA_VERSION = "ensemble-shapley/1"

_FORMATS = ("csv", "json")


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in _FORMATS:
            raise ValidationError(
                f"format is {fmt!r}, expected one of {', '.join(_FORMATS)}"
            )
        return fmt
    suffix = path.suffix.lower().lstrip(".")
    if suffix in _FORMATS:
        return suffix
    raise ValidationError(
        f"cannot infer format from {path.name!r}; pass format='csv' or 'json'"
    )


def _load_csv(text: str, source: str) -> PredictionDataset:
    reader = csv.reader(_stdio.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{source}: file is empty") from None
    if not header or header[0].strip() != "label":
        raise ValidationError(
            f"{source}: header must start with 'label', got {header[:1]!r}"
        )
    model_ids = tuple(name.strip() for name in header[1:])
    if not model_ids:
        raise ValidationError(f"{source}: header names no model columns")

    labels = []
    rows = []
    for i, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != len(model_ids) + 1:
            raise ValidationError(
                f"{source}: data row {i} has {len(row)} fields, expected "
                f"{len(model_ids) + 1}"
            )
        raw_label = row[0].strip()
        if raw_label not in ("0", "1"):
            raise ValidationError(
                f"{source}: label at data row {i} is {raw_label!r}, expected 0 or 1"
            )
        labels.append(int(raw_label))
        values = []
        for j, cell in enumerate(row[1:]):
            try:
                values.append(float(cell))
            except ValueError:
                raise ValidationError(
                    f"{source}: value at data row {i}, column {model_ids[j]!r} "
                    f"is {cell.strip()!r}, expected a number"
                ) from None
        rows.append(values)
    if not rows:
        raise ValidationError(f"{source}: no data rows")
    return PredictionDataset(np.array(rows), np.array(labels), model_ids)


def _load_json(text: str, source: str) -> PredictionDataset:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise ValidationError(f"{source}: top level must be an object")
    for key in ("model_ids", "labels", "probabilities"):
        if key not in payload:
            raise ValidationError(f"{source}: missing key {key!r}")
    model_ids = payload["model_ids"]
    if not isinstance(model_ids, list) or not all(
        isinstance(s, str) for s in model_ids
    ):
        raise ValidationError(f"{source}: model_ids must be a list of strings")
    try:
        probabilities = np.array(payload["probabilities"], dtype=np.float64)
    except (TypeError, ValueError):
        raise ValidationError(
            f"{source}: probabilities must be a rectangular numeric matrix"
        ) from None
    return PredictionDataset(probabilities, payload["labels"], tuple(model_ids))


def load_predictions(path, fmt: str | None = None) -> PredictionDataset:
    """Load a dataset from a CSV or JSON file; format inferred from suffix."""
    path = Path(path)
    kind = _infer_format(path, fmt)
    text = path.read_text(encoding="utf-8")
    if kind == "csv":
        return _load_csv(text, path.name)
    return _load_json(text, path.name)


def dataset_to_csv(dataset: PredictionDataset) -> str:
    out = _stdio.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", *dataset.model_ids])
    for label, row in zip(dataset.labels, dataset.probabilities):
        writer.writerow([int(label), *(repr(float(v)) for v in row)])
    return out.getvalue()


def dataset_to_dict(dataset: PredictionDataset) -> dict:
    return {
        "model_ids": list(dataset.model_ids),
        "labels": [int(v) for v in dataset.labels],
        "probabilities": [[float(v) for v in row] for row in dataset.probabilities],
    }


def save_predictions(dataset: PredictionDataset, path, fmt: str | None = None) -> None:
    """Write a dataset to CSV or JSON with round-trip float precision."""
    path = Path(path)
    kind = _infer_format(path, fmt)
    if kind == "csv":
        path.write_text(dataset_to_csv(dataset), encoding="utf-8")
    else:
        path.write_text(
            json.dumps(dataset_to_dict(dataset), indent=2) + "\n", encoding="utf-8"
        )


def _jsonable(value):
    if isinstance(value, float) and value != value:  # NaN has no JSON spelling
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(payload: dict, path=None) -> None:
    """Serialize a payload dict to a file, or stdout when no path is given."""
    text = json.dumps(_jsonable(payload), indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def write_csv_rows(rows: list[dict], path=None) -> None:
    """Write a list of uniform dicts as a delimited table."""
    if not rows:
        raise ValidationError("no rows to write")
    fieldnames = list(rows[0].keys())
    for i, row in enumerate(rows):
        if list(row.keys()) != fieldnames:
            raise ValidationError(f"row {i} does not match the header {fieldnames}")
    out = _stdio.StringIO()
    writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    text = out.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return value


def schema_for(kind: str) -> dict:
    """Return the JSON Schema document for a payload kind."""
    name = f"{kind}.schema.json"
    ref = resources.files("ensemble_shapley") / "schemas" / name
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValidationError(f"no schema for payload kind {kind!r}") from None
    return json.loads(text)
