"""CSV ingestion, JSON/DOT result serialization, and report writing.

One CSV format everywhere: a header row of channel names, one numeric row per
observation. JSON sidecars carry generator parameters and ground truth for
simulated datasets. Network results serialize to a versioned JSON document
(matrices keyed by channel names, NaN as null) and to a DOT graph whose edges
are the connected links, colored by the sign of the balance index.
"""
from __future__ import annotations

import csv
import json
import math
from typing import Mapping

import numpy as np

from .data import SeriesDataset, SymbolDataset
from .errors import DataValidationError
from .network import BenchmarkReport, NetworkResult
from .physio import BeatSeries

SCHEMA_VERSION = 1
LN2 = math.log(2.0)

_BEAT_HEADERS = {"hp": "hp", "sp": "sp", "dp": "dp", "ra": "ra", "map": "map",
                 "zmax": "zmax", "z'max": "zmax", "lvet": "lvet"}


def _read_rows(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataValidationError(f"{path}: empty file") from None
        rows = list(reader)
    header = [name.strip() for name in header]
    if not rows:
        raise DataValidationError(f"{path}: no data rows")
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DataValidationError(
                f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}")
    return header, rows


def _parse_cell(path, r, name, cell) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DataValidationError(
            f"{path}: row {r + 2}, column {name}: not a number ({cell!r})") from None
    return value


def read_dataset(path, mode: str) -> SymbolDataset | SeriesDataset:
    """Load a CSV dataset; static mode validates integer symbols and infers
    per-channel alphabets, dynamic mode validates finite reals."""
    if mode not in ("static", "dynamic"):
        raise ValueError("mode must be 'static' or 'dynamic'")
    header, rows = _read_rows(path)
    data = np.empty((len(rows), len(header)))
    for r, row in enumerate(rows):
        for c, (name, cell) in enumerate(zip(header, row)):
            value = _parse_cell(path, r, name, cell)
            if not math.isfinite(value):
                raise DataValidationError(
                    f"{path}: row {r + 2}, column {name}: non-finite value")
            data[r, c] = value
    if mode == "dynamic":
        return SeriesDataset(data, tuple(header))
    if not np.equal(np.round(data), data).all():
        r, c = np.argwhere(np.round(data) != data)[0]
        raise DataValidationError(
            f"{path}: row {r + 2}, column {header[c]}: non-integer symbol in static mode")
    if data.min() < 0:
        r, c = np.argwhere(data < 0)[0]
        raise DataValidationError(
            f"{path}: row {r + 2}, column {header[c]}: negative symbol")
    symbols = data.astype(np.int64)
    sizes = tuple(int(symbols[:, c].max()) + 1 for c in range(symbols.shape[1]))
    return SymbolDataset(symbols, sizes, tuple(header))


def write_dataset(path, dataset: SymbolDataset | SeriesDataset) -> None:
    symbolic = isinstance(dataset, SymbolDataset)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.channel_names)
        for row in dataset.data:
            writer.writerow([int(v) if symbolic else repr(float(v)) for v in row])


def read_beat_series(path) -> BeatSeries:
    """Load a beat-series CSV with columns among HP, SP, DP, RA, MAP, ZMAX, LVET."""
    header, rows = _read_rows(path)
    columns: dict[str, list[float]] = {}
    for name in header:
        key = _BEAT_HEADERS.get(name.strip().lower())
        if key is None:
            raise DataValidationError(
                f"{path}: unknown beat column {name!r}; expected one of "
                f"{sorted(set(_BEAT_HEADERS))}")
        if key in columns:
            raise DataValidationError(f"{path}: duplicate beat column {name!r}")
        columns[key] = []
    keys = [(i, _BEAT_HEADERS[h.strip().lower()]) for i, h in enumerate(header)]
    for r, row in enumerate(rows):
        for i, key in keys:
            columns[key].append(_parse_cell(path, r, header[i], row[i]))
    return BeatSeries(**{k: np.array(v) for k, v in columns.items()})


def write_column(path, name: str, values: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([name])
        for v in np.asarray(values).reshape(-1):
            writer.writerow([int(v) if float(v).is_integer() else repr(float(v))])


def sidecar_path(dataset_path) -> str:
    return str(dataset_path) + ".meta.json"


def write_sidecar(dataset_path, payload: Mapping) -> None:
    with open(sidecar_path(dataset_path), "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2)
        fh.write("\n")


def read_sidecar(dataset_path) -> dict:
    with open(sidecar_path(dataset_path)) as fh:
        return json.load(fh)


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return None if math.isnan(value) else value
    return obj


def _named_matrix(names, matrix, diag=None, convert=float):
    out = {}
    for i, row_name in enumerate(names):
        row = {}
        for j, col_name in enumerate(names):
            if i == j:
                row[col_name] = diag
            else:
                value = matrix[i][j] if not isinstance(matrix, np.ndarray) else matrix[i, j]
                if isinstance(value, float) and math.isnan(value):
                    row[col_name] = None
                else:
                    row[col_name] = convert(value)
        out[row_name] = row
    return out


def result_to_json_dict(result: NetworkResult, bits: bool = False) -> dict:
    names = result.channel_names
    scale = 1.0 / LN2 if bits else 1.0

    def scaled(mat):
        return _named_matrix(names, mat * scale)

    class_matrix = [[None] * result.m for _ in range(result.m)]
    for (i, j), link in result.links.items():
        class_matrix[i][j] = class_matrix[j][i] = link.link_class
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": result.mode,
        "units": "bits" if bits else "nats",
        "channels": list(names),
        "config": _jsonable(result.config),
        "metadata": _jsonable(result.metadata),
        "measures": {
            "is": scaled(result.is_matrix),
            "cis": scaled(result.cis_matrix),
            "nis": scaled(result.nis_matrix),
            "b": _named_matrix(names, result.b_matrix),
        },
        "significance": {
            "is": _named_matrix(names, result._matrix(lambda l: l.is_significant, fill=0),
                                diag=None, convert=bool),
            "cis": _named_matrix(names, result._matrix(lambda l: l.cis_significant, fill=0),
                                 diag=None, convert=bool),
        },
        "link_class": {row: {c: class_matrix[i][j] for j, c in enumerate(names)}
                       for i, row in enumerate(names)},
        "adjacency": _named_matrix(names, result.adjacency, diag=False, convert=bool),
    }


def write_result(result: NetworkResult, json_path, dot_path=None,
                 bits: bool = False) -> None:
    with open(json_path, "w") as fh:
        json.dump(result_to_json_dict(result, bits=bits), fh, indent=2)
        fh.write("\n")
    if dot_path is not None:
        with open(dot_path, "w") as fh:
            fh.write(result_to_dot(result))


def result_to_dot(result: NetworkResult) -> str:
    """DOT graph of the reconstructed network: edges for connected links only,
    red for redundant (B > 0), blue for synergistic (B < 0), width ~ |B|."""
    lines = ["graph network {", "  node [shape=circle];"]
    for name in result.channel_names:
        lines.append(f'  "{name}";')
    for (i, j), link in sorted(result.links.items()):
        if not link.connected:
            continue
        b = link.b_index
        color = "gray" if b == 0 else ("red" if b > 0 else "blue")
        width = 1.0 + 4.0 * abs(b)
        lines.append(
            f'  "{result.channel_names[i]}" -- "{result.channel_names[j]}" '
            f'[color={color}, penwidth={width:.2f}, label="{b:.3f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_result_matrices(json_path) -> dict:
    """Reload the measure matrices of a result JSON as numpy arrays."""
    with open(json_path) as fh:
        doc = json.load(fh)
    names = doc["channels"]
    out = {"channels": names}
    for key, table in doc["measures"].items():
        mat = np.full((len(names), len(names)), np.nan)
        for i, row_name in enumerate(names):
            for j, col_name in enumerate(names):
                value = table[row_name][col_name]
                if value is not None:
                    mat[i, j] = value
        out[key] = mat
    return out


def write_benchmark_report(report: BenchmarkReport, csv_path, runs_csv_path=None) -> None:
    """Aggregate cells to one CSV; optional per-run detail to a second CSV."""
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "mode", "param", "n", "runs", "completed",
                         "failed", "tp", "fp", "tn", "fn", "sensitivity", "specificity"])
        for cell in report.cells():
            writer.writerow([report.scenario_id, report.mode, cell.point_label,
                             cell.n, cell.requested, cell.completed, cell.failed,
                             cell.tp, cell.fp, cell.tn, cell.fn,
                             f"{cell.sensitivity:.6f}", f"{cell.specificity:.6f}"])
    if runs_csv_path is None:
        return
    with open(runs_csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "param", "n", "run", "failed", "error",
                         "tp", "fp", "tn", "fn", "false_positives", "false_negatives"])
        for rec in report.records:
            fps = ";".join(f"{i}-{j}" for i, j in rec.false_positive_pairs)
            fns = ";".join(f"{i}-{j}" for i, j in rec.false_negative_pairs)
            writer.writerow([report.scenario_id, rec.point_label, rec.n, rec.run_index,
                             int(rec.failed), rec.error or "", rec.tp, rec.fp,
                             rec.tn, rec.fn, fps, fns])
