"""File formats: curve datasets (CSV or JSON), label files, affinity matrices
and solver traces.

Dataset CSV schema: header ``curve_id,label,t_index,dim_0,...,dim_{n-1}``,
one row per sample; rows of a curve are ordered by ``t_index`` and curves
need not share a sample count.  The JSON form is
``{"n": int, "curves": [{"id": str, "label": int|null, "samples": [[...]]}]}``.

Floats are written as shortest round-trip decimal strings, so identical data
produces identical bytes.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .curves import Curve
from .datagen import Dataset
from .solver import SolverDiagnostics


def _fmt(x: float) -> str:
    return repr(float(x))


def dataset_ids(d: Dataset) -> list[str]:
    ids = d.meta.get("ids")
    if ids is not None and len(ids) == len(d.curves):
        return [str(i) for i in ids]
    width = max(4, len(str(len(d.curves))))
    return [f"c{i:0{width}d}" for i in range(len(d.curves))]


def write_dataset(path: str | os.PathLike, d: Dataset) -> None:
    """Write a dataset as CSV or JSON depending on the file extension."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        _write_dataset_json(path, d)
    else:
        _write_dataset_csv(path, d)


def read_dataset(path: str | os.PathLike) -> Dataset:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return _read_dataset_json(path)
    return _read_dataset_csv(path)


def _write_dataset_csv(path: Path, d: Dataset) -> None:
    ids = dataset_ids(d)
    dim = d.curves[0].dim if d.curves else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["curve_id", "label", "t_index"] + [f"dim_{k}" for k in range(dim)])
        for i, c in enumerate(d.curves):
            label = "" if d.labels is None else str(int(d.labels[i]))
            for t_index in range(c.n_samples):
                row = [ids[i], label, str(t_index)]
                row += [_fmt(v) for v in c.samples[t_index]]
                writer.writerow(row)


def _read_dataset_csv(path: Path) -> Dataset:
    order: list[str] = []
    rows: dict[str, list[tuple[int, list[float]]]] = {}
    labels: dict[str, int | None] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["curve_id", "label", "t_index"]:
            raise ValueError(f"{path}: not a curve dataset CSV (bad header)")
        dim = len(header) - 3
        if dim < 1:
            raise ValueError(f"{path}: no coordinate columns")
        for line in reader:
            if not line:
                continue
            cid, label, t_index = line[0], line[1], int(line[2])
            if cid not in rows:
                rows[cid] = []
                order.append(cid)
                labels[cid] = int(label) if label != "" else None
            rows[cid].append((t_index, [float(v) for v in line[3 : 3 + dim]]))
    curves = []
    for cid in order:
        samples = [v for _, v in sorted(rows[cid], key=lambda kv: kv[0])]
        curves.append(Curve(np.array(samples)))
    lab_values = [labels[cid] for cid in order]
    lab = np.array(lab_values, dtype=np.int64) if all(v is not None for v in lab_values) else None
    return Dataset(curves, lab, {"ids": order, "source": str(path)})


def _write_dataset_json(path: Path, d: Dataset) -> None:
    ids = dataset_ids(d)
    payload = {
        "n": d.curves[0].dim if d.curves else 0,
        "curves": [
            {
                "id": ids[i],
                "label": None if d.labels is None else int(d.labels[i]),
                "samples": [[float(v) for v in row] for row in c.samples],
            }
            for i, c in enumerate(d.curves)
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def _read_dataset_json(path: Path) -> Dataset:
    with open(path) as fh:
        payload = json.load(fh)
    curves = [Curve(np.array(entry["samples"], dtype=np.float64)) for entry in payload["curves"]]
    ids = [str(entry.get("id", i)) for i, entry in enumerate(payload["curves"])]
    lab_values = [entry.get("label") for entry in payload["curves"]]
    lab = np.array(lab_values, dtype=np.int64) if all(v is not None for v in lab_values) else None
    return Dataset(curves, lab, {"ids": ids, "source": str(path)})


def write_meta(path: str | os.PathLike, meta: dict) -> None:
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")


def write_labels(path: str | os.PathLike, ids: list[str], labels: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["curve_id", "label"])
        for cid, lab in zip(ids, labels):
            writer.writerow([cid, str(int(lab))])


def read_labels(path: str | os.PathLike) -> tuple[list[str], np.ndarray]:
    ids: list[str] = []
    labels: list[int] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["curve_id", "label"]:
            raise ValueError(f"{path}: not a labels CSV")
        for line in reader:
            if not line:
                continue
            ids.append(line[0])
            labels.append(int(line[1]))
    return ids, np.array(labels, dtype=np.int64)


def write_matrix(path: str | os.PathLike, M: np.ndarray) -> None:
    with open(path, "w") as fh:
        for row in np.atleast_2d(M):
            fh.write(",".join(_fmt(v) for v in row))
            fh.write("\n")


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def write_trace(path: str | os.PathLike, diag: SolverDiagnostics) -> None:
    """Per-iteration JSON-lines trace: {"k", "obj", "feas", "beta"}."""
    with open(path, "w") as fh:
        for k in range(diag.iterations):
            rec = {
                "k": k + 1,
                "obj": diag.objective_trace[k],
                "feas": diag.feasibility_trace[k],
                "beta": diag.beta_trace[k],
            }
            fh.write(json.dumps(rec))
            fh.write("\n")
