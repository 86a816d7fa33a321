"""File formats: point-set CSV, plan/embedding JSON, curve directories."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .measures import DiscreteMeasure


def _fmt(x: float) -> str:
    return repr(float(x))


def write_measure(mu: DiscreteMeasure, path) -> None:
    """CSV with header ``x0,...,x{d-1},w``, one atom per row, shortest round-trip floats."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{k}" for k in range(mu.dim)] + ["w"])
        for x, p in zip(mu.points, mu.weights):
            w.writerow([_fmt(v) for v in x] + [_fmt(p)])


def read_measure(path) -> DiscreteMeasure:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if not header or header[-1] != "w":
        raise InputError(f"{path}: last column must be the weight column 'w'")
    expected = [f"x{k}" for k in range(len(header) - 1)]
    if header[:-1] != expected or not expected:
        raise InputError(f"{path}: expected header {','.join(expected + ['w'])}")
    body = [r for r in rows[1:] if r]
    if not body:
        raise InputError(f"{path}: no atoms")
    try:
        data = np.array(body, dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if data.shape[1] != len(header):
        raise InputError(f"{path}: ragged rows")
    return DiscreteMeasure(data[:, :-1], data[:, -1])


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def write_curve(frames, ts, out_dir, mode: str, lam: float | None) -> list[Path]:
    """One CSV per time step plus ``manifest.json`` listing them in order."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, (t, mu) in enumerate(zip(ts, frames)):
        p = out / f"frame_{i:03d}.csv"
        write_measure(mu, p)
        files.append(p)
    manifest = {
        "mode": mode,
        "ts": [float(t) for t in ts],
        "lambda": None if lam is None else float(lam),
        "files": [p.name for p in files],
    }
    write_json(manifest, out / "manifest.json")
    return files
