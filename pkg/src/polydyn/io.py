"""Reading and writing matrices, vectors and results.

Matrices are CSV (one row per line, ``.`` decimal point) or JSON objects
``{"n": rows, "m": cols, "entries": [...]}`` with row-major entries, either
flat or nested. Damping vectors are one CSV line or a JSON array. Floats are
written with 17 significant digits, so every value re-reads bit-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = [
    "FileFormatError",
    "fmt",
    "read_matrix",
    "read_vector",
    "write_matrix",
    "write_vector",
    "matrix_json",
    "write_json",
    "write_trajectory",
    "limit_json",
    "design_json",
    "feasibility_json",
]


class FileFormatError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, path, message, line: int | None = None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(tok: str, path, line: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise FileFormatError(path, f"not a number: {tok.strip()!r}", line) from None


def _read_csv_rows(path) -> list[tuple[int, list[float]]]:
    rows = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not t.strip() for t in rec) or rec[0].lstrip().startswith("#"):
                continue
            rows.append((lineno, [_parse_float(t, path, lineno) for t in rec]))
    return rows


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FileFormatError(path, f"invalid JSON: {e.msg}", e.lineno) from None


def read_matrix(path) -> np.ndarray:
    """Read an ``(n, m)`` matrix from CSV or JSON (chosen by extension)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        obj = _load_json(path)
        if isinstance(obj, list):
            entries, n, m = obj, None, None
        elif isinstance(obj, dict):
            unknown = set(obj) - {"n", "m", "entries"}
            if unknown:
                raise FileFormatError(path, f"unknown keys {sorted(unknown)}")
            if "entries" not in obj:
                raise FileFormatError(path, "missing 'entries'")
            entries, n, m = obj["entries"], obj.get("n"), obj.get("m")
        else:
            raise FileFormatError(path, "expected an object or array")
        try:
            X = np.array(entries, dtype=float)
        except (TypeError, ValueError):
            raise FileFormatError(path, "entries are not a numeric array") from None
        if X.ndim == 1:
            if n is None or m is None:
                if m is None and n is not None:
                    m = X.size // max(n, 1)
                else:
                    raise FileFormatError(path, "flat entries need 'n' and 'm'")
            if X.size != n * m:
                raise FileFormatError(path, f"{X.size} entries, expected n*m = {n * m}")
            X = X.reshape(n, m)
        elif X.ndim != 2:
            raise FileFormatError(path, "entries must be flat or a list of rows")
        elif (n is not None and X.shape[0] != n) or (m is not None and X.shape[1] != m):
            raise FileFormatError(path, f"entries have shape {X.shape}, header says ({n}, {m})")
        return X

    rows = _read_csv_rows(path)
    if not rows:
        raise FileFormatError(path, "no data")
    width = len(rows[0][1])
    for lineno, vals in rows:
        if len(vals) != width:
            raise FileFormatError(path, f"expected {width} values, found {len(vals)}", lineno)
    return np.array([vals for _, vals in rows], dtype=float)


def read_vector(path) -> np.ndarray:
    """Read a vector: one CSV line, one CSV column, or a JSON array."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        obj = _load_json(path)
        if isinstance(obj, dict) and "entries" in obj:
            obj = obj["entries"]
        try:
            v = np.array(obj, dtype=float)
        except (TypeError, ValueError):
            raise FileFormatError(path, "expected a numeric array") from None
        if v.ndim == 2 and 1 in v.shape:
            v = v.ravel()
        if v.ndim != 1:
            raise FileFormatError(path, "expected a one-dimensional array")
        return v
    X = read_matrix(path)
    if X.shape[0] == 1 or X.shape[1] == 1:
        return X.ravel()
    raise FileFormatError(path, f"expected a single line or column, found shape {X.shape}")


def matrix_json(X) -> dict:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return {"n": int(X.shape[0]), "m": int(X.shape[1]),
            "entries": [float(v) for v in X.ravel()]}


class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer, np.bool_)):
            return o.item()
        return super().default(o)


def write_json(obj, path) -> None:
    # json emits repr(float), the shortest string that round-trips exactly
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, cls=_Encoder, allow_nan=False)
        fh.write("\n")


def write_matrix(X, path, format: str | None = None) -> None:
    path = Path(path)
    format = format or ("json" if path.suffix.lower() == ".json" else "csv")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if format == "json":
        write_json(matrix_json(X), path)
        return
    with open(path, "w", newline="") as fh:
        for row in X:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_vector(v, path, format: str | None = None) -> None:
    path = Path(path)
    format = format or ("json" if path.suffix.lower() == ".json" else "csv")
    v = np.asarray(v, dtype=float).ravel()
    if format == "json":
        write_json([float(x) for x in v], path)
        return
    with open(path, "w") as fh:
        fh.write(",".join(fmt(x) for x in v) + "\n")


def write_trajectory(traj, path) -> None:
    """Long-format CSV with columns ``k, node, dim, value`` (1-based indices)."""
    with open(path, "w", newline="") as fh:
        fh.write("k,node,dim,value\n")
        for k, X in zip(traj.steps, traj.states):
            n, m = X.shape
            for i in range(n):
                for h in range(m):
                    fh.write(f"{int(k)},{i + 1},{h + 1},{fmt(X[i, h])}\n")


def limit_json(limit, classification=None) -> dict:
    d = {
        "V": matrix_json(limit.V) if limit.V is not None else None,
        "X_inf": matrix_json(limit.X_inf),
        "method": limit.method,
        "diagnostics": dict(limit.diagnostics),
    }
    if classification is not None:
        d["diagnostics"]["case"] = classification.case
        d["diagnostics"]["converges"] = classification.converges
        d["diagnostics"]["spectral_radius_estimate"] = classification.spectral_radius_estimate
    return d


def design_json(sol) -> dict:
    return {"a": [float(x) for x in sol.a], "X0": matrix_json(sol.X0),
            "residual": float(sol.residual)}


def feasibility_json(rep) -> dict:
    return {
        "feasible": rep.feasible,
        "a": None if rep.a is None else [float(x) for x in rep.a],
        "per_node": list(rep.per_node),
        "candidates": [None if np.isnan(c) else float(c) for c in rep.candidates],
        "residual": rep.residual,
    }
