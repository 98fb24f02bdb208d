"""JSON and CSV encodings.

Complex arrays are lists of ``[re, im]`` pairs in group enumeration order; plain
real numbers are accepted on input. Every top-level document carries a
``"schema"`` field.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidSpecError

SCENARIO_SCHEMA = "usampling.scenario/1"
KIT_SCHEMA = "usampling.kit/1"
SAMPLES_SCHEMA = "usampling.samples/1"
VECTOR_SCHEMA = "usampling.vector/1"
CSV_SCHEMA = "usampling.csv/1"


def complex_to_json(values) -> list:
    a = np.asarray(values, dtype=complex).ravel()
    return [[float(v.real), float(v.imag)] for v in a]


def complex_from_json(values) -> np.ndarray:
    out = []
    for v in values:
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append(complex(v))
        elif isinstance(v, (list, tuple)) and len(v) == 2:
            out.append(complex(float(v[0]), float(v[1])))
        else:
            raise InvalidSpecError(f"cannot read complex value from {v!r}")
    return np.array(out, dtype=complex)


def bundle_to_json(x) -> list:
    return [complex_to_json(row) for row in np.atleast_2d(x)]


def bundle_from_json(rows) -> np.ndarray:
    return np.array([complex_from_json(r) for r in rows], dtype=complex)


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"{path}: invalid JSON ({exc})") from exc


def write_csv(path, columns: dict) -> None:
    """Write named complex columns as ``<name>_re, <name>_im`` pairs; row 0 is the schema tag."""
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=complex).ravel() for n in names]
    length = max((a.size for a in arrays), default=0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["# schema", CSV_SCHEMA])
        w.writerow(["index"] + [f"{n}_{part}" for n in names for part in ("re", "im")])
        for i in range(length):
            row = [i]
            for a in arrays:
                row += [repr(float(a[i].real)), repr(float(a[i].imag))] if i < a.size else ["", ""]
            w.writerow(row)


def read_csv(path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["# schema", CSV_SCHEMA]:
        raise InvalidSpecError(f"{path}: not a {CSV_SCHEMA} file")
    header = rows[1][1:]
    names = [h[:-3] for h in header[::2]]
    cols = {n: [] for n in names}
    for row in rows[2:]:
        for j, n in enumerate(names):
            re, im = row[1 + 2 * j], row[2 + 2 * j]
            if re != "":
                cols[n].append(complex(float(re), float(im)))
    return {n: np.array(v, dtype=complex) for n, v in cols.items()}
