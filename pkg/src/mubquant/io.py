"""File formats: coincidence matrices, camera configs, states and reports."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import MubQuantError
from .witness import CoincidenceMatrix


class FormatError(MubQuantError):
    """Malformed input file; the message names the offending field."""


def coincidence_to_json(cm: CoincidenceMatrix) -> str:
    counts = np.asarray(cm.counts)
    if not np.all(counts == np.round(counts)):
        raise FormatError("counts: only integer coincidence counts can be written")
    rows = ",\n".join(
        "    [" + ", ".join(str(int(v)) for v in row) + "]" for row in counts
    )
    return (
        "{\n"
        f'  "dimension": {cm.dim},\n'
        f'  "basis_label": {json.dumps(cm.basis_label)},\n'
        f'  "counts": [\n{rows}\n  ]\n'
        "}\n"
    )


def coincidence_from_json(text: str) -> CoincidenceMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FormatError("top level: expected a JSON object")
    for key in ("dimension", "counts"):
        if key not in data:
            raise FormatError(f"{key}: missing field")
    dim = data["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError(f"dimension: expected a positive integer, got {dim!r}")
    label = data.get("basis_label", "")
    if not isinstance(label, str):
        raise FormatError(f"basis_label: expected a string, got {label!r}")
    counts = data["counts"]
    if not isinstance(counts, list) or len(counts) != dim:
        raise FormatError(f"counts: expected {dim} rows")
    for i, row in enumerate(counts):
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"counts[{i}]: expected {dim} entries")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise FormatError(f"counts[{i}][{j}]: expected a nonnegative integer, got {v!r}")
    arr = np.array(counts, dtype=np.int64)
    if arr.sum() == 0:
        raise FormatError("counts: total is zero")
    return CoincidenceMatrix(arr, label)


def read_coincidence(path) -> CoincidenceMatrix:
    return coincidence_from_json(Path(path).read_text())


def write_coincidence(cm: CoincidenceMatrix, path) -> None:
    Path(path).write_text(coincidence_to_json(cm))


def fmt(x) -> str:
    """Locale-free float formatting with 9 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x) or math.isnan(x):
        return str(x)
    return format(x, ".9g")


def report_to_json(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def report_to_csv(data: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for key, value in data.items():
        if isinstance(value, (list, tuple)):
            value = ";".join(str(v) for v in value)
        elif isinstance(value, (float, int, bool, np.floating, np.integer)):
            value = fmt(value)
        elif value is None:
            value = ""
        w.writerow([key, value])
    return buf.getvalue()


def state_from_json(text: str) -> tuple[np.ndarray, int, int]:
    """Read ``{"parties": n, "dimension": d, "real": [[..]], "imag": [[..]]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    for key in ("parties", "dimension", "real"):
        if key not in data:
            raise FormatError(f"{key}: missing field")
    n, d = data["parties"], data["dimension"]
    if not isinstance(n, int) or n < 2:
        raise FormatError(f"parties: expected an integer >= 2, got {n!r}")
    if not isinstance(d, int) or d < 2:
        raise FormatError(f"dimension: expected an integer >= 2, got {d!r}")
    try:
        re = np.array(data["real"], dtype=float)
    except (TypeError, ValueError):
        raise FormatError("real: expected a numeric matrix") from None
    try:
        im = np.array(data.get("imag", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError):
        raise FormatError("imag: expected a numeric matrix") from None
    dim = d**n
    for name, arr in (("real", re), ("imag", im)):
        if arr.shape != (dim, dim):
            raise FormatError(f"{name}: expected shape ({dim}, {dim}), got {arr.shape}")
    return re + 1j * im, n, d


def state_to_json(rho, n: int, d: int) -> str:
    rho = np.asarray(rho, dtype=complex)
    return json.dumps(
        {"parties": n, "dimension": d, "real": rho.real.tolist(), "imag": rho.imag.tolist()}
    )
