"""Process-matrix interchange files (extension .pm.json).

A document holds the party dimensions and the dense matrix with explicit
[re, im] entry pairs, row-major. Numbers serialize as shortest round-trip
decimals, so serialize/parse is bit exact. Hermiticity is not enforced at
parse time; validation is a separate command.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .linalg import DimensionPair
from .process import PartySpec, ProcessMatrix


class PMFileError(ValueError):
    """Malformed process-matrix document."""


def serialize(w: ProcessMatrix, label: str = None) -> str:
    d = w.spec.total_dim
    entries = [
        [float(z.real), float(z.imag)] for z in w.matrix.reshape(-1)
    ]
    doc = {
        "parties": [
            {"d_in": p.d_in, "d_out": p.d_out} for p in w.spec.parties
        ],
        "matrix": {"rows": d, "cols": d, "entries": entries},
    }
    if label is not None:
        doc["label"] = label
    return json.dumps(doc, indent=1)


def parse(text: str) -> ProcessMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PMFileError(f"syntax error at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from exc
    if not isinstance(doc, dict):
        raise PMFileError("document must be a JSON object")

    parties_raw = doc.get("parties")
    if not isinstance(parties_raw, list) or not parties_raw:
        raise PMFileError("'parties' must be a nonempty list")
    parties = []
    for i, p in enumerate(parties_raw):
        try:
            parties.append(DimensionPair(int(p["d_in"]), int(p["d_out"])))
        except (TypeError, KeyError, ValueError) as exc:
            raise PMFileError(f"party {i} needs positive integer d_in/d_out") from exc
    spec = PartySpec(tuple(parties))

    matrix_raw = doc.get("matrix")
    if not isinstance(matrix_raw, dict):
        raise PMFileError("'matrix' must be an object")
    try:
        rows, cols = int(matrix_raw["rows"]), int(matrix_raw["cols"])
        entries = matrix_raw["entries"]
    except (TypeError, KeyError, ValueError) as exc:
        raise PMFileError("'matrix' needs rows, cols and entries") from exc
    if rows != cols or rows != spec.total_dim:
        raise PMFileError(
            f"matrix is {rows}x{cols} but the party dimensions require "
            f"{spec.total_dim}x{spec.total_dim}"
        )
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise PMFileError(f"expected {rows * cols} entries, got "
                          f"{len(entries) if isinstance(entries, list) else 'non-list'}")

    values = np.empty(rows * cols, dtype=complex)
    for i, entry in enumerate(entries):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            raise PMFileError(f"entry {i} must be a [re, im] number pair")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise PMFileError(f"entry {i} is not finite")
        values[i] = complex(re, im)
    return ProcessMatrix(spec, values.reshape(rows, cols))


def load(path) -> ProcessMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def save(path, w: ProcessMatrix, label: str = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(w, label=label))
        fh.write("\n")
