"""Matrix documents (versioned JSON) and a real-CSV importer.

A matrix document looks like::

    {
      "schema_version": "1.0",
      "kind": "state",
      "d1": 2,
      "d2": 2,
      "label": "rho1_2x2",
      "provenance": {"family": "fixture", "params": {"name": "rho1_2x2"}},
      "entries": [
        [[0.27, 0.0], [0.0, 0.0], ...],
        ...
      ]
    }

``entries`` is row-major, each entry an ``[re, im]`` pair.  Floats are written
with Python's shortest round-trip representation, so save/load is bit-exact.
``kind`` is ``"state"`` or ``"witness"``; ``label`` and ``provenance`` are
optional.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ValidationError

SCHEMA_VERSION = "1.0"
KINDS = ("state", "witness")
OUTPUT_DIR_ENV = "PTMOMENTS_OUTPUT_DIR"


class DocumentError(ValidationError):
    """A matrix file could not be parsed; the message names the location."""


@dataclass
class MatrixDocument:
    matrix: np.ndarray
    d1: int
    d2: int
    label: Optional[str] = None
    kind: str = "state"
    provenance: dict = field(default_factory=dict)

    @property
    def seed(self):
        return self.provenance.get("params", {}).get("seed")


def _float(x) -> float:
    x = float(x)
    # json has no NaN/Inf; keep output strictly standard.
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    return 0.0 if x == 0.0 else x


def dumps_document(doc: MatrixDocument) -> str:
    m = np.asarray(doc.matrix, dtype=complex)
    if doc.kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    head = {
        "schema_version": SCHEMA_VERSION,
        "kind": doc.kind,
        "d1": int(doc.d1),
        "d2": int(doc.d2),
        "label": doc.label,
    }
    if doc.provenance:
        head["provenance"] = doc.provenance
    lines = ["{"]
    for key, value in head.items():
        lines.append(f"  {json.dumps(key)}: {json.dumps(value, sort_keys=True)},")
    rows = [json.dumps([[_float(z.real), _float(z.imag)] for z in row]) for row in m]
    lines.append('  "entries": [')
    lines.append(",\n".join("    " + r for r in rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def resolve_output(path) -> Path:
    """Relative output paths land in $PTMOMENTS_OUTPUT_DIR when it is set."""
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def save_document(path, doc: MatrixDocument) -> Path:
    p = resolve_output(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps_document(doc), encoding="utf-8")
    return p


def _require(obj: dict, key: str, source: str):
    if key not in obj:
        raise DocumentError(f"{source}: missing field '{key}'")
    return obj[key]


def _positive_int(value, name: str, source: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DocumentError(f"{source}: field '{name}' must be a positive integer, got {value!r}")
    return value


def loads_document(text: str, source: str = "<string>") -> MatrixDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise DocumentError(f"{source}: top level must be an object")
    version = _require(obj, "schema_version", source)
    if str(version).split(".")[0] != SCHEMA_VERSION.split(".")[0]:
        raise DocumentError(f"{source}: unsupported schema_version {version!r} "
                            f"(this tool reads {SCHEMA_VERSION})")
    d1 = _positive_int(_require(obj, "d1", source), "d1", source)
    d2 = _positive_int(_require(obj, "d2", source), "d2", source)
    kind = obj.get("kind", "state")
    if kind not in KINDS:
        raise DocumentError(f"{source}: field 'kind' must be one of {KINDS}, got {kind!r}")
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise DocumentError(f"{source}: field 'label' must be a string")
    entries = _require(obj, "entries", source)
    n = d1 * d2
    if not isinstance(entries, list) or len(entries) != n:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise DocumentError(f"{source}: 'entries' must have {n} rows for a {d1}x{d2} system, got {got}")
    m = np.empty((n, n), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise DocumentError(f"{source}: entries[{i}] must be a list of {n} [re, im] pairs")
        for j, pair in enumerate(row):
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
                raise DocumentError(f"{source}: entries[{i}][{j}] must be a [re, im] pair of numbers, "
                                    f"got {pair!r}")
            m[i, j] = complex(pair[0], pair[1])
    provenance = obj.get("provenance") or {}
    if not isinstance(provenance, dict):
        raise DocumentError(f"{source}: field 'provenance' must be an object")
    return MatrixDocument(m, d1, d2, label, kind, provenance)


def load_document(path) -> MatrixDocument:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{p}: cannot read file: {exc.strerror}") from None
    return loads_document(text, str(p))


def load_csv(path, d1: int, d2: int, label: Optional[str] = None) -> MatrixDocument:
    """Real square matrix, one comma-separated row per line.

    Blank lines and lines starting with '#' are skipped.
    """
    p = Path(path)
    rows = []
    try:
        with p.open(newline="", encoding="utf-8") as fh:
            for lineno, rec in enumerate(csv.reader(fh), start=1):
                if not rec or not "".join(rec).strip() or rec[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append([float(v) for v in rec])
                except ValueError as exc:
                    raise DocumentError(f"{p}:{lineno}: {exc}") from None
    except OSError as exc:
        raise DocumentError(f"{p}: cannot read file: {exc.strerror}") from None
    n = d1 * d2
    if len(rows) != n or any(len(r) != n for r in rows):
        shape = (len(rows), sorted({len(r) for r in rows}))
        raise DocumentError(f"{p}: expected a {n}x{n} matrix for a {d1}x{d2} system, got rows/cols {shape}")
    return MatrixDocument(np.array(rows, dtype=complex), d1, d2, label or p.stem)
