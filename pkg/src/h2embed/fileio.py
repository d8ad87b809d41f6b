"""Symbol files, matrix dumps and report documents.

Symbol files are JSON.  Complex numbers are {"re": x, "im": y} objects;
singular-measure atoms are given by angle (radians) and mass so that the
atom location is on the unit circle bit-exactly.  The top-level "kind"
selects the analysis route:

    {"kind": "toeplitz",
     "blaschke": {"rotation": 0.0, "origin_order": 1,
                  "zeros": [{"re": 0.5, "im": 0.0, "mult": 1}]} | null,
     "singular": {"atoms": [{"angle": 0.0, "mass": 1.0}]} | null,
     "outer": {"constant": {"re": 1.0, "im": 0.0},
               "conjugate_factors": [{"re": ..., "im": ...}],
               "exterior_zeros": [{"re": ..., "im": ...}]} | null,
     "declared_infinite_blaschke": false}

    {"kind": "composition", "blaschke": ... | "singular": ... | "mobius": ...}

    {"kind": "polynomial", "polynomial": {"coeffs": [{"re": ..., "im": ...}, ...]}}

    {"kind": "mobius", "mobius": {"a": {...}, "b": {...}, "c": {...}, "d": {...}}}

Matrix dumps are CSV files with the header row ``re_ij,im_ij`` and the
entries flattened row-major, one entry per line, plus a sidecar metadata
document (truncation order, symbol hash, tolerance).
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .polynomials import Polynomial
from .symbols import (
    BlaschkeProduct,
    FactoredSymbol,
    MobiusMap,
    RationalOuter,
    SingularInner,
    SingularMeasure,
)

__all__ = [
    "SymbolFileError",
    "load_symbol_file",
    "parse_symbol_document",
    "symbol_hash",
    "dump_matrix_csv",
    "load_matrix_csv",
    "report_document",
    "json_dumps",
]

MATRIX_HEADER = ["re_ij", "im_ij"]


class SymbolFileError(ValueError):
    """Malformed symbol file; the message carries a field diagnostic."""


def _complex_from(obj, where: str) -> complex:
    if not isinstance(obj, dict) or set(obj) - {"re", "im"}:
        raise SymbolFileError(f"{where}: complex numbers are {{'re': x, 'im': y}} objects")
    try:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    except (TypeError, ValueError) as exc:
        raise SymbolFileError(f"{where}: {exc}") from exc


def _blaschke_from(obj, where: str) -> BlaschkeProduct:
    if not isinstance(obj, dict):
        raise SymbolFileError(f"{where}: expected an object")
    zeros = []
    for i, z in enumerate(obj.get("zeros", [])):
        if not isinstance(z, dict) or "mult" not in z:
            raise SymbolFileError(f"{where}.zeros[{i}]: expected re/im/mult fields")
        zeros.append(
            (_complex_from({"re": z.get("re", 0.0), "im": z.get("im", 0.0)},
                           f"{where}.zeros[{i}]"), int(z["mult"]))
        )
    try:
        return BlaschkeProduct(
            rotation=float(obj.get("rotation", 0.0)),
            origin_order=int(obj.get("origin_order", 0)),
            zeros=zeros,
        )
    except ValueError as exc:
        raise SymbolFileError(f"{where}: {exc}") from exc


def _singular_from(obj, where: str) -> SingularInner:
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise SymbolFileError(f"{where}: expected an object with an 'atoms' list")
    pairs = []
    for i, atom in enumerate(obj["atoms"]):
        if not isinstance(atom, dict) or set(atom) != {"angle", "mass"}:
            raise SymbolFileError(
                f"{where}.atoms[{i}]: atoms are given by angle and mass only "
                "(locations must be on the unit circle bit-exactly)"
            )
        pairs.append((float(atom["angle"]), float(atom["mass"])))
    try:
        return SingularInner(SingularMeasure.from_angles(pairs))
    except ValueError as exc:
        raise SymbolFileError(f"{where}: {exc}") from exc


def _outer_from(obj, where: str) -> RationalOuter:
    if not isinstance(obj, dict):
        raise SymbolFileError(f"{where}: expected an object")
    try:
        return RationalOuter(
            constant=_complex_from(obj.get("constant", {"re": 1.0, "im": 0.0}),
                                   f"{where}.constant"),
            conjugate_factors=[
                _complex_from(c, f"{where}.conjugate_factors[{i}]")
                for i, c in enumerate(obj.get("conjugate_factors", []))
            ],
            exterior_zeros=[
                _complex_from(c, f"{where}.exterior_zeros[{i}]")
                for i, c in enumerate(obj.get("exterior_zeros", []))
            ],
        )
    except ValueError as exc:
        raise SymbolFileError(f"{where}: {exc}") from exc


def _mobius_from(obj, where: str) -> MobiusMap:
    if not isinstance(obj, dict) or set(obj) != {"a", "b", "c", "d"}:
        raise SymbolFileError(f"{where}: expected an object with fields a, b, c, d")
    from .errors import DegenerateMap

    try:
        return MobiusMap(*(_complex_from(obj[k], f"{where}.{k}") for k in "abcd"))
    except DegenerateMap as exc:
        raise SymbolFileError(f"{where}: {exc}") from exc


def parse_symbol_document(doc: dict) -> dict:
    """Validate a parsed symbol document; returns kind plus symbol objects."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SymbolFileError("top level: expected an object with a 'kind' field")
    kind = doc["kind"]
    out = {"kind": kind}
    if kind == "toeplitz":
        blaschke = _blaschke_from(doc["blaschke"], "blaschke") if doc.get("blaschke") else None
        singular = _singular_from(doc["singular"], "singular") if doc.get("singular") else None
        outer = _outer_from(doc["outer"], "outer") if doc.get("outer") else None
        out["symbol"] = FactoredSymbol(blaschke=blaschke, singular=singular, outer=outer)
        out["declared_infinite_blaschke"] = bool(doc.get("declared_infinite_blaschke", False))
    elif kind == "composition":
        given = [k for k in ("blaschke", "singular", "mobius") if doc.get(k)]
        if len(given) != 1:
            raise SymbolFileError(
                "composition symbols give exactly one of blaschke, singular, mobius"
            )
        k = given[0]
        parser = {"blaschke": _blaschke_from, "singular": _singular_from, "mobius": _mobius_from}[k]
        out["symbol"] = parser(doc[k], k)
    elif kind == "polynomial":
        body = doc.get("polynomial")
        if not isinstance(body, dict) or "coeffs" not in body:
            raise SymbolFileError("polynomial: expected an object with a 'coeffs' list")
        coeffs = [
            _complex_from(c, f"polynomial.coeffs[{i}]") for i, c in enumerate(body["coeffs"])
        ]
        out["symbol"] = Polynomial(coeffs)
    elif kind == "mobius":
        out["symbol"] = _mobius_from(doc.get("mobius"), "mobius")
    else:
        raise SymbolFileError(
            f"kind: {kind!r} is not one of toeplitz, composition, polynomial, mobius"
        )
    return out


def load_symbol_file(path) -> dict:
    raw = Path(path).read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SymbolFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    parsed = parse_symbol_document(doc)
    parsed["hash"] = symbol_hash(raw)
    return parsed


def symbol_hash(raw_text: str) -> str:
    return hashlib.sha256(raw_text.encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# matrices and reports
# --------------------------------------------------------------------------


def dump_matrix_csv(path, matrix: np.ndarray):
    matrix = np.asarray(matrix, dtype=complex)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MATRIX_HEADER)
        for value in matrix.ravel(order="C"):
            writer.writerow([repr(float(value.real)), repr(float(value.imag))])


def load_matrix_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != MATRIX_HEADER:
        raise SymbolFileError(f"{path}: missing the '{','.join(MATRIX_HEADER)}' header")
    flat = np.array([complex(float(r), float(i)) for r, i in rows[1:]])
    n = int(round(math.isqrt(flat.size)))
    if n * n != flat.size:
        raise SymbolFileError(f"{path}: {flat.size} entries do not form a square matrix")
    return flat.reshape(n, n)


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (np.complexfloating,)):
        return _jsonable(complex(value))
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, float) and math.isinf(value):
        return "infinity"
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def json_dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def report_document(report, *, config: dict | None = None) -> dict:
    """Serialisable form of an embeddability report."""
    doc = {
        "verdict": report.verdict.value,
        "governing_result": report.governing_result,
        "notes": list(report.notes),
        "details": report.details,
        "semigroup": report.semigroup_descriptor,
    }
    if config:
        doc["config"] = config
    return doc


def record_document(record) -> dict:
    return {
        "check": record.name,
        "max_defect": record.max_defect,
        "threshold": record.threshold,
        "passed": bool(record.passed),
        "applicable": bool(record.applicable),
        "witnesses": [[str(label), defect] for label, defect in record.witnesses],
        "details": record.details,
    }
