"""JSON documents for matrix polynomials and plain matrices.

Complex entries are ``[re, im]`` pairs (a bare real number is also accepted on
input). Schema version "1" is the only one understood.

    {"schema_version": "1", "n": 2, "m": 1,
     "coeffs": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]], ...]}

A matrix document carries ``"kind": "matrix"`` and a single ``"matrix"`` field.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError, PolyspecError
from .matpoly import MatrixPolynomial
from .numkit import DEFAULT_TOL, Tolerances

SCHEMA_VERSION = "1"


def _reject_constant(token):
    raise ParseError(f"non-finite number {token} is not allowed")


def loads(text: str):
    """json.loads that refuses NaN and Infinity literals."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_complex(entry) -> complex:
    if _is_real(entry):
        re, im = entry, 0.0
    elif isinstance(entry, list) and len(entry) == 2 and all(_is_real(x) for x in entry):
        re, im = entry
    else:
        raise ParseError(f"expected a number or an [re, im] pair, got {entry!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ParseError("non-finite entry")
    return complex(re, im)


def dump_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def parse_matrix(rows, shape=None) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("a matrix must be a non-empty list of rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ParseError("matrix rows must be non-empty and of equal length")
    out = np.array([[parse_complex(x) for x in r] for r in rows], dtype=np.complex128)
    if shape is not None and out.shape != shape:
        raise ParseError(f"expected a {shape[0]}x{shape[1]} matrix, got {out.shape[0]}x{out.shape[1]}")
    return out


def dump_matrix(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return [[dump_complex(x) for x in row] for row in a]


def _check_version(doc):
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION!r}")


def _count(doc, key, minimum):
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ParseError(f"{key} must be an integer >= {minimum}")
    return value


def poly_from_doc(doc, tol: Tolerances = DEFAULT_TOL) -> MatrixPolynomial:
    _check_version(doc)
    n, m = _count(doc, "n", 1), _count(doc, "m", 1)
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, list) or len(coeffs) != m + 1:
        raise ParseError(f"coeffs must list m + 1 = {m + 1} matrices")
    mats = [parse_matrix(c, (n, n)) for c in coeffs]
    try:
        return MatrixPolynomial(tuple(mats), tol)
    except PolyspecError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def poly_to_doc(p: MatrixPolynomial) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": p.n,
        "m": p.m,
        "coeffs": [dump_matrix(c) for c in p.coeffs],
    }


def matrix_from_doc(doc) -> np.ndarray:
    _check_version(doc)
    if doc.get("kind") != "matrix":
        raise ParseError("not a matrix document")
    a = parse_matrix(doc.get("matrix"))
    if a.shape[0] != a.shape[1]:
        raise ParseError("matrix must be square")
    return a


def matrix_to_doc(a) -> dict:
    a = np.asarray(a)
    return {"schema_version": SCHEMA_VERSION, "kind": "matrix", "n": a.shape[0], "matrix": dump_matrix(a)}


def load_input(path, tol: Tolerances = DEFAULT_TOL):
    """Read a file holding either document type; returns a MatrixPolynomial or an array."""
    doc = read_json(path)
    if isinstance(doc, dict) and doc.get("kind") == "matrix":
        return matrix_from_doc(doc)
    return poly_from_doc(doc, tol)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)
