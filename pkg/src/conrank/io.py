"""Versioned JSON documents for windows, pencils, Betti tables, trees, verdicts and reductions.

Matrices are stored as row lists of strings: exact rationals ("-193/4") over
QQ and residues over GF(p).  Every document carries "format" and
"format_version"; serialization is canonical (sorted keys, two-space indent,
trailing newline) so equal objects give byte-identical files.
"""
import json

from . import exact as ex
from .betti import BettiTable
from .errors import DocumentError
from .graded import GradedModuleWindow
from .pencil import LinearPencil

FORMAT_VERSION = 1


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _header(kind):
    return {"format": f"conrank.{kind}", "format_version": FORMAT_VERSION}


def _check(doc, kind):
    if not isinstance(doc, dict):
        raise DocumentError("document is not a JSON object")
    fmt = doc.get("format")
    if fmt != f"conrank.{kind}":
        raise DocumentError(f"expected a conrank.{kind} document, got {fmt!r}")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {doc.get('format_version')!r}")


def _matrix(M):
    return ex.to_strings(M)


def _parse_matrix(rows, field, nrows, ncols):
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise DocumentError(f"matrix does not have shape {nrows}x{ncols}")
    if nrows == 0 or ncols == 0:
        return field.zeros(nrows, ncols)
    try:
        return ex.from_strings(rows, field, ncols)
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(f"bad matrix entry: {e}") from e


def _field(doc):
    try:
        return ex.field_from_name(doc.get("field", "QQ"))
    except Exception as e:
        raise DocumentError(str(e)) from e


# ---- windows ----

def window_to_json(W):
    d = _header("window")
    d.update({"n": W.n, "lo": W.lo, "hi": W.hi, "field": W.field.name, "dims": list(W.dims),
              "actions": [[_matrix(X) for X in fam] for fam in W.actions]})
    return d


def window_from_json(doc, check=True):
    _check(doc, "window")
    F = _field(doc)
    try:
        n, lo, hi, dims = int(doc["n"]), int(doc["lo"]), int(doc["hi"]), [int(x) for x in doc["dims"]]
        acts = doc["actions"]
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed window document: {e}") from e
    if len(dims) != hi - lo + 1 or len(acts) != n + 1 or any(len(f) != hi - lo for f in acts):
        raise DocumentError("window dims/actions do not match n, lo, hi")
    actions = tuple(tuple(_parse_matrix(fam[k], F, dims[k + 1], dims[k]) for k in range(hi - lo))
                    for fam in acts)
    return GradedModuleWindow(n, lo, hi, tuple(dims), actions, F, check=check)


# ---- pencils ----

def pencil_to_json(A):
    d = _header("pencil")
    d.update({"n": A.n, "rows": A.rows, "cols": A.cols, "field": A.field.name,
              "coefficients": [_matrix(C) for C in A.coeffs], "provenance": A.provenance})
    return d


def pencil_from_json(doc):
    _check(doc, "pencil")
    F = _field(doc)
    try:
        n, a, b = int(doc["n"]), int(doc["rows"]), int(doc["cols"])
        co = doc["coefficients"]
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed pencil document: {e}") from e
    if len(co) != n + 1:
        raise DocumentError("pencil needs n+1 coefficient matrices")
    return LinearPencil(tuple(_parse_matrix(C, F, a, b) for C in co), F, dict(doc.get("provenance") or {}))


# ---- Betti tables ----

def betti_to_json(B):
    d = _header("betti")
    d.update(B.to_json())
    return d


def betti_from_json(doc):
    _check(doc, "betti")
    try:
        return BettiTable.from_json(doc)
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed Betti document: {e}") from e


# ---- other documents ----

def reduction_to_json(res):
    d = _header("reduction")
    d.update({"m": res.m, "shape": list(res.pencil.shape),
              "kernel_betti": res.presentation.betti().to_json(),
              "diagnostics": res.diagnostics.to_json(),
              "has_pencil": res.has_pencil,
              "pencil": pencil_to_json(res.pencil)})
    return d


def tree_to_json(T):
    return T.to_json()


def verdict_to_json(v):
    return v.to_json()


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e}") from e


def load_any(doc):
    """Decode a window, pencil or Betti document into its object."""
    fmt = doc.get("format") if isinstance(doc, dict) else None
    readers = {"conrank.window": window_from_json, "conrank.pencil": pencil_from_json,
               "conrank.betti": betti_from_json}
    if fmt not in readers:
        raise DocumentError(f"unknown document format {fmt!r}")
    return readers[fmt](doc)
