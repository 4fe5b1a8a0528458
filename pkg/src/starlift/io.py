"""Canonical JSON serialization and the documented artifact schemas.

Documents are canonicalized (sorted keys, floats printed with %.17g,
trailing newline) so that reports are byte-diffable in CI and
save(load(doc)) reproduces the file exactly.  Schema violations raise
:class:`SchemaError` naming the offending field.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .certify import NORM_MODES, FiniteSubset, QDCertificate, TraceWitness
from .cpmaps import COMPLEX, REAL, LinearMapMat, doubled_units, matrix_units
from .matrix import Matrix, as_array
from .realform import AntiAutomorphism, StarAlgebra
from .tensorexact import IdealPresentation


class SchemaError(ValueError):
    """A document does not match its schema; names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


# -- canonical serialization ------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("canonical JSON cannot represent NaN or infinity")
    return format(float(x), ".17g")


def _emit(obj, pieces: list) -> None:
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, bool):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        pieces.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        pieces.append("{")
        first = True
        for key in sorted(obj):
            if not isinstance(key, str):
                raise ValueError(f"canonical JSON keys must be strings, got {key!r}")
            if not first:
                pieces.append(",")
            first = False
            pieces.append(json.dumps(key, ensure_ascii=True))
            pieces.append(":")
            _emit(obj[key], pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple)):
        pieces.append("[")
        for i, item in enumerate(obj):
            if i:
                pieces.append(",")
            _emit(item, pieces)
        pieces.append("]")
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__} canonically")


def canonical_dumps(obj) -> str:
    pieces: list = []
    _emit(obj, pieces)
    return "".join(pieces) + "\n"


def save_canonical(obj, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(canonical_dumps(obj))


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- field access helpers ----------------------------------------------------


def _need(doc: dict, key: str, path: str):
    if not isinstance(doc, dict):
        raise SchemaError(path, f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return doc[key]


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {value!r}")
    return float(value)


# -- matrix ------------------------------------------------------------------


def matrix_to_json(m, field: str | None = None) -> dict:
    if isinstance(m, Matrix):
        arr, field = m.array, m.field
    else:
        arr = as_array(m)
        if field is None:
            real = not np.iscomplexobj(arr) or not np.any(arr.imag != 0)
            field = "R" if real else "C"
    rows, cols = arr.shape
    if field == "R":
        data = [float(v) for v in np.real(arr).ravel()]
    else:
        carr = arr.astype(np.complex128)
        data = [[float(z.real), float(z.imag)] for z in carr.ravel()]
    return {"rows": rows, "cols": cols, "field": field, "data": data}


def _entry(value, field: str, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and 1 <= len(value) <= 2:
        re = _as_number(value[0], f"{path}[0]")
        im = _as_number(value[1], f"{path}[1]") if len(value) == 2 else 0.0
        if field == "R" and im != 0.0:
            raise SchemaError(path, "field 'R' entry has nonzero imaginary part")
        return complex(re, im)
    raise SchemaError(path, f"expected a number or [re, im] pair, got {value!r}")


def matrix_from_json(doc, path: str = "matrix") -> Matrix:
    rows = _as_int(_need(doc, "rows", path), f"{path}.rows")
    cols = _as_int(_need(doc, "cols", path), f"{path}.cols")
    fld = _need(doc, "field", path)
    if fld not in ("R", "C"):
        raise SchemaError(f"{path}.field", f"must be 'R' or 'C', got {fld!r}")
    data = _need(doc, "data", path)
    if not isinstance(data, list) or len(data) != rows * cols:
        raise SchemaError(f"{path}.data",
                          f"expected {rows * cols} row-major entries")
    vals = [_entry(v, fld, f"{path}.data[{i}]") for i, v in enumerate(data)]
    arr = np.array(vals, dtype=np.complex128).reshape(rows, cols)
    if fld == "R":
        return Matrix(arr.real, "R")
    return Matrix(arr, "C")


# -- linear maps --------------------------------------------------------------


def map_to_json(phi: LinearMapMat) -> dict:
    n = phi.dom_dim
    if phi.linearity == COMPLEX:
        ref = matrix_units(n)
    elif phi.dom_field == REAL:
        ref = matrix_units(n)
    else:
        ref = doubled_units(n)
    if len(phi.basis) != len(ref) or not all(
            np.array_equal(b, r) for b, r in zip(phi.basis, ref)):
        raise SchemaError("map", "only canonical-basis maps are serializable; "
                          "rebase real-form maps before saving")
    doc = {
        "dom": phi.dom_dim,
        "cod": phi.cod_dim,
        "linearity": phi.linearity,
        "images": [matrix_to_json(im, "R" if phi.cod_field == REAL else "C")
                   for im in phi.images],
        "cod_field": phi.cod_field,
    }
    if phi.dom_field == REAL:
        doc["dom_field"] = REAL
    return doc


def map_from_json(doc, path: str = "map") -> LinearMapMat:
    dom = _as_int(_need(doc, "dom", path), f"{path}.dom")
    cod = _as_int(_need(doc, "cod", path), f"{path}.cod")
    lin = _need(doc, "linearity", path)
    if lin not in (COMPLEX, REAL):
        raise SchemaError(f"{path}.linearity", f"must be 'C' or 'R', got {lin!r}")
    dom_field = doc.get("dom_field", COMPLEX)
    if dom_field not in (COMPLEX, REAL):
        raise SchemaError(f"{path}.dom_field", "must be 'C' or 'R'")
    if lin == COMPLEX and dom_field == REAL:
        raise SchemaError(f"{path}.dom_field",
                          "complex-linear maps need a complex domain")
    raw = _need(doc, "images", path)
    if lin == COMPLEX or dom_field == REAL:
        basis = matrix_units(dom)
    else:
        basis = doubled_units(dom)
    if not isinstance(raw, list) or len(raw) != len(basis):
        raise SchemaError(f"{path}.images",
                          f"expected {len(basis)} images in basis order")
    images = [matrix_from_json(m, f"{path}.images[{i}]").array.astype(np.complex128)
              for i, m in enumerate(raw)]
    for i, im in enumerate(images):
        if im.shape != (cod, cod):
            raise SchemaError(f"{path}.images[{i}]",
                              f"expected a {cod}x{cod} matrix, got {im.shape}")
    cod_field = doc.get("cod_field")
    if cod_field is None:
        cod_field = REAL if all(not np.any(im.imag != 0) for im in images) else COMPLEX
    if cod_field not in (COMPLEX, REAL):
        raise SchemaError(f"{path}.cod_field", "must be 'C' or 'R'")
    return LinearMapMat(dom, cod, lin, np.stack(basis), np.stack(images),
                        dom_field, cod_field)


# -- algebras, antiautomorphisms, ideals --------------------------------------


def algebra_to_json(a: StarAlgebra) -> dict:
    return {"n": a.n, "span": [matrix_to_json(m) for m in a.span],
            "unital": bool(a.unital)}


def algebra_from_json(doc, path: str = "algebra") -> StarAlgebra:
    n = _as_int(_need(doc, "n", path), f"{path}.n")
    raw = _need(doc, "span", path)
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{path}.span", "expected a nonempty list of matrices")
    span = [matrix_from_json(m, f"{path}.span[{i}]").array
            for i, m in enumerate(raw)]
    unital = _need(doc, "unital", path)
    if not isinstance(unital, bool):
        raise SchemaError(f"{path}.unital", "expected a boolean")
    try:
        return StarAlgebra(n, tuple(span), unital)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def anti_to_json(anti: AntiAutomorphism) -> dict:
    return {"u": matrix_to_json(anti.u)}


def anti_from_json(doc, path: str = "phi", validate: bool = True) -> AntiAutomorphism:
    u = matrix_from_json(_need(doc, "u", path), f"{path}.u")
    try:
        return AntiAutomorphism(u.array, validate=validate)
    except ValueError as exc:
        raise SchemaError(f"{path}.u", str(exc)) from exc


def ideal_to_json(pres: IdealPresentation) -> dict:
    return {"B": algebra_to_json(pres.b),
            "ideal_blocks": list(pres.ideal_blocks)}


def ideal_from_json(doc, path: str = "ideal") -> IdealPresentation:
    b = algebra_from_json(_need(doc, "B", path), f"{path}.B")
    raw = _need(doc, "ideal_blocks", path)
    if not isinstance(raw, list):
        raise SchemaError(f"{path}.ideal_blocks", "expected a list of block indices")
    blocks = [_as_int(v, f"{path}.ideal_blocks[{i}]") for i, v in enumerate(raw)]
    try:
        return IdealPresentation.from_block_algebra(b, blocks)
    except ValueError as exc:
        raise SchemaError(f"{path}.ideal_blocks", str(exc)) from exc


def subset_from_json(raw, path: str = "F"):
    if not isinstance(raw, list) or not raw:
        raise SchemaError(path, "expected a nonempty list of matrices")
    return [matrix_from_json(m, f"{path}[{i}]").array.astype(np.complex128)
            for i, m in enumerate(raw)]


# -- certificates and trace witnesses ------------------------------------------


def cert_to_json(cert: QDCertificate) -> dict:
    doc = {
        "algebra": algebra_to_json(cert.algebra),
        "phi_map": map_to_json(cert.phi),
        "F": [matrix_to_json(m) for m in cert.subset.elements],
        "epsilon": cert.epsilon,
        "norm_mode": cert.norm_mode,
    }
    if cert.subset.labels is not None:
        doc["labels"] = list(cert.subset.labels)
    if cert.anti is not None:
        doc["anti"] = anti_to_json(cert.anti)
    return doc


def cert_from_json(doc, path: str = "certificate",
                   validate: bool = True) -> QDCertificate:
    algebra = algebra_from_json(_need(doc, "algebra", path), f"{path}.algebra")
    phi = map_from_json(_need(doc, "phi_map", path), f"{path}.phi_map")
    elements = subset_from_json(_need(doc, "F", path), f"{path}.F")
    epsilon = _as_number(_need(doc, "epsilon", path), f"{path}.epsilon")
    norm_mode = _need(doc, "norm_mode", path)
    if norm_mode not in NORM_MODES:
        raise SchemaError(f"{path}.norm_mode",
                          f"must be one of {', '.join(NORM_MODES)}")
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list)
                               or len(labels) != len(elements)):
        raise SchemaError(f"{path}.labels", "must match F in length")
    anti = None
    if "anti" in doc:
        anti = anti_from_json(doc["anti"], f"{path}.anti")
    try:
        subset = FiniteSubset(tuple(elements),
                              tuple(labels) if labels else None)
        return QDCertificate(algebra, subset, phi, epsilon, norm_mode, anti,
                             validate=validate)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def trace_to_json(witness: TraceWitness) -> dict:
    return {"gram": matrix_to_json(witness.gram)}


def trace_from_json(doc, path: str = "trace") -> TraceWitness:
    gram = matrix_from_json(_need(doc, "gram", path), f"{path}.gram")
    return TraceWitness(gram.array)
