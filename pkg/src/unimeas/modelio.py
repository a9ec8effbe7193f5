"""JSON serialization of models, states, and operators.

Complex scalars are written as [re, im] pairs, matrices as arrays of rows,
vectors as arrays of complex scalars. Floats use Python's shortest
round-trip representation, so save(load(f)) is byte-identical for files
this module wrote.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import DEFAULT_EPS
from .measurement import MeasurementModel
from .spectral import SpectralForm, spectral_decompose


class ModelFormatError(ValueError):
    """A file failed to parse or violated a type invariant."""


_MODEL_FIELDS = ("dim_a", "dim_b", "observable", "pointer", "instrument_state", "unitary")


def _complex_out(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _vector_out(v: np.ndarray) -> list:
    return [_complex_out(z) for z in v]


def _matrix_out(m: np.ndarray) -> list:
    return [_vector_out(row) for row in m]


def _complex_in(node, where: str) -> complex:
    if (
        not isinstance(node, (list, tuple))
        or len(node) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in node)
    ):
        raise ModelFormatError(f"{where}: expected a [re, im] pair, got {node!r}")
    z = complex(node[0], node[1])
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ModelFormatError(f"{where}: non-finite value {node!r}")
    return z


def _vector_in(node, where: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise ModelFormatError(f"{where}: expected a non-empty array of complex scalars")
    return np.array(
        [_complex_in(z, f"{where}[{i}]") for i, z in enumerate(node)], dtype=np.complex128
    )


def _matrix_in(node, where: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise ModelFormatError(f"{where}: expected a non-empty array of rows")
    rows = [_vector_in(row, f"{where}[{i}]") for i, row in enumerate(node)]
    width = rows[0].size
    if any(r.size != width for r in rows):
        raise ModelFormatError(f"{where}: rows have inconsistent lengths")
    return np.vstack(rows)


def _real_array_in(node, where: str) -> np.ndarray:
    if (
        not isinstance(node, list)
        or not node
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in node)
    ):
        raise ModelFormatError(f"{where}: expected a non-empty array of real numbers")
    return np.array(node, dtype=np.float64)


def _spectral_out(sf: SpectralForm) -> dict:
    return {
        "eigenvalues": [float(v) for v in sf.eigenvalues],
        "projectors": [_matrix_out(p) for p in sf.projectors],
    }


def _spectral_in(node, where: str) -> SpectralForm:
    if not isinstance(node, dict):
        raise ModelFormatError(f"{where}: expected an object with eigenvalues and projectors")
    extra = set(node) - {"eigenvalues", "projectors"}
    if extra:
        raise ModelFormatError(f"{where}: unknown keys {sorted(extra)}")
    if "eigenvalues" not in node or "projectors" not in node:
        raise ModelFormatError(f"{where}: missing eigenvalues or projectors")
    vals = _real_array_in(node["eigenvalues"], f"{where}.eigenvalues")
    projs_node = node["projectors"]
    if not isinstance(projs_node, list) or not projs_node:
        raise ModelFormatError(f"{where}.projectors: expected a non-empty array of matrices")
    projs = tuple(
        _matrix_in(p, f"{where}.projectors[{k}]") for k, p in enumerate(projs_node)
    )
    if vals.size != len(projs):
        raise ModelFormatError(
            f"{where}: {vals.size} eigenvalues but {len(projs)} projectors"
        )
    return SpectralForm(vals, projs)


def model_to_document(model: MeasurementModel) -> dict:
    return {
        "dim_a": model.dim_a,
        "dim_b": model.dim_b,
        "observable": _spectral_out(model.observable),
        "pointer": _spectral_out(model.pointer),
        "instrument_state": _vector_out(model.instrument_state),
        "unitary": _matrix_out(model.unitary),
    }


def model_from_document(doc, eps: float = DEFAULT_EPS) -> MeasurementModel:
    """Build and validate a model from a parsed JSON document.

    Raises:
        ModelFormatError: structural problems or type-invariant violations,
            naming the offending field.
    """
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    missing = [f for f in _MODEL_FIELDS if f not in doc]
    if missing:
        raise ModelFormatError(f"missing fields: {', '.join(missing)}")
    extra = set(doc) - set(_MODEL_FIELDS)
    if extra:
        raise ModelFormatError(f"unknown fields: {', '.join(sorted(extra))}")
    for name in ("dim_a", "dim_b"):
        if not isinstance(doc[name], int) or isinstance(doc[name], bool) or doc[name] < 1:
            raise ModelFormatError(f"{name}: expected a positive integer, got {doc[name]!r}")
    model = MeasurementModel(
        dim_a=doc["dim_a"],
        dim_b=doc["dim_b"],
        observable=_spectral_in(doc["observable"], "observable"),
        pointer=_spectral_in(doc["pointer"], "pointer"),
        instrument_state=_vector_in(doc["instrument_state"], "instrument_state"),
        unitary=_matrix_in(doc["unitary"], "unitary"),
    )
    try:
        model.validate(eps)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from exc
    return model


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _parse(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc


def save_model(model: MeasurementModel, path) -> None:
    Path(path).write_text(_dump(model_to_document(model)), encoding="utf-8")


def load_model(path, eps: float = DEFAULT_EPS) -> MeasurementModel:
    return model_from_document(_parse(path), eps)


def save_vector(v: np.ndarray, path) -> None:
    Path(path).write_text(_dump(_vector_out(np.asarray(v, dtype=np.complex128))), encoding="utf-8")


def load_vector(path) -> np.ndarray:
    return _vector_in(_parse(path), "vector")


def save_matrix(m: np.ndarray, path) -> None:
    Path(path).write_text(_dump(_matrix_out(np.asarray(m, dtype=np.complex128))), encoding="utf-8")


def load_matrix(path) -> np.ndarray:
    return _matrix_in(_parse(path), "matrix")


def load_observable(path, eps: float = DEFAULT_EPS) -> SpectralForm:
    """Read an observable file: a Hermitian matrix or an explicit spectral form.

    Raises:
        ModelFormatError: malformed file, non-Hermitian matrix, or invalid
            spectral form.
    """
    doc = _parse(path)
    if isinstance(doc, dict):
        sf = _spectral_in(doc, "observable")
        try:
            sf.validate(eps)
        except ValueError as exc:
            raise ModelFormatError(f"observable: {exc}") from exc
        return sf
    matrix = _matrix_in(doc, "observable")
    try:
        return spectral_decompose(matrix, eps)
    except ValueError as exc:
        raise ModelFormatError(f"observable: {exc}") from exc
