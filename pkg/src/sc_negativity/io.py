"""JSON encodings for states, dephasing models and mixtures, plus atomic writes.

State files::

    {"kind": "density" | "sc" | "pure", "dims": [n1, n2], "matrix": [[[re, im], ...], ...]}

``sc`` files carry the ``N x N`` SC coefficient matrix in ``matrix``; ``pure``
files carry a flat list of ``[re, im]`` amplitudes under ``amplitudes`` (or
``matrix``) over the ``n1*n2`` product basis.

Model files::

    {"spectrum1": [...], "spectrum2": [...], "initial": [[re, im], ...]}

Mixture files::

    {"dims": [n1, n2], "components": [{"weight": p, "map": [[m, n], ...], "coeff": [[[re, im], ...]]}]}
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Union

import numpy as np

from .dynamics import DephasingModel
from .errors import ParseError
from .linalg import VALIDATION_TOL
from .mixtures import LambdaComponent, LambdaMap, LambdaMixture, make_mixture
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureSchmidtVector,
    SchmidtCorrelatedState,
    pure_density,
    sc_embed,
    validate_density,
    validate_sc,
)

PathLike = Union[str, os.PathLike]


def write_atomic(path: PathLike, text: str) -> Path:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None


def _complex(value, where: str) -> complex:
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ParseError(f"expected [re, im] pair, got {value!r}", where)


def decode_vector(data, where: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError("expected a non-empty list of [re, im] pairs", where)
    return np.array([_complex(z, f"{where}[{i}]") for i, z in enumerate(data)], dtype=np.complex128)


def decode_matrix(data, where: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError("expected a non-empty list of rows", where)
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != len(data):
            raise ParseError(f"row {i} must hold {len(data)} entries", f"{where}[{i}]")
        rows.append([_complex(z, f"{where}[{i}][{j}]") for j, z in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _dims(data, where: str) -> BipartiteDims:
    dims = data.get("dims")
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)
    ):
        raise ParseError(f"dims must be two positive integers, got {dims!r}", f"{where}.dims")
    return BipartiteDims(*dims)


def _object(data, where: str) -> dict:
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object", where)
    return data


def decode_state(data, where: str = "$", tol: float | None = None) -> tuple[DensityMatrix, SchmidtCorrelatedState | None]:
    """Parse a state document; the SC coefficient matrix is returned for ``sc`` files."""
    data = _object(data, where)
    kind = data.get("kind")
    if kind == "sc":
        coeff = decode_matrix(data.get("matrix"), f"{where}.matrix")
        if "dims" in data:
            dims = _dims(data, where)
            if dims != BipartiteDims(coeff.shape[0], coeff.shape[0]):
                raise ParseError(f"sc dims {dims} disagree with a {coeff.shape[0]}x{coeff.shape[0]} coefficient matrix", f"{where}.dims")
        sc = validate_sc(coeff, VALIDATION_TOL if tol is None else tol)
        return sc_embed(sc), sc
    if kind == "density":
        dims = _dims(data, where)
        return validate_density(
            decode_matrix(data.get("matrix"), f"{where}.matrix"), dims, VALIDATION_TOL if tol is None else tol
        ), None
    if kind == "pure":
        dims = _dims(data, where)
        key = "amplitudes" if "amplitudes" in data else "matrix"
        psi = decode_vector(data.get(key), f"{where}.{key}")
        if psi.size != dims.total:
            raise ParseError(f"{psi.size} amplitudes for dims {dims.n1}x{dims.n2}", f"{where}.{key}")
        return pure_density(psi, dims, VALIDATION_TOL if tol is None else tol), None
    raise ParseError(f"kind must be 'density', 'sc' or 'pure', got {kind!r}", f"{where}.kind")


def encode_state(rho: DensityMatrix) -> dict:
    return {"kind": "density", "dims": [rho.dims.n1, rho.dims.n2], "matrix": encode_matrix(rho.mat)}


def encode_sc(sc: SchmidtCorrelatedState) -> dict:
    return {"kind": "sc", "dims": [sc.n, sc.n], "matrix": encode_matrix(sc.coeff)}


def _real_list(data, where: str) -> list[float]:
    if not isinstance(data, list) or not data or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in data
    ):
        raise ParseError("expected a non-empty list of numbers", where)
    return [float(v) for v in data]


def decode_model(data, where: str = "$") -> DephasingModel:
    data = _object(data, where)
    s1 = _real_list(data.get("spectrum1"), f"{where}.spectrum1")
    s2 = _real_list(data.get("spectrum2"), f"{where}.spectrum2")
    amps = decode_vector(data.get("initial"), f"{where}.initial")
    return DephasingModel(s1, s2, PureSchmidtVector(amps))


def encode_model(model: DephasingModel) -> dict:
    return {
        "spectrum1": model.spectrum1.tolist(),
        "spectrum2": model.spectrum2.tolist(),
        "initial": [[float(z.real), float(z.imag)] for z in model.initial.amps],
    }


def decode_mixture(data, where: str = "$") -> LambdaMixture:
    data = _object(data, where)
    dims = _dims(data, where)
    comps_data = data.get("components")
    if not isinstance(comps_data, list) or not comps_data:
        raise ParseError("expected a non-empty list of components", f"{where}.components")
    comps = []
    for i, c in enumerate(comps_data):
        cw = f"{where}.components[{i}]"
        c = _object(c, cw)
        weight = c.get("weight")
        if not isinstance(weight, (int, float)) or isinstance(weight, bool):
            raise ParseError(f"weight must be a number, got {weight!r}", f"{cw}.weight")
        pairs = c.get("map")
        if not isinstance(pairs, list) or not pairs or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in p)
            for p in pairs
        ):
            raise ParseError("map must be a non-empty list of [m, n] integer pairs", f"{cw}.map")
        label = c.get("label", i)
        comps.append(
            LambdaComponent(
                LambdaMap(label, tuple(tuple(p) for p in pairs)),
                float(weight),
                decode_matrix(c.get("coeff"), f"{cw}.coeff"),
            )
        )
    return make_mixture(dims, comps)


def encode_mixture(mix: LambdaMixture) -> dict:
    return {
        "dims": [mix.dims.n1, mix.dims.n2],
        "components": [
            {
                "weight": c.weight,
                "map": [list(p) for p in c.map.pairs],
                "coeff": encode_matrix(c.coeff),
            }
            for c in mix.components
        ],
    }
