"""Text format for pure states and density matrices.

A state file is a JSON document:

    {"n": 2, "d": 2, "kind": "pure",  "amplitudes": [[re, im], ...]}
    {"n": 2, "d": 2, "kind": "mixed", "matrix":     [[re, im], ...]}

with n the total subsystem count and the payload holding d^n amplitudes or
d^n * d^n matrix entries in row-major order.  Values are decimal doubles
written via repr, so save/load round-trips are bit-faithful for finite
floats.  Non-finite values are rejected in both directions.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from .convexroof import DensityMatrix
from .qstate import NORM_TOL, PureState

__all__ = ["StateFileError", "load_state", "save_state"]

State = Union[PureState, DensityMatrix]


class StateFileError(ValueError):
    """Malformed or inconsistent state file."""


def _pairs(values: np.ndarray) -> list[list[float]]:
    flat = np.asarray(values, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def save_state(path, state: State) -> None:
    if isinstance(state, PureState):
        doc = {
            "n": state.n,
            "d": state.d,
            "kind": "pure",
            "amplitudes": _pairs(state.amplitudes),
        }
    elif isinstance(state, DensityMatrix):
        doc = {
            "n": state.n,
            "d": state.d,
            "kind": "mixed",
            "matrix": _pairs(state.matrix),
        }
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    text = json.dumps(doc, indent=1, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _complex_payload(doc: dict, key: str, expected: int) -> np.ndarray:
    payload = doc.get(key)
    if not isinstance(payload, list) or len(payload) != expected:
        raise StateFileError(
            f"field {key!r} must hold {expected} (re, im) pairs, "
            f"got {len(payload) if isinstance(payload, list) else type(payload).__name__}"
        )
    out = np.empty(expected, dtype=np.complex128)
    for i, pair in enumerate(payload):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
        ):
            raise StateFileError(f"{key}[{i}] is not a (re, im) pair: {pair!r}")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise StateFileError(f"{key}[{i}] is not finite: {pair!r}")
        out[i] = complex(re, im)
    return out


def load_state(path, check: bool = True) -> State:
    """Read a state file.

    With check=True (the default) the pure-state norm or mixed-state trace
    must already be 1 within 1e-9.  With check=False the payload is
    renormalized instead; structural requirements (shape, Hermiticity,
    positivity) are enforced either way.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: top level must be an object")

    n, d, kind = doc.get("n"), doc.get("d"), doc.get("kind")
    if not isinstance(n, int) or not isinstance(d, int) or n < 1 or d < 2:
        raise StateFileError(f"{path}: need integer header n >= 1 and d >= 2")
    if kind not in ("pure", "mixed"):
        raise StateFileError(f"{path}: kind must be 'pure' or 'mixed', got {kind!r}")
    dim = d**n

    # Payload bits are kept untouched whenever the stored values already
    # satisfy the target type's own tolerance, so save/load round-trips
    # exactly; renormalization happens only when actually needed.
    try:
        if kind == "pure":
            amps = _complex_payload(doc, "amplitudes", dim)
            norm = float(np.linalg.norm(amps))
            if norm == 0.0:
                raise StateFileError(f"{path}: zero state vector")
            if check and abs(norm - 1.0) > NORM_TOL:
                raise StateFileError(
                    f"{path}: state norm {norm!r} is not 1 within {NORM_TOL}"
                )
            if abs(norm - 1.0) > NORM_TOL:
                amps = amps / norm
            return PureState(n, d, amps)
        mat = _complex_payload(doc, "matrix", dim * dim).reshape(dim, dim)
        tr = complex(np.trace(mat))
        if tr.real <= 0.0:
            raise StateFileError(f"{path}: matrix trace {tr!r} is not positive")
        if check and abs(tr - 1.0) > NORM_TOL:
            raise StateFileError(
                f"{path}: matrix trace {tr!r} is not 1 within {NORM_TOL}"
            )
        if abs(tr - 1.0) > 1e-10:
            mat = mat / tr.real
        return DensityMatrix(n, d, mat)
    except StateFileError:
        raise
    except ValueError as exc:
        raise StateFileError(f"{path}: {exc}") from exc
