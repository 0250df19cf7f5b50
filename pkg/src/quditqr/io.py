"""JSON formats for circuits, matrices and states.

Complex numbers are ``[re, im]`` pairs. Floats go through ``json``'s
shortest round-trip repr, so a write/read cycle is value-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .core import STAR, TARGET, Circuit, ControlledGate, ControlWord, ValidationError, check_unitary
from .lowering import LoweredCircuit

PathLike = Union[str, Path]


def _pairs(a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [_pairs(x) for x in a]


def _complex(obj, what: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValidationError(f"{what}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _header(obj: dict, what: str) -> tuple[int, int]:
    try:
        d, n = int(obj["d"]), int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: missing or bad 'd'/'n'") from exc
    if d < 2 or n < 1:
        raise ValidationError(f"{what}: need d >= 2 and n >= 1")
    return d, n


def circuit_to_dict(c: Circuit, ancillas: int = 0) -> dict:
    gates = [
        {"word": [x if isinstance(x, str) else int(x) for x in g.word.letters], "matrix": _pairs(g.v)}
        for g in c
    ]
    return {"d": c.d, "n": c.n - ancillas, "ancillas": ancillas, "gates": gates}


def circuit_from_dict(obj: dict) -> tuple[Circuit, int]:
    """Parse a circuit; returns it together with its ancilla count."""
    d, n = _header(obj, "circuit")
    r = int(obj.get("ancillas", 0))
    width = n + r
    gates = []
    for i, entry in enumerate(obj.get("gates", [])):
        if not isinstance(entry, dict) or "word" not in entry or "matrix" not in entry:
            raise ValidationError(f"gate {i}: needs 'word' and 'matrix'")
        word = []
        for x in entry["word"]:
            if x in (STAR, TARGET):
                word.append(x)
            elif isinstance(x, int) and not isinstance(x, bool):
                word.append(x)
            else:
                raise ValidationError(f"gate {i}: bad word letter {x!r}")
        if len(word) != width:
            raise ValidationError(f"gate {i}: word has length {len(word)}, expected {width}")
        v = _complex(entry["matrix"], f"gate {i}")
        if v.shape != (d, d):
            raise ValidationError(f"gate {i}: matrix must be {d}x{d}")
        gates.append(ControlledGate(ControlWord(d, tuple(word)), v))
    return Circuit(d, width, tuple(gates)), r


def matrix_to_dict(u: np.ndarray, d: int, n: int) -> dict:
    return {"d": d, "n": n, "entries": _pairs(u)}


def matrix_from_dict(obj: dict, unitary: bool = True) -> tuple[np.ndarray, int, int]:
    d, n = _header(obj, "matrix")
    u = _complex(obj.get("entries"), "matrix")
    if u.shape != (d**n, d**n):
        raise ValidationError(f"matrix: shape {u.shape} does not match d**n = {d**n}")
    if unitary:
        u = check_unitary(u, what="matrix")
    return u, d, n


def state_to_dict(psi: np.ndarray, d: int, n: int) -> dict:
    return {"d": d, "n": n, "entries": _pairs(np.asarray(psi).reshape(-1))}


def state_from_dict(obj: dict, normalized: bool = True) -> tuple[np.ndarray, int, int]:
    d, n = _header(obj, "state")
    psi = _complex(obj.get("entries"), "state")
    if psi.shape != (d**n,):
        raise ValidationError(f"state: length {psi.shape} does not match d**n = {d**n}")
    if normalized and abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValidationError("state: not normalized")
    return psi, d, n


def read_json(path: PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def write_json(path: PathLike, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)
        fh.write("\n")


def save_circuit(path: PathLike, c: Union[Circuit, LoweredCircuit]) -> None:
    if isinstance(c, LoweredCircuit):
        write_json(path, circuit_to_dict(c.circuit, ancillas=c.r))
    else:
        write_json(path, circuit_to_dict(c))


def load_circuit(path: PathLike) -> tuple[Circuit, int]:
    return circuit_from_dict(read_json(path))


def save_matrix(path: PathLike, u: np.ndarray, d: int, n: int) -> None:
    write_json(path, matrix_to_dict(u, d, n))


def load_matrix(path: PathLike, unitary: bool = True):
    return matrix_from_dict(read_json(path), unitary=unitary)


def save_state(path: PathLike, psi: np.ndarray, d: int, n: int) -> None:
    write_json(path, state_to_dict(psi, d, n))


def load_state(path: PathLike, normalized: bool = True):
    return state_from_dict(read_json(path), normalized=normalized)
