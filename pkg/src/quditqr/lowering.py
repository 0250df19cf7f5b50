"""Lowering of multiply-controlled one-qudit gates to two-qudit gates.

For d >= 3 the controls are folded onto a cascade of ancillas with
controlled increments: an ancilla that receives m inputs reaches |m> exactly
when every input fired, so ``r = ceil((k - 1)/(d - 2))`` ancillas cover k
controls. The payload is applied from the last ancilla, and the cascade is
then undone in reverse with controlled decrements.

Controls on a value other than d - 1 are handled by letting each controlled
increment trigger on that value directly; this is the shift/CINC/unshift
bracket around a control line merged into one two-qudit operation.

For d = 2 a ladder of ``k - 1`` ancillas is computed with Toffolis, each
written as five two-qubit gates (controlled-sqrt(X), CNOT, controlled-sqrt(X)^dagger,
CNOT, controlled-sqrt(X)).

Every lowered gate has at most one control, so a lowered circuit is an
ordinary :class:`~quditqr.core.Circuit` on ``n + r`` lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import STAR, TARGET, Circuit, ControlledGate, ControlWord, ValidationError

SQRT_X = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2


def inc_power(c: int, d: int) -> np.ndarray:
    """Permutation matrix of |k> -> |k + c mod d>."""
    if not 0 <= c < d:
        raise ValidationError(f"shift {c} out of range for d={d}")
    return np.roll(np.eye(d, dtype=complex), c, axis=0)


@dataclass(frozen=True, eq=False)
class TwoQuditGate:
    """A d^2 x d^2 operator on an ordered pair of lines (``lines[0]`` is the
    more significant tensor factor). A one-qudit gate has a single line."""

    lines: tuple
    op: np.ndarray

    def __post_init__(self):
        lines = tuple(int(x) for x in self.lines)
        if len(lines) not in (1, 2) or len(set(lines)) != len(lines):
            raise ValidationError(f"bad line tuple {lines}")
        object.__setattr__(self, "lines", lines)


def controlled_op(v: np.ndarray, d: int, value: int = None) -> np.ndarray:
    """d^2 x d^2 matrix applying ``v`` to the second qudit iff the first is ``value``."""
    value = d - 1 if value is None else value
    op = np.eye(d * d, dtype=complex)
    op[value * d : (value + 1) * d, value * d : (value + 1) * d] = v
    return op


def cinc(d: int) -> TwoQuditGate:
    """Increment the second qudit iff the first is |d-1>."""
    return TwoQuditGate((0, 1), controlled_op(inc_power(1 % d, d), d))


def as_two_qudit(g: ControlledGate) -> TwoQuditGate:
    """Two-qudit form (control line, target line) of a gate with at most one control."""
    if g.num_controls > 1:
        raise ValidationError("gate has more than one control")
    if g.num_controls == 0:
        return TwoQuditGate((g.word.target,), g.v)
    (line, value), = g.word.controls.items()
    return TwoQuditGate((line, g.word.target), controlled_op(g.v, g.d, value))


@dataclass(frozen=True, eq=False)
class LoweredCircuit:
    """Gates with at most one control on ``n`` data lines plus ``r`` ancillas
    (lines n .. n+r-1), which start and end in |0>."""

    d: int
    n: int
    r: int
    circuit: Circuit

    @property
    def gates(self) -> tuple:
        return self.circuit.gates

    def __len__(self) -> int:
        return len(self.circuit)

    def two_qudit_gates(self) -> list[TwoQuditGate]:
        return [as_two_qudit(g) for g in self.circuit]

    def apply_on_data(self, psi: np.ndarray) -> np.ndarray:
        """Run on ``psi (x) |0..0>``; returns the full (d^n * d^r,) state."""
        psi = np.asarray(psi, dtype=complex)
        full = np.zeros((self.d**self.n, self.d**self.r) + psi.shape[1:], dtype=complex)
        full[:, 0] = psi
        return self.circuit.apply(full.reshape((-1,) + psi.shape[1:]))


def ancilla_count(k: int, d: int) -> int:
    if k <= 1:
        return 0
    if d == 2:
        return k - 1
    return -(-(k - 1) // (d - 2))


def _single(d: int, width: int, control: Optional[tuple], target: int, v) -> ControlledGate:
    letters = [STAR] * width
    letters[target] = TARGET
    if control is not None:
        letters[control[0]] = control[1]
    return ControlledGate(ControlWord(d, tuple(letters)), v)


def _toffoli(d, width, a, b, t):
    """Toffoli onto line t from controls a=(line, value), b=(line, value)."""
    flip = inc_power(1, 2)
    return [
        _single(d, width, b, t, SQRT_X),
        _single(d, width, a, b[0], flip),
        _single(d, width, b, t, SQRT_X.conj().T),
        _single(d, width, a, b[0], flip),
        _single(d, width, a, t, SQRT_X),
    ]


def lower(gate: ControlledGate, max_ancillas: Optional[int] = None) -> LoweredCircuit:
    """Expand ``gate`` into at-most-singly-controlled gates with ancillas."""
    d, n = gate.d, gate.n
    controls = sorted(gate.word.controls.items())
    k = len(controls)
    r = ancilla_count(k, d)
    if max_ancillas is not None and r > max_ancillas:
        raise ValidationError(f"{k} controls need {r} ancillas, budget is {max_ancillas}")
    width = n + r
    target = gate.word.target
    if k <= 1:
        g = _single(d, width, controls[0] if controls else None, target, gate.v)
        return LoweredCircuit(d, n, 0, Circuit(d, width, (g,)))

    compute: list[ControlledGate] = []
    if d == 2:
        anc = n
        compute += _toffoli(d, width, controls[0], controls[1], anc)
        for c in controls[2:]:
            compute += _toffoli(d, width, (anc, 1), c, anc + 1)
            anc += 1
        last = (anc, 1)
    else:
        inc = inc_power(1, d)
        pending = list(controls)
        feed = None  # (ancilla line, trigger value) of the previous ancilla
        for a in range(n, n + r):
            inputs = [] if feed is None else [feed]
            room = d - 1 - len(inputs)
            inputs += pending[:room]
            pending = pending[room:]
            for src in inputs:
                compute.append(_single(d, width, src, a, inc))
            feed = (a, len(inputs))
        last = feed
    mid = _single(d, width, last, target, gate.v)
    uncompute = [g.adjoint() for g in reversed(compute)]
    return LoweredCircuit(d, n, r, Circuit(d, width, tuple(compute + [mid] + uncompute)))


def lower_circuit(c: Circuit, max_ancillas: Optional[int] = None) -> LoweredCircuit:
    """Lower every gate of a circuit, sharing one ancilla register."""
    parts = [lower(g, max_ancillas) for g in c]
    r = max([p.r for p in parts], default=0)
    width = c.n + r
    gates = []
    for p in parts:
        pad = (STAR,) * (r - p.r)
        for g in p.circuit:
            gates.append(ControlledGate(ControlWord(c.d, g.word.letters + pad), g.v))
    return LoweredCircuit(c.d, c.n, r, Circuit(c.d, width, tuple(gates)))
