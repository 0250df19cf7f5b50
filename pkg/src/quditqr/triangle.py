"""QR-style reduction of an n-qudit unitary to a diagonal, and exact synthesis.

The reduction walks block-columns of size d^n x d^(n-1) left to right:

* the top-left block is reduced recursively on the low n-1 lines, with no
  control on the top line;
* below the block diagonal, every sub-column in block-row l is collapsed
  onto the diagonal position with :func:`reduce_onto`, controlled on the
  top line being ``l``;
* one gate with n-1 controls then clears what is left of the column, using
  a Householder on the column's top-line fiber pivoted at the diagonal;
* the next diagonal block is reduced recursively under a top-line control.

Blocks that are handed to the recursion are general (non-unitary) matrices,
so the same procedure is really a triangularization; unitarity of the full
matrix is what makes the final result diagonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import (
    STAR,
    TARGET,
    Circuit,
    ControlledGate,
    ControlWord,
    ValidationError,
    _apply_inplace,
    check_unitary,
    num_qudits,
    prune,
)
from .householder import one_qudit_householder, reduce_onto

PHASE_TOL = 1e-11
RECONSTRUCTION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiagonalPhases:
    """Angles theta_j in (-pi, pi] of the diagonal left after reduction."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.array(self.angles, dtype=float).reshape(-1)
        a = np.where(a <= -np.pi, a + 2 * np.pi, a)
        a.flags.writeable = False
        object.__setattr__(self, "angles", a)

    def matrix(self) -> np.ndarray:
        return np.diag(np.exp(1j * self.angles))


@dataclass(frozen=True, eq=False)
class TriangleResult:
    reduction: Circuit
    phases: DiagonalPhases
    residual: float = 0.0  # largest off-diagonal magnitude after reduction


class _Reducer:
    def __init__(self, m: np.ndarray, d: int, n: int, fix_phase: bool, observer):
        self.d, self.n = d, n
        self.m = m
        self.t = m.reshape((d,) * (2 * n))
        self.fix_phase = fix_phase
        self.observer = observer
        self.gates: list[ControlledGate] = []

    def emit(self, letters: tuple, v: np.ndarray) -> None:
        g = ControlledGate(ControlWord(self.d, letters), v)
        _apply_inplace(self.t, letters, g.v)
        self.gates.append(g)

    def column(self, rows: tuple, cols: tuple) -> np.ndarray:
        return self.t[rows + cols]

    def run(self, digits: tuple, letters: tuple) -> None:
        """Triangularize the diagonal block selected by ``digits`` on the top lines."""
        d, n = self.d, self.n
        depth = len(digits)
        m = n - depth
        free = (slice(None),) * m
        if m == 1:
            a = self.t[digits + free + digits + free]
            self.emit(letters + (TARGET,), self._qr_payload(a))
            return

        self.run(digits + (0,), letters + (STAR,))
        for k in range(d - 1):
            for c in itertools.product(range(d), repeat=m - 1):
                col = digits + (k,) + c
                for ell in range(k + 1, d):
                    vec = self.t[digits + (ell,) + free[1:] + col]
                    for g in reduce_onto(vec, d, m - 1, c):
                        self.emit(letters + (ell,) + g.word.letters, g.v)
                fiber = self.t[digits + (slice(None),) + c + col].copy()
                self.emit(letters + (TARGET,) + c, self._cleanup_payload(fiber, k))
                if depth == 0 and self.observer is not None:
                    self.observer(self._flat(col), self.m)
            self.run(digits + (k + 1,), letters + (k + 1,))
        if depth == 0 and self.observer is not None:
            self.observer(d**n - 1, self.m)

    def _flat(self, digits: tuple) -> int:
        idx = 0
        for c in digits:
            idx = idx * self.d + c
        return idx

    def _cleanup_payload(self, fiber: np.ndarray, pivot: int) -> np.ndarray:
        # entries above the pivot are zero by construction; keep eta off them
        fiber[:pivot] = 0.0
        v = one_qudit_householder(fiber, pivot, fix_phase=self.fix_phase)
        if pivot and not np.allclose(v[:, :pivot], np.eye(self.d)[:, :pivot], rtol=0, atol=1e-10):
            raise RuntimeError("cleanup payload disturbs rows above the block diagonal")
        return v

    def _qr_payload(self, a: np.ndarray) -> np.ndarray:
        """Q^dagger of a Householder QR of the d x d block ``a``."""
        d = self.d
        r = np.array(a, dtype=complex)
        q = np.eye(d, dtype=complex)
        for i in range(d):
            x = r[:, i].copy()
            x[:i] = 0.0
            h = one_qudit_householder(x, i, fix_phase=self.fix_phase)
            r = h @ r
            q = h @ q
        return q


def triangle_reduce(
    u,
    d: int,
    n: Optional[int] = None,
    fix_phase: bool = True,
    observer: Optional[Callable[[int, np.ndarray], None]] = None,
) -> TriangleResult:
    """Reduce ``u`` to a diagonal with controlled one-qudit gates.

    Returns the reduction circuit R (time order) and angles theta with
    ``R.matrix() @ u == diag(exp(1j * theta))``. With ``fix_phase`` the
    cleanup and base-case payloads are rephased so the collapsed entries are
    real and positive, which drives theta to zero for unitary input; without
    it, payloads are plain reflections and theta carries the phases.

    ``observer(j, M)`` is called with the running matrix each time top-level
    column j is finished.
    """
    u = check_unitary(u, what="U")
    if n is None:
        n = num_qudits(u.shape[0], d)
    if u.shape[0] != d**n:
        raise ValidationError(f"U has dimension {u.shape[0]}, expected d**n = {d**n}")
    red = _Reducer(u.copy(), d, n, fix_phase, observer)
    red.run((), ())
    diag = np.diagonal(red.m)
    residual = float(np.max(np.abs(red.m - np.diag(diag))))
    return TriangleResult(Circuit(d, n, tuple(red.gates)), DiagonalPhases(np.angle(diag)), residual)


def phase_gate_for(j_digits: tuple, theta: float, d: int) -> ControlledGate:
    """``I + (e^{i theta} - 1)|j><j|`` as one gate targeting the top line."""
    v = np.eye(d, dtype=complex)
    v[j_digits[0], j_digits[0]] = np.exp(1j * theta)
    return ControlledGate(ControlWord(d, (TARGET,) + tuple(j_digits[1:])), v)


def diagonal_circuit(phases, d: int, n: int, tol: float = PHASE_TOL) -> Circuit:
    """One relative-phase gate per basis state whose angle is nonzero mod 2 pi.

    Angles within ``tol`` of a multiple of 2 pi are treated as zero.
    """
    angles = phases.angles if isinstance(phases, DiagonalPhases) else np.asarray(phases, float)
    if angles.shape != (d**n,):
        raise ValidationError("need one angle per basis state")
    gates = []
    for j, digits in enumerate(itertools.product(range(d), repeat=n)):
        theta = float(angles[j])
        if abs(np.angle(np.exp(1j * theta))) > tol:
            gates.append(phase_gate_for(digits, theta, d))
    return Circuit(d, n, tuple(gates))


def synthesize(
    u,
    d: int,
    n: Optional[int] = None,
    fix_phase: bool = True,
    prune_identities: bool = False,
) -> Circuit:
    """Exact circuit for ``u``: the diagonal first, then the reduction undone.

    ``u = G_1^dagger ... G_m^dagger W`` where ``G_m ... G_1 u = W`` is the
    reduction, so in time order the circuit runs W's gates and then
    ``G_m^dagger, ..., G_1^dagger``.
    """
    res = triangle_reduce(u, d, n, fix_phase=fix_phase)
    c = diagonal_circuit(res.phases, d, res.reduction.n).then(res.reduction.adjoint())
    return prune(c) if prune_identities else c
