"""One-qudit Householder reflections and club-scheduled state synthesis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .clubseq import ClubTerm, make_club_sequence
from .core import (
    STAR,
    TARGET,
    Circuit,
    ControlledGate,
    ControlWord,
    ValidationError,
    _apply_inplace,
    num_qudits,
)

NORM_TOL = 1e-12


def householder_vector(phi: np.ndarray, pivot: int = 0) -> Optional[np.ndarray]:
    """Reflection vector eta sending ``phi`` to a multiple of ``e_pivot``.

    Uses ``eta = phi - |phi| * (phi_p / |phi_p|) e_p`` (phase 1 when
    ``phi_p == 0``), with the pivot entry evaluated in cancellation-free form.
    Returns ``None`` when ``phi`` is already collapsed onto the pivot.
    The result is scaled by a power of two near ``1/max|phi|``, which leaves
    the reflection unchanged and keeps subnormal inputs finite.
    """
    x = np.asarray(phi, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise ValidationError("fiber vector has non-finite entries")
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if scale == 0.0:
        return None
    e = -np.frexp(scale)[1]
    x = np.ldexp(x.real, e) + 1j * np.ldexp(x.imag, e)
    a = x[pivot]
    rest = np.delete(x, pivot)
    tail2 = float(np.vdot(rest, rest).real)
    if tail2 == 0.0:
        return None
    abs_a = abs(a)
    norm = np.sqrt(abs_a**2 + tail2)
    phase = a / abs_a if abs_a > 0 else 1.0
    eta = x.copy()
    eta[pivot] = -phase * tail2 / (norm + abs_a)
    return eta


def one_qudit_householder(phi, pivot: int = 0, fix_phase: bool = False) -> np.ndarray:
    """d x d unitary W with ``W @ phi = z * e_pivot`` and ``|z| = |phi|``.

    ``W = I - 2 |eta><eta| / <eta|eta>``; entries of ``phi`` that are
    exactly zero (other than the pivot) give columns of W equal to the
    identity. With ``fix_phase`` the pivot row is rephased so that ``z`` is
    real and non-negative; W is then no longer Hermitian.
    A zero or already-collapsed ``phi`` yields the identity (or, with
    ``fix_phase``, a pure pivot phase).
    """
    phi = np.asarray(phi, dtype=complex)
    d = phi.shape[0]
    if not 0 <= pivot < d:
        raise ValidationError(f"pivot {pivot} out of range for d={d}")
    eta = householder_vector(phi, pivot)
    w = np.eye(d, dtype=complex)
    if eta is not None:
        w -= (2.0 / np.vdot(eta, eta).real) * np.outer(eta, eta.conj())
    if fix_phase:
        z = (w @ phi)[pivot]
        if abs(z) > 0:
            w[pivot, :] *= np.conj(z) / abs(z)
    return w


def is_degenerate(phi, pivot: int = 0) -> bool:
    return householder_vector(phi, pivot) is None


@dataclass(frozen=True)
class SynthesisStep:
    term: ClubTerm
    gate: ControlledGate
    step_index: int
    degenerate: bool = False


def _fiber_index(term: ClubTerm) -> tuple:
    n, ell = term.n, term.leftmost_club
    return term.prefix + (slice(None),) + (0,) * (n - ell - 1)


def single_club_householder(t: ClubTerm, psi_j: np.ndarray, step_index: int = 0) -> SynthesisStep:
    """Gate for one club term: target on the leftmost club, at most one control,
    payload collapsing the fiber ``<t_1..t_{l-1} k 0..0 | psi_j>`` onto k = 0."""
    x = np.asarray(psi_j, dtype=complex)
    if x.shape != (t.d**t.n,):
        raise ValidationError("state dimension does not match club term")
    phi = x.reshape((t.d,) * t.n)[_fiber_index(t)]
    eta = householder_vector(phi, 0)
    v = one_qudit_householder(phi, 0)
    return SynthesisStep(t, ControlledGate(t.control_word(), v), step_index, eta is None)


def _run_sequence(x: np.ndarray, d: int, n: int, keep_trace: bool = False):
    """Collapse ``x`` (modified in place) onto a multiple of |0..0>."""
    t = x.reshape((d,) * n)
    steps, trace = [], [x.copy()] if keep_trace else None
    for j, term in enumerate(make_club_sequence(d, n), start=1):
        phi = t[_fiber_index(term)].copy()
        v = one_qudit_householder(phi, 0)
        gate = ControlledGate(term.control_word(), v)
        _apply_inplace(t, gate.word.letters, gate.v)
        steps.append(SynthesisStep(term, gate, j, householder_vector(phi, 0) is None))
        if keep_trace:
            trace.append(x.copy())
    return steps, trace


def _validate_state(psi, normalized: bool = True) -> tuple[np.ndarray, int]:
    x = np.array(psi, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise ValidationError("state has non-finite amplitudes")
    if normalized and abs(np.vdot(x, x).real - 1.0) > NORM_TOL:
        raise ValidationError("state is not normalized")
    return x, x.shape[0]


def _shift_matrix(c: int, d: int) -> np.ndarray:
    """Permutation |k> -> |k + c mod d>."""
    return np.roll(np.eye(d), c, axis=0)


def conjugate_by_shift(g: ControlledGate, shifts: Sequence[int]) -> ControlledGate:
    """``(x) shift(s_k)  g  (x) shift(-s_k)`` as a single controlled gate.

    Control values move to ``(C_k + s_k) mod d`` and the payload becomes
    ``shift(s_l) V shift(-s_l)`` on the target line l.
    """
    d = g.d
    letters = tuple(
        x if isinstance(x, str) else (int(x) + s) % d for x, s in zip(g.word.letters, shifts)
    )
    s = shifts[g.word.target] % d
    v = g.v if s == 0 else _shift_matrix(s, d) @ g.v @ _shift_matrix(-s, d)
    return ControlledGate(ControlWord(d, letters), v)


def reduce_onto(vec, d: int, n: int, target: Sequence[int]) -> list[ControlledGate]:
    """Gates collapsing an arbitrary length-d^n vector onto ``|target>``.

    Shifts the vector so ``target`` sits at |0..0>, runs the club sequence,
    and folds the shifts back into each gate. The vector need not be
    normalized; the result is ``z |target>`` with ``|z| = |vec|``.
    """
    x = np.array(vec, dtype=complex).reshape((d,) * n)
    if any(target):
        x = np.roll(x, shift=[-c for c in target], axis=tuple(range(n)))
    steps, _ = _run_sequence(x.reshape(-1), d, n)
    if not any(target):
        return [s.gate for s in steps]
    return [conjugate_by_shift(s.gate, target) for s in steps]


def _phase_gate(d: int, n: int, dit: int, phase: complex) -> ControlledGate:
    v = np.eye(d, dtype=complex)
    v[dit, dit] = phase
    return ControlledGate(ControlWord(d, (TARGET,) + (STAR,) * (n - 1)), v)


def club_householder_onto(psi, j: Sequence[int], d: int, fix_phase: bool = False) -> Circuit:
    """Circuit of p gates (at most one control each) taking ``psi`` to ``e^{ia} |j>``.

    With ``fix_phase`` one extra uncontrolled diagonal gate removes ``e^{ia}``.
    """
    x, dim = _validate_state(psi)
    n = num_qudits(dim, d)
    j = tuple(int(c) for c in j)
    if len(j) != n or any(not 0 <= c < d for c in j):
        raise ValidationError(f"bad target dit string {j} for d={d}, n={n}")
    gates = reduce_onto(x, d, n, j)
    c = Circuit(d, n, tuple(gates))
    if fix_phase:
        z = c.apply(x).reshape((d,) * n)[j]
        if abs(z) > 0:
            c = c.then([_phase_gate(d, n, j[0], np.conj(z) / abs(z))])
    return c


def state_synthesis_to_zero(psi, d: int, fix_phase: bool = False) -> Circuit:
    """Circuit of (d^n - 1)/(d - 1) gates with ``circuit @ psi = e^{ia} |0..0>``."""
    x, dim = _validate_state(psi)
    n = num_qudits(dim, d)
    return club_householder_onto(x, (0,) * n, d, fix_phase=fix_phase)


def state_synthesis_trace(psi, d: int) -> tuple[Circuit, list[np.ndarray]]:
    """Like :func:`state_synthesis_to_zero` but also return psi_1 .. psi_{p+1}."""
    x, dim = _validate_state(psi)
    n = num_qudits(dim, d)
    steps, trace = _run_sequence(x.copy(), d, n, keep_trace=True)
    return Circuit(d, n, tuple(s.gate for s in steps)), trace


def state_synthesis_steps(psi, d: int) -> list[SynthesisStep]:
    x, dim = _validate_state(psi)
    steps, _ = _run_sequence(x.copy(), d, num_qudits(dim, d))
    return steps


def state_synthesis_from_zero(psi, d: int, fix_phase: bool = False) -> Circuit:
    """Circuit with ``circuit @ |0..0> = e^{ia} psi`` (exactly ``psi`` with ``fix_phase``)."""
    return state_synthesis_to_zero(psi, d, fix_phase=fix_phase).adjoint()
