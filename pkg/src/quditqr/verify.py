"""Oracles for state synthesis, random test inputs, and reconstruction checks."""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .clubseq import make_club_sequence, sequence_length
from .core import Circuit, ValidationError, circuit_matrix, index_of

ZERO_TOL = 1e-11
GENERIC_MIN = 1e-6


@dataclass(frozen=True)
class ZeroPatternOracle:
    """Index sets for step j (1-based) of the club reduction.

    ``r1 | r2 | r3`` are the indices that may still be nonzero before the
    j-th gate; ``zeroed`` are those the j-th gate zeroes.
    """

    step: int
    r1: frozenset
    r2: frozenset
    r3: frozenset
    zeroed: frozenset

    @property
    def support(self) -> frozenset:
        return self.r1 | self.r2 | self.r3


@lru_cache(maxsize=4096)
def rsets(d: int, n: int, j: int) -> ZeroPatternOracle:
    """Enumerate the three index sets for step ``j`` of the (d, n) sequence."""
    p = sequence_length(d, n)
    if not 1 <= j <= p:
        raise ValidationError(f"step {j} out of range 1..{p}")
    term = make_club_sequence(d, n)[j - 1]
    c = term.prefix
    ell = len(c)
    tail = n - ell - 1
    r1, r2, r3 = set(), set(), set()
    for q in range(ell):
        for k in range(c[q]):
            r1.add(index_of(c[:q] + (k,) + (0,) * (n - q - 1), d))
    for k in range(d):
        r2.add(index_of(c + (k,) + (0,) * tail, d))
    for s in itertools.product(range(d), repeat=n):
        if s[:ell] > c:
            r3.add(index_of(s, d))
    zeroed = {index_of(c + (k,) + (0,) * tail, d) for k in range(1, d)}
    return ZeroPatternOracle(j, frozenset(r1), frozenset(r2), frozenset(r3), frozenset(zeroed))


def matching_indices(word, d: int) -> frozenset:
    """Basis indices whose dit string matches a control word."""
    return frozenset(
        index_of(s, d) for s in itertools.product(range(d), repeat=word.n) if word.matches(s)
    )


@dataclass
class StepReport:
    step: int
    zeros: int
    contained: bool
    stray: list = field(default_factory=list)  # nonzero indices outside the oracle support
    growth: Optional[int] = None


@dataclass
class ZeroPatternReport:
    d: int
    n: int
    generic: bool
    steps: list
    final_zeros: int
    passed: bool

    def zero_counts(self) -> list[int]:
        return [s.zeros for s in self.steps] + [self.final_zeros]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def __str__(self) -> str:
        lines = [f"zero pattern d={self.d} n={self.n} generic={self.generic}: "
                 f"{'PASS' if self.passed else 'FAIL'}"]
        for s in self.steps:
            mark = "ok" if s.contained and (s.growth in (None, self.d - 1)) else "VIOLATION"
            lines.append(f"  step {s.step:4d} zeros={s.zeros:5d} growth={s.growth} {mark}"
                         + (f" stray={s.stray}" if s.stray else ""))
        return "\n".join(lines)


def _zeros(x: np.ndarray, tol: float) -> np.ndarray:
    return np.abs(x) <= tol


def check_zero_pattern(trace: Sequence[np.ndarray], d: int, n: int,
                       tol: float = ZERO_TOL, generic: Optional[bool] = None) -> ZeroPatternReport:
    """Check a state-synthesis trace psi_1 .. psi_{p+1} against the oracle.

    Every psi_j must be supported inside ``r1 | r2 | r3`` of step j. When
    the input is generic (no amplitude below 1e-6, decided automatically
    unless ``generic`` is given), each step must add exactly d - 1 zeros.
    """
    p = sequence_length(d, n)
    if len(trace) != p + 1:
        raise ValidationError(f"trace has {len(trace)} states, expected {p + 1}")
    if generic is None:
        generic = bool(np.min(np.abs(trace[0])) >= GENERIC_MIN)
    steps = []
    ok = True
    for j in range(1, p + 1):
        x = np.asarray(trace[j - 1])
        zmask = _zeros(x, tol)
        oracle = rsets(d, n, j)
        nonzero = np.flatnonzero(~zmask)
        stray = sorted(int(i) for i in set(nonzero.tolist()) - oracle.support)
        growth = int(_zeros(np.asarray(trace[j]), tol).sum() - zmask.sum()) if generic else None
        step = StepReport(j, int(zmask.sum()), not stray, stray, growth)
        if stray or (generic and growth != d - 1):
            ok = False
        steps.append(step)
    final = np.asarray(trace[-1])
    final_zeros = int(_zeros(final, tol).sum())
    if not np.all(_zeros(final[1:], tol)):
        ok = False
    return ZeroPatternReport(d, n, generic, steps, final_zeros, ok)


def haar_random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar sample: QR of a complex Ginibre matrix with R's diagonal phases removed.

    ``seed`` goes to :func:`numpy.random.default_rng` (PCG64), so equal
    seeds give bit-identical matrices.
    """
    if dim < 1:
        raise ValidationError("dim must be at least 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_state(dim: int, seed=None, generic: bool = True) -> np.ndarray:
    """Normalized complex Gaussian state; resampled until every |amplitude| >= 1e-6
    when ``generic``."""
    if dim < 1:
        raise ValidationError("dim must be at least 1")
    rng = np.random.default_rng(seed)
    while True:
        psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        psi /= np.linalg.norm(psi)
        if not generic or np.min(np.abs(psi)) >= GENERIC_MIN:
            return psi


@dataclass
class CompareReport:
    residual: float
    tol: float
    passed: bool
    up_to_phase: bool = False
    phase: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" (global phase {self.phase:+.6f} rad removed)" if self.up_to_phase else ""
        return f"{verdict}: ||C - U||_F = {self.residual:.3e} (tol {self.tol:.1e}){extra}"


def compare(u, c: Circuit, tol: float = 1e-9, up_to_phase: bool = False) -> CompareReport:
    """Frobenius distance between ``u`` and the circuit's matrix.

    With ``up_to_phase`` the circuit matrix is first multiplied by the phase
    that maximizes its overlap with ``u``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (c.d**c.n, c.d**c.n):
        raise ValidationError(f"U has shape {u.shape}, circuit acts on dimension {c.d**c.n}")
    m = circuit_matrix(c, limit=max(u.shape[0], 1))
    phase = 0.0
    if up_to_phase:
        overlap = np.vdot(m, u)
        phase = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
        m = m * np.exp(1j * phase)
    residual = float(np.linalg.norm(m - u))
    return CompareReport(residual, tol, residual <= tol, up_to_phase, phase)
