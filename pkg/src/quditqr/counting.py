"""Exact gate and control counts for the synthesis algorithms.

Everything here is integer arithmetic on Python ints, so values are exact
at any size. Memo tables use ``functools.lru_cache``, which is safe to hit
from several threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import Circuit, ValidationError


def _check(d: int, n: int) -> None:
    if d < 2:
        raise ValidationError("d must be at least 2")
    if n < 1:
        raise ValidationError("n must be at least 1")


def club_length(d: int, n: int) -> int:
    return (d**n - 1) // (d - 1)


def h(d: int, n: int, k: int) -> int:
    """Number of k-controlled gates in an n-qudit state synthesis."""
    _check(d, n)
    if k == 0:
        return n
    if k == 1:
        return club_length(d, n) - n
    return 0


def g(d: int, n: int, k: int) -> int:
    """k-controlled gates spent below the block diagonal (column loops)."""
    _check(d, n)
    if n < 2:
        raise ValidationError("g is defined for n >= 2")
    out = d * (d - 1) // 2 * d ** (n - 1) * (h(d, n - 1, k - 1) if k >= 1 else 0)
    if k == n - 1:
        out += d**n - d ** (n - 1)
    return out


@lru_cache(maxsize=None)
def f(d: int, n: int, k: int) -> int:
    """Total k-controlled gates in the reduction of an n-qudit unitary."""
    _check(d, n)
    if k < 0:
        return 0
    if k == 0:
        return 1
    if n == 1:
        return 0
    return g(d, n, k) + f(d, n - 1, k) + (d - 1) * f(d, n - 1, k - 1)


def total_control_boxes(d: int, n: int) -> int:
    """Sum over k of k * f(d, n, k)."""
    return sum(k * f(d, n, k) for k in range(1, n))


def total_gates(d: int, n: int) -> int:
    return sum(f(d, n, k) for k in range(n))


@dataclass(frozen=True)
class CountTable:
    """Map k -> count of k-controlled operations on a (d, n) register."""

    d: int
    n: int
    counts: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> int:
        return self.counts.get(k, 0)

    def as_list(self) -> list[int]:
        width = max([self.n] + [k + 1 for k in self.counts])
        return [self[k] for k in range(width)]

    @property
    def weighted(self) -> int:
        return sum(k * v for k, v in self.counts.items())

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def f_table(d: int, n: int) -> CountTable:
    return CountTable(d, n, {k: f(d, n, k) for k in range(n)})


def h_table(d: int, n: int) -> CountTable:
    return CountTable(d, n, {k: h(d, n, k) for k in range(n)})


def circuit_histogram(c: Circuit) -> CountTable:
    """Count the gates of a circuit by number of controls."""
    counts = {k: 0 for k in range(c.n)}
    for gate in c.gates:
        counts[gate.num_controls] = counts.get(gate.num_controls, 0) + 1
    return CountTable(c.d, c.n, counts)


@dataclass(frozen=True)
class BoundReport:
    d: int
    n_max: int
    violations: list  # (n, k, f, bound) with f > d^(2n-k+4)
    ratios: dict  # n -> total(d, n) / d^(2n), exact
    max_ratio: Fraction
    monotone: bool

    @property
    def holds(self) -> bool:
        return not self.violations


def bound_check(d: int, n_max: int, n_min: int = 3) -> BoundReport:
    """Check f(d,n,k) <= d^(2n-k+4) and tabulate total(d,n)/d^(2n), n_min <= n <= n_max."""
    violations = []
    ratios = {}
    for n in range(n_min, n_max + 1):
        for k in range(n):
            fk = f(d, n, k)
            bound = d ** (2 * n - k + 4)
            if fk > bound:
                violations.append((n, k, fk, bound))
        ratios[n] = Fraction(total_control_boxes(d, n), d ** (2 * n))
    vals = [ratios[n] for n in sorted(ratios)]
    monotone = all(a <= b for a, b in zip(vals, vals[1:]))
    return BoundReport(d, n_max, violations, ratios, max(vals), monotone)


@lru_cache(maxsize=None)
def chain_a(d: int, n: int, k: int) -> int:
    """Singly-controlled club-sequence gates whose control sits k lines above the target
    (k = 0 counts the uncontrolled gates)."""
    _check(d, n)
    if k < 0:
        raise ValidationError("k must be non-negative")
    if k == 0:
        return n
    if k >= n:
        return 0
    return (d - 1) + d * chain_a(d, n - 1, k)


def chain_a_closed(d: int, n: int, k: int) -> int:
    _check(d, n)
    if k == 0:
        return n
    if k >= n:
        return 0
    return d ** (n - k) - 1


def chain_total(d: int, n: int) -> int:
    """Sum over k of k * a(d, n, k)."""
    return sum(k * chain_a(d, n, k) for k in range(1, n))


def chain_table(d: int, n: int) -> CountTable:
    return CountTable(d, n, {k: chain_a(d, n, k) for k in range(n)})
