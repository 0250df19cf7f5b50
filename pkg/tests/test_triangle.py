import numpy as np
import pytest

from quditqr.core import ValidationError, circuit_matrix, embed
from quditqr.counting import circuit_histogram, f, total_control_boxes
from quditqr.triangle import (
    DiagonalPhases,
    diagonal_circuit,
    synthesize,
    triangle_reduce,
)
from quditqr.verify import haar_random_unitary


@pytest.mark.parametrize("d,n", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (4, 2), (2, 4), (3, 3)])
@pytest.mark.parametrize("fix_phase", [True, False])
def test_reduction_is_diagonal(d, n, fix_phase):
    u = haar_random_unitary(d**n, 100 + d * 10 + n)
    res = triangle_reduce(u, d, n, fix_phase=fix_phase)
    m = circuit_matrix(res.reduction) @ u
    assert np.linalg.norm(m - res.phases.matrix()) <= 1e-9
    if fix_phase:
        assert np.allclose(res.phases.angles, 0, atol=1e-9)


@pytest.mark.parametrize("d,n", [(2, 1), (2, 2), (3, 2), (2, 3), (3, 3), (2, 4)])
@pytest.mark.parametrize("fix_phase", [True, False])
def test_synthesize_reconstructs(d, n, fix_phase):
    u = haar_random_unitary(d**n, 7 * d + n)
    c = synthesize(u, d, n, fix_phase=fix_phase)
    assert np.linalg.norm(circuit_matrix(c) - u) <= 1e-9


def test_identity_input():
    res = triangle_reduce(np.eye(9), 3, 2)
    assert all(g.is_identity() for g in res.reduction)
    assert np.array_equal(res.phases.angles, np.zeros(9))
    assert len(synthesize(np.eye(9), 3, 2, prune_identities=True)) == 0


def test_single_qudit_base_case():
    u = haar_random_unitary(3, 1)
    res = triangle_reduce(u, 3, fix_phase=False)
    assert len(res.reduction) == 1 and res.reduction[0].num_controls == 0
    assert np.linalg.norm(res.reduction[0].v @ u - res.phases.matrix()) < 1e-12


@pytest.mark.parametrize("d,n", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (2, 4)])
def test_histogram_follows_recursion(d, n):
    res = triangle_reduce(haar_random_unitary(d**n, 3), d, n)
    hist = circuit_histogram(res.reduction)
    assert hist.as_list() == [f(d, n, k) for k in range(n)]
    assert hist.weighted == total_control_boxes(d, n)


@pytest.mark.parametrize(
    "d,n,expected", [(2, 2, 5), (2, 3, 40), (3, 2, 17), (3, 3, 285), (4, 2, 39), (2, 4, 220)]
)
def test_weighted_counts(d, n, expected):
    c = synthesize(haar_random_unitary(d**n, 11), d, n)
    assert circuit_histogram(c).weighted == expected


def test_intermediate_invariant():
    d, n = 3, 2
    u = haar_random_unitary(9, 5)
    seen = []

    def observer(j, m):
        cols = m[:, : j + 1]
        assert np.allclose(np.abs(np.diagonal(cols)), 1, atol=1e-9)
        off = cols.copy()
        off[np.arange(j + 1), np.arange(j + 1)] = 0
        assert np.linalg.norm(off) <= 1e-9
        seen.append(j)

    triangle_reduce(u, d, n, observer=observer)
    assert seen[-1] == d**n - 1
    assert seen == sorted(seen)


@pytest.mark.parametrize("d,n", [(3, 2), (4, 2), (3, 3)])
def test_cleanup_gates_fix_upper_rows(d, n):
    res = triangle_reduce(haar_random_unitary(d**n, 6), d, n)
    cleanup = [g for g in res.reduction if g.word.target == 0 and g.num_controls == n - 1]
    assert len(cleanup) == (d - 1) * d ** (n - 1)
    for i, g in enumerate(cleanup):
        pivot = i // d ** (n - 1)
        assert np.allclose(g.v[:, :pivot], np.eye(d)[:, :pivot], rtol=0, atol=1e-10)


def test_non_unitary_rejected():
    with pytest.raises(ValidationError):
        triangle_reduce(np.ones((4, 4)), 2)
    with pytest.raises(ValidationError):
        triangle_reduce(np.eye(6), 2)


class TestDiagonal:
    def test_zero_phases(self):
        assert len(diagonal_circuit(np.zeros(4), 2, 2)) == 0

    def test_single_pi(self):
        c = diagonal_circuit(np.array([np.pi, 0, 0, 0]), 2, 2)
        assert len(c) == 1
        assert c[0].word.letters == ("T", 0)
        assert np.allclose(c[0].v, np.diag([-1, 1]))
        assert np.allclose(embed(c[0]), np.diag([-1, 1, 1, 1]))

    def test_random_phases(self):
        theta = np.random.default_rng(0).uniform(-np.pi, np.pi, 9)
        c = diagonal_circuit(theta, 3, 2)
        assert len(c) <= 9
        assert np.allclose(circuit_matrix(c), np.diag(np.exp(1j * theta)), atol=1e-10)

    def test_angle_range(self):
        p = DiagonalPhases([-np.pi, np.pi, 0.5])
        assert np.all(p.angles > -np.pi) and np.all(p.angles <= np.pi)
