import itertools
import json

import numpy as np
import pytest

from quditqr.clubseq import make_club_sequence, sequence_length
from quditqr.core import Circuit, ControlledGate, ValidationError, basis_state, digits_of, index_of
from quditqr.householder import state_synthesis_trace
from quditqr.triangle import synthesize
from quditqr.verify import (
    check_zero_pattern,
    compare,
    haar_random_unitary,
    matching_indices,
    random_state,
    rsets,
)


def idx(text, d):
    return index_of(tuple(int(c) for c in text), d)


class TestRsets:
    def test_first_step_covers_everything(self):
        for d, n in [(2, 3), (3, 2), (3, 3)]:
            o = rsets(d, n, 1)
            assert o.r1 == frozenset()
            assert o.r2 == {index_of((0,) * (n - 1) + (k,), d) for k in range(d)}
            assert o.support == frozenset(range(d**n))

    def test_d3_n2_term_1(self):
        o = rsets(3, 2, 2)
        assert o.r1 == {idx("00", 3)}
        assert o.r2 == {idx("10", 3), idx("11", 3), idx("12", 3)}
        assert o.r3 == {idx("20", 3), idx("21", 3), idx("22", 3)}

    def test_final_step(self):
        for d, n in [(2, 3), (3, 2), (3, 3)]:
            o = rsets(d, n, sequence_length(d, n))
            assert o.r3 == frozenset()
            assert o.r2 == {index_of((k,) + (0,) * (n - 1), d) for k in range(d)}

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            rsets(3, 2, 5)
        with pytest.raises(ValidationError):
            rsets(3, 2, 0)

    @pytest.mark.parametrize("d,n", [(d, n) for d in (2, 3) for n in (1, 2, 3, 4)])
    def test_partition_identity(self, d, n):
        p = sequence_length(d, n)
        for j in range(1, p + 1):
            o = rsets(d, n, j)
            assert not (o.r1 & o.r2) and not (o.r1 & o.r3) and not (o.r2 & o.r3)
            assert o.zeroed <= o.r2
            if j < p:
                nxt = rsets(d, n, j + 1)
                assert o.support == nxt.support | o.zeroed
                assert not (nxt.support & o.zeroed)

    @pytest.mark.parametrize("d,n", [(2, 3), (3, 2), (3, 3), (2, 4)])
    def test_orbit_closure(self, d, n):
        for j, term in enumerate(make_club_sequence(d, n), start=1):
            word = term.control_word()
            live = rsets(d, n, j).support & matching_indices(word, d)
            t = word.target
            for s in live:
                digits = list(digits_of(s, d, n))
                for shift in range(d):
                    orbit = digits.copy()
                    orbit[t] = (orbit[t] + shift) % d
                    assert index_of(orbit, d) in live


class TestZeroPattern:
    def test_d3_n2_counts(self):
        _, trace = state_synthesis_trace(random_state(9, 0), 3)
        report = check_zero_pattern(trace, 3, 2)
        assert report.passed and report.generic
        assert report.zero_counts() == [0, 2, 4, 6, 8]
        assert len(report.steps) == 4

    def test_zero_state(self):
        _, trace = state_synthesis_trace(basis_state((0, 0), 3), 3)
        report = check_zero_pattern(trace, 3, 2)
        assert report.passed and not report.generic
        assert all(s.contained for s in report.steps)

    def test_non_generic_skips_growth(self):
        psi = random_state(27, 1)
        psi[5] = 0
        psi /= np.linalg.norm(psi)
        _, trace = state_synthesis_trace(psi, 3)
        report = check_zero_pattern(trace, 3, 3)
        assert report.passed and not report.generic
        assert all(s.growth is None for s in report.steps)

    @pytest.mark.parametrize("d,n", [(2, 3), (3, 3), (4, 2), (5, 2)])
    def test_generic(self, d, n):
        _, trace = state_synthesis_trace(random_state(d**n, 2), d)
        assert check_zero_pattern(trace, d, n).passed

    def test_detects_violation(self):
        _, trace = state_synthesis_trace(random_state(9, 3), 3)
        trace[2] = trace[2].copy()
        trace[2][idx("01", 3)] = 0.1
        report = check_zero_pattern(trace, 3, 2)
        assert not report.passed
        assert "VIOLATION" in str(report)
        assert json.loads(report.to_json())["passed"] is False

    def test_wrong_length(self):
        with pytest.raises(ValidationError):
            check_zero_pattern([np.ones(9)], 3, 2)


class TestRandom:
    def test_dim_one(self):
        u = haar_random_unitary(1, 0)
        assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-12

    def test_deterministic(self):
        assert np.array_equal(haar_random_unitary(9, 42), haar_random_unitary(9, 42))
        assert np.array_equal(random_state(9, 42), random_state(9, 42))

    def test_unitary(self):
        u = haar_random_unitary(16, 7)
        assert np.allclose(np.linalg.norm(u, axis=0), 1, atol=1e-12)
        assert np.linalg.norm(u.conj().T @ u - np.eye(16)) <= 1e-12

    def test_generic_state(self):
        for seed in range(20):
            psi = random_state(125, seed)
            assert np.min(np.abs(psi)) >= 1e-6
            assert abs(np.linalg.norm(psi) - 1) < 1e-12

    def test_bad_dim(self):
        with pytest.raises(ValidationError):
            haar_random_unitary(0)


class TestCompare:
    def test_synthesized(self):
        u = haar_random_unitary(9, 1)
        assert compare(u, synthesize(u, 3, 2), tol=1e-9).passed

    def test_empty_identity(self):
        assert compare(np.eye(4), Circuit(2, 2), tol=0).passed

    def test_perturbed(self):
        u = haar_random_unitary(9, 2)
        c = synthesize(u, 3, 2)
        g = c[3]
        w = haar_random_unitary(3, 9)
        h = 1e-3 * (w + w.conj().T) / 2
        bumped = g.v @ (np.eye(3) + 1j * h - h @ h / 2)
        q, r = np.linalg.qr(bumped)
        bumped = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        gates = list(c.gates)
        gates[3] = ControlledGate(g.word, bumped)
        assert not compare(u, Circuit(3, 2, tuple(gates)), tol=1e-6).passed

    def test_up_to_phase(self):
        u = haar_random_unitary(4, 3)
        c = synthesize(u, 2, 2)
        shifted = np.exp(0.7j) * u
        assert not compare(shifted, c, tol=1e-9).passed
        report = compare(shifted, c, tol=1e-9, up_to_phase=True)
        assert report.passed and abs(report.phase - 0.7) < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            compare(np.eye(8), Circuit(2, 2))
