"""Unitary synthesis from state-synthesis circuits via the spectral decomposition.

``U = prod_j W_j P_j W_j^dagger`` where ``W_j |j> = |lambda_j>`` and ``P_j``
puts the eigenphase on ``|j>``. Each ``W_j^dagger`` is a club reduction of
the eigenvector onto ``|j>``; the factors commute, so their order is free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .core import Circuit, ValidationError, check_unitary, num_qudits
from .householder import club_householder_onto
from .triangle import phase_gate_for


@dataclass(frozen=True, eq=False)
class EigenSystem:
    eigenvalues: np.ndarray  # unit modulus
    vectors: np.ndarray  # column j is |lambda_j>

    @property
    def angles(self) -> np.ndarray:
        return np.angle(self.eigenvalues)

    def vector(self, j: int) -> np.ndarray:
        return self.vectors[:, j]


def unitary_eigendecompose(u) -> EigenSystem:
    """Eigenvalues and an orthonormal eigenbasis of a unitary.

    Uses the complex Schur form ``U = Z T Z^dagger``: Z is unitary whatever
    the eigenvalue multiplicities, and for a normal matrix T is diagonal up
    to rounding, so the Schur vectors are eigenvectors.
    """
    u = check_unitary(u, what="U")
    t, z = scipy.linalg.schur(u, output="complex")
    lam = np.diagonal(t).copy()
    lam /= np.abs(lam)
    # Z is orthonormal already; a QR pass removes any drift
    q, r = np.linalg.qr(z)
    q *= np.diagonal(r) / np.abs(np.diagonal(r))
    return EigenSystem(lam, q)


def eigen_blocks(u, d: int, n: Optional[int] = None) -> list[Circuit]:
    """The d^n circuits realizing ``W_j P_j W_j^dagger``, in j order."""
    u = check_unitary(u, what="U")
    if n is None:
        n = num_qudits(u.shape[0], d)
    if u.shape[0] != d**n:
        raise ValidationError(f"U has dimension {u.shape[0]}, expected d**n = {d**n}")
    es = unitary_eigendecompose(u)
    blocks = []
    for j, digits in enumerate(itertools.product(range(d), repeat=n)):
        to_basis = club_householder_onto(es.vector(j), digits, d)
        phase = phase_gate_for(digits, float(es.angles[j]), d)
        blocks.append(to_basis.then([phase]).then(to_basis.adjoint()))
    return blocks


def eigen_synthesize(u, d: int, n: Optional[int] = None) -> Circuit:
    """Exact circuit for ``u`` with d^n (2p + 1) controlled one-qudit gates."""
    blocks = eigen_blocks(u, d, n)
    gates = tuple(g for b in blocks for g in b)
    return Circuit(blocks[0].d, blocks[0].n, gates)


def spectral_partial_product(es: EigenSystem, k: int) -> np.ndarray:
    """``sum_{j<=k} e^{i theta_j}|lambda_j><lambda_j| + sum_{j>k} |lambda_j><lambda_j|``."""
    lam = np.ones(es.eigenvalues.shape, dtype=complex)
    lam[: k + 1] = es.eigenvalues[: k + 1]
    return (es.vectors * lam) @ es.vectors.conj().T
