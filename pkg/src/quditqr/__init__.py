"""Exact synthesis of qudit circuits from controlled one-qudit gates."""

from .clubseq import ClubTerm, make_club_sequence, sequence_length
from .core import (
    STAR,
    TARGET,
    Circuit,
    ControlledGate,
    ControlWord,
    DenseLimitError,
    ValidationError,
    apply_gate,
    circuit_matrix,
    embed,
    match,
)
from .counting import chain_a, chain_total, f, g, h, total_control_boxes
from .eigensynth import EigenSystem, eigen_synthesize, unitary_eigendecompose
from .householder import (
    club_householder_onto,
    one_qudit_householder,
    single_club_householder,
    state_synthesis_from_zero,
    state_synthesis_to_zero,
)
from .lowering import LoweredCircuit, lower, lower_circuit
from .triangle import synthesize, triangle_reduce
from .verify import check_zero_pattern, compare, haar_random_unitary, random_state, rsets

__all__ = [
    "STAR", "TARGET", "Circuit", "ControlledGate", "ControlWord", "DenseLimitError",
    "ValidationError", "apply_gate", "circuit_matrix", "embed", "match",
    "ClubTerm", "make_club_sequence", "sequence_length",
    "club_householder_onto", "one_qudit_householder", "single_club_householder",
    "state_synthesis_from_zero", "state_synthesis_to_zero",
    "synthesize", "triangle_reduce",
    "LoweredCircuit", "lower", "lower_circuit",
    "chain_a", "chain_total", "f", "g", "h", "total_control_boxes",
    "EigenSystem", "eigen_synthesize", "unitary_eigendecompose",
    "check_zero_pattern", "compare", "haar_random_unitary", "random_state", "rsets",
]
