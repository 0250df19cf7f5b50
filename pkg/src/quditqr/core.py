"""Gate and circuit data model for d-level registers.

Basis states of an n-qudit register are indexed by dit strings
``c_0 c_1 ... c_{n-1}`` with position 0 the most significant dit, so the
flat index is ``sum(c_i * d**(n - 1 - i))``. This is the C-order layout of a
``(d,) * n`` tensor, which is what every routine here relies on.

Gate lists are kept in time order: ``circuit.gates[0]`` acts first, and the
matrix of a circuit is therefore ``G_m @ ... @ G_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

STAR = "*"
TARGET = "T"

Letter = Union[int, str]

DENSE_LIMIT = 4096
UNITARY_TOL = 1e-10


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class DenseLimitError(ValidationError):
    """Raised when a dense d^n x d^n realization would exceed the cap."""


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of ``U^dagger U - I``."""
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def check_unitary(u, tol: float = UNITARY_TOL, what: str = "matrix") -> np.ndarray:
    """Return ``u`` as a complex square array, rejecting non-unitary input.

    The tolerance is absolute Frobenius, scaled by the dimension.
    """
    arr = np.asarray(u, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{what} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} has non-finite entries")
    defect = unitarity_defect(arr)
    if defect > tol * arr.shape[0]:
        raise ValidationError(f"{what} is not unitary (defect {defect:.3e})")
    return arr


def num_qudits(dim: int, d: int) -> int:
    """Return n with d**n == dim, or raise."""
    n, size = 0, 1
    while size < dim:
        size *= d
        n += 1
    if size != dim:
        raise ValidationError(f"dimension {dim} is not a power of d={d}")
    return n


def digits_of(index: int, d: int, n: int) -> tuple[int, ...]:
    """Dit string of a basis index, most significant dit first."""
    if not 0 <= index < d**n:
        raise ValidationError(f"index {index} out of range for d={d}, n={n}")
    out = []
    for _ in range(n):
        index, r = divmod(index, d)
        out.append(r)
    return tuple(reversed(out))


def index_of(digits: Sequence[int], d: int) -> int:
    """Basis index of a dit string."""
    idx = 0
    for c in digits:
        if not 0 <= c < d:
            raise ValidationError(f"dit {c} out of range for d={d}")
        idx = idx * d + c
    return idx


def parse_dits(text: str, d: int, n: int | None = None) -> tuple[int, ...]:
    """Parse ``"210"`` (or ``"2,1,0"`` for d > 10) into a dit tuple."""
    parts = text.split(",") if "," in text else list(text)
    dits = tuple(int(p) for p in parts)
    if n is not None and len(dits) != n:
        raise ValidationError(f"expected {n} dits, got {text!r}")
    if any(not 0 <= c < d for c in dits):
        raise ValidationError(f"dit out of range in {text!r} for d={d}")
    return dits


def basis_state(digits: Sequence[int], d: int) -> np.ndarray:
    psi = np.zeros(d ** len(digits), dtype=complex)
    psi[index_of(digits, d)] = 1.0
    return psi


@dataclass(frozen=True)
class ControlWord:
    """A length-n word over ``{0..d-1, STAR, TARGET}`` with exactly one target."""

    d: int
    letters: tuple

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if self.d < 2:
            raise ValidationError("d must be at least 2")
        if sum(1 for x in letters if x == TARGET) != 1:
            raise ValidationError(f"control word {letters} needs exactly one target")
        for x in letters:
            if isinstance(x, str):
                if x not in (STAR, TARGET):
                    raise ValidationError(f"bad letter {x!r}")
            elif not (isinstance(x, (int, np.integer)) and 0 <= x < self.d):
                raise ValidationError(f"control value {x!r} out of range for d={self.d}")

    @classmethod
    def parse(cls, text: str, d: int) -> "ControlWord":
        """Build from a compact string such as ``"*1**T**"`` (d <= 10)."""
        return cls(d, tuple(ch if ch in (STAR, TARGET) else int(ch) for ch in text))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def target(self) -> int:
        return self.letters.index(TARGET)

    @property
    def controls(self) -> dict[int, int]:
        return {i: int(x) for i, x in enumerate(self.letters) if not isinstance(x, str)}

    @property
    def num_controls(self) -> int:
        return sum(1 for x in self.letters if not isinstance(x, str))

    def matches(self, digits: Sequence[int]) -> bool:
        if len(digits) != self.n:
            raise ValidationError("dit string length differs from control word length")
        return all(isinstance(x, str) or x == c for x, c in zip(self.letters, digits))

    def __str__(self) -> str:
        return "".join(str(x) for x in self.letters) if self.d <= 10 else ",".join(
            str(x) for x in self.letters
        )


def match(word: ControlWord, digits: Sequence[int], d: int | None = None) -> bool:
    """True iff every numeric letter of ``word`` equals the matching dit."""
    if d is not None and d != word.d:
        raise ValidationError("control word and dit string disagree on d")
    if any(not 0 <= c < word.d for c in digits):
        raise ValidationError("dit out of range")
    return word.matches(digits)


@dataclass(frozen=True, eq=False)
class ControlledGate:
    """The controlled one-qudit operator: apply ``v`` on the target line iff
    every numeric control letter matches."""

    word: ControlWord
    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=complex)
        if v.shape != (self.word.d, self.word.d):
            raise ValidationError(f"payload shape {v.shape} does not match d={self.word.d}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("payload has non-finite entries")
        if unitarity_defect(v) > UNITARY_TOL * self.word.d:
            raise ValidationError("payload is not unitary")
        v.flags.writeable = False
        object.__setattr__(self, "v", v)

    @property
    def d(self) -> int:
        return self.word.d

    @property
    def n(self) -> int:
        return self.word.n

    @property
    def num_controls(self) -> int:
        return self.word.num_controls

    def adjoint(self) -> "ControlledGate":
        return ControlledGate(self.word, self.v.conj().T)

    def is_identity(self, tol: float = 0.0) -> bool:
        return float(np.max(np.abs(self.v - np.eye(self.d)))) <= tol

    def __repr__(self) -> str:
        return f"ControlledGate({self.word})"


def adjoint(g: ControlledGate) -> ControlledGate:
    return g.adjoint()


def _apply_inplace(t: np.ndarray, letters: Sequence[Letter], v: np.ndarray) -> None:
    """Apply a controlled one-qudit payload to a ``(d,)*n + batch`` tensor in place."""
    index = []
    axis = 0
    tpos = None
    for x in letters:
        if isinstance(x, str):
            if x == TARGET:
                tpos = axis
            index.append(slice(None))
            axis += 1
        else:
            index.append(int(x))
    sub = t[tuple(index)]
    sub[...] = np.moveaxis(np.tensordot(v, sub, axes=([1], [tpos])), 0, tpos)


def apply_word(x: np.ndarray, letters: Sequence[Letter], v: np.ndarray, d: int, n: int) -> np.ndarray:
    """Apply ``v`` fiber-wise to ``x`` whose leading axis has length d**n.

    Trailing axes are treated as a batch, so a matrix is transformed
    column by column (left multiplication by the embedded gate).
    """
    x = np.array(x, dtype=complex)
    if x.shape[0] != d**n:
        raise ValidationError(f"leading dimension {x.shape[0]} != d**n = {d**n}")
    t = x.reshape((d,) * n + x.shape[1:])
    _apply_inplace(t, letters, v)
    return x


def apply_gate(g: ControlledGate, psi: np.ndarray) -> np.ndarray:
    """Return ``g`` applied to ``psi`` (a state or a stack of column states)."""
    return apply_word(psi, g.word.letters, g.v, g.d, g.n)


def embed(g: ControlledGate, limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense d^n x d^n matrix of a controlled gate."""
    dim = g.d**g.n
    if dim > limit:
        raise DenseLimitError(f"d^n = {dim} exceeds dense limit {limit}")
    return apply_gate(g, np.eye(dim, dtype=complex))


def swap_permutation(j: int, k: int, d: int, n: int) -> np.ndarray:
    """Index permutation ``perm`` with ``(chi psi)[perm[s]] = psi[s]`` swapping dits j, k."""
    if not (0 <= j < n and 0 <= k < n):
        raise ValidationError(f"qudit index out of range for n={n}")
    axes = list(range(n))
    axes[j], axes[k] = axes[k], axes[j]
    return np.arange(d**n).reshape((d,) * n).transpose(axes).reshape(-1)


def swap_matrix(j: int, k: int, d: int, n: int, limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense permutation matrix that exchanges qudits j and k."""
    dim = d**n
    if dim > limit:
        raise DenseLimitError(f"d^n = {dim} exceeds dense limit {limit}")
    perm = swap_permutation(j, k, d, n)
    chi = np.zeros((dim, dim))
    chi[perm, np.arange(dim)] = 1.0
    return chi


def swap_gate(j: int, k: int, d: int, n: int) -> np.ndarray:
    """The qudit exchange as a permutation on basis indices (an involution)."""
    return swap_permutation(j, k, d, n)


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate list on a fixed (d, n) register; ``gates[0]`` acts first."""

    d: int
    n: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        for g in gates:
            if g.d != self.d or g.n != self.n:
                raise ValidationError(
                    f"gate on (d={g.d}, n={g.n}) in circuit on (d={self.d}, n={self.n})"
                )

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[ControlledGate]:
        return iter(self.gates)

    def __getitem__(self, i):
        return self.gates[i]

    def then(self, other: "Circuit | Iterable[ControlledGate]") -> "Circuit":
        """Circuit that runs ``self`` and afterwards ``other``."""
        extra = other.gates if isinstance(other, Circuit) else tuple(other)
        return Circuit(self.d, self.n, self.gates + extra)

    def adjoint(self) -> "Circuit":
        return Circuit(self.d, self.n, tuple(g.adjoint() for g in reversed(self.gates)))

    def apply(self, psi: np.ndarray) -> np.ndarray:
        x = np.array(psi, dtype=complex)
        if x.shape[0] != self.d**self.n:
            raise ValidationError("state dimension does not match circuit")
        t = x.reshape((self.d,) * self.n + x.shape[1:])
        for g in self.gates:
            _apply_inplace(t, g.word.letters, g.v)
        return x

    def trace(self, psi: np.ndarray) -> list[np.ndarray]:
        """States before every gate plus the final state (length m + 1)."""
        states = [np.array(psi, dtype=complex)]
        for g in self.gates:
            states.append(apply_gate(g, states[-1]))
        return states

    def matrix(self, limit: int = DENSE_LIMIT) -> np.ndarray:
        return circuit_matrix(self, limit)


def circuit_matrix(c: Circuit, limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense product G_m ... G_1 of the circuit (gates[0] innermost)."""
    dim = c.d**c.n
    if dim > limit:
        raise DenseLimitError(f"d^n = {dim} exceeds dense limit {limit}")
    return c.apply(np.eye(dim, dtype=complex))


def prune(c: Circuit, tol: float = 1e-12) -> Circuit:
    """Drop gates whose payload equals the identity within ``tol`` (max-abs)."""
    return Circuit(c.d, c.n, tuple(g for g in c.gates if not g.is_identity(tol)))
