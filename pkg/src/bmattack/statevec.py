"""Dense state-vector simulation over a (domain, bits, ancilla) register layout.

Basis index of ``|x>|y>|a>`` is ``(x << (m + 1)) | (y << 1) | a``. Within the
``m``-qubit bit register, qubit 1 is the most significant bit of ``y``, so the
pattern ``"10"`` means qubit 1 set and qubit 2 clear.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .generators.base import ParameterError

DEFAULT_QUBIT_CAP = 24
NORM_TOL = 1e-10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class ResourceError(RuntimeError):
    """Requested register layout exceeds the qubit cap."""


@dataclass(frozen=True)
class RegisterLayout:
    domain_qubits: int
    bit_qubits: int
    ancilla_qubits: int = 1
    cap: int = DEFAULT_QUBIT_CAP

    def __post_init__(self):
        if self.domain_qubits < 1 or self.bit_qubits < 1:
            raise ParameterError("domain and bit registers need at least one qubit")
        if self.ancilla_qubits != 1:
            raise ParameterError("layout carries exactly one ancilla qubit")
        if self.total > self.cap:
            raise ResourceError(f"{self.total} qubits exceeds the cap of {self.cap}")

    @property
    def total(self) -> int:
        return self.domain_qubits + self.bit_qubits + self.ancilla_qubits

    @property
    def shape(self) -> tuple[int, int, int]:
        return (1 << self.domain_qubits, 1 << self.bit_qubits, 2)

    def index(self, domain: int, bits: int, ancilla: int) -> int:
        return (domain << (self.bit_qubits + 1)) | (bits << 1) | ancilla


@dataclass(frozen=True)
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(self.layout.shape)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def _with(self, amps: np.ndarray) -> "StateVector":
        return StateVector(self.layout, amps)

    def amplitude(self, domain: int, bits: int, ancilla: int) -> complex:
        return complex(self.amplitudes[domain, bits, ancilla])


def init_state(layout: RegisterLayout) -> StateVector:
    """``|0>|0...0>|1>``."""
    amps = np.zeros(layout.shape, dtype=complex)
    amps[0, 0, 1] = 1.0
    return StateVector(layout, amps)


def basis_state(layout: RegisterLayout, domain: int, bits: int = 0, ancilla: int = 1) -> StateVector:
    amps = np.zeros(layout.shape, dtype=complex)
    amps[domain, bits, ancilla] = 1.0
    return StateVector(layout, amps)


Selector = Union[str, Iterable[str]]


def _registers(target: Selector) -> set[str]:
    regs = {target} if isinstance(target, str) else set(target)
    unknown = regs - {"domain", "bits", "ancilla"}
    if unknown:
        raise ParameterError(f"unknown register(s): {sorted(unknown)}")
    return regs


def _hadamard_axis(amps: np.ndarray, axis: int, qubits: int) -> np.ndarray:
    """Apply H to every qubit packed in ``axis`` (a dimension of size 2**qubits)."""
    shape = amps.shape
    out = amps
    for q in range(qubits):
        # split the axis as (high, 2, low) around qubit q
        lead = int(np.prod(shape[:axis], dtype=int))
        trail = int(np.prod(shape[axis + 1:], dtype=int))
        high = 1 << (qubits - q - 1)
        low = 1 << q
        t = out.reshape(lead, high, 2, low, trail)
        t = np.einsum("ij,ahjlb->ahilb", _H, t)
        out = t.reshape(shape)
    return out


def apply_hadamard_layer(s: StateVector, target: Selector) -> StateVector:
    regs = _registers(target)
    if "bits" in regs:
        raise ParameterError("Hadamard is never applied to the bit register")
    amps = s.amplitudes
    if "domain" in regs:
        amps = _hadamard_axis(amps, 0, s.layout.domain_qubits)
    if "ancilla" in regs:
        amps = _hadamard_axis(amps, 2, 1)
    return s._with(amps)


def check_bijection(table: Sequence[int], size: int) -> np.ndarray:
    arr = np.asarray(table, dtype=np.int64)
    if arr.shape != (size,) or not np.array_equal(np.sort(arr), np.arange(size)):
        raise ParameterError(f"table is not a bijection on [0, {size})")
    return arr


def invert_table(table: Sequence[int]) -> np.ndarray:
    arr = check_bijection(table, len(table))
    inv = np.empty_like(arr)
    inv[arr] = np.arange(len(arr))
    return inv


def apply_permutation_gate(s: StateVector, table: Sequence[int]) -> StateVector:
    """Move the amplitude of ``|x>|y>|a>`` to ``|table[x]>|y>|a>``."""
    arr = check_bijection(table, s.layout.shape[0])
    out = np.empty_like(s.amplitudes)
    out[arr] = s.amplitudes
    return s._with(out)


def _mask(marked, size: int) -> np.ndarray:
    if callable(marked):
        return np.fromiter((bool(marked(x)) for x in range(size)), dtype=bool, count=size)
    arr = np.asarray(marked)
    if arr.dtype == bool:
        if arr.shape != (size,):
            raise ParameterError("predicate mask has the wrong length")
        return arr
    mask = np.zeros(size, dtype=bool)
    mask[np.asarray(list(marked), dtype=np.int64)] = True
    return mask


def bit_mask(step: int, m: int) -> int:
    """Integer mask of bit-register qubit ``step`` (1-indexed, MSB first)."""
    if not 1 <= step <= m:
        raise ParameterError(f"step {step} outside 1..{m}")
    return 1 << (m - step)


def apply_predicate_flip(s: StateVector, marked, step: int) -> StateVector:
    """Flip bit-register qubit ``step`` on every branch whose domain value is marked.

    ``marked`` is a boolean mask, an iterable of domain values, or a callable.
    """
    m = s.layout.bit_qubits
    flip = bit_mask(step, m)
    mask = _mask(marked, s.layout.shape[0])
    out = s.amplitudes.copy()
    perm = np.arange(1 << m) ^ flip
    out[mask] = s.amplitudes[mask][:, perm, :]
    return s._with(out)


def parse_pattern(good_bits, m: int) -> int:
    if isinstance(good_bits, str):
        if len(good_bits) != m or set(good_bits) - {"0", "1"}:
            raise ParameterError(f"pattern {good_bits!r} is not {m} bits")
        return int(good_bits, 2)
    bits = list(good_bits)
    if len(bits) != m or any(b not in (0, 1) for b in bits):
        raise ParameterError(f"pattern {bits!r} is not {m} bits")
    return int("".join(map(str, bits)), 2)


def apply_phase_oracle(s: StateVector, good_bits) -> StateVector:
    """Negate every amplitude whose bit register equals ``good_bits``."""
    y = parse_pattern(good_bits, s.layout.bit_qubits)
    out = s.amplitudes.copy()
    out[:, y, :] *= -1
    return s._with(out)


def apply_pattern_controlled_not(s: StateVector, good_bits) -> StateVector:
    """Flip the ancilla when the bit register equals ``good_bits``.

    With the ancilla in ``|->`` this kicks back the same phase as
    :func:`apply_phase_oracle`.
    """
    y = parse_pattern(good_bits, s.layout.bit_qubits)
    out = s.amplitudes.copy()
    out[:, y, :] = s.amplitudes[:, y, ::-1]
    return s._with(out)


def reflect_about_initial(s: StateVector) -> StateVector:
    """``2|psi0><psi0| - I`` with ``psi0 = |0>|0>|1>``."""
    out = -s.amplitudes
    out[0, 0, 1] = s.amplitudes[0, 0, 1]
    return s._with(out)


# gates as reversible steps of a prepared circuit

@dataclass(frozen=True)
class HadamardGate:
    target: tuple[str, ...]
    label: str = "H"

    def apply(self, s: StateVector) -> StateVector:
        return apply_hadamard_layer(s, self.target)

    def inverse(self, s: StateVector) -> StateVector:
        return apply_hadamard_layer(s, self.target)


@dataclass(frozen=True)
class PermutationGate:
    table: tuple[int, ...]
    label: str = "rho"

    def apply(self, s: StateVector) -> StateVector:
        return apply_permutation_gate(s, self.table)

    def inverse(self, s: StateVector) -> StateVector:
        return apply_permutation_gate(s, invert_table(self.table))


@dataclass(frozen=True)
class PredicateFlipGate:
    marked: tuple[bool, ...]
    step: int
    label: str = "delta"

    def apply(self, s: StateVector) -> StateVector:
        return apply_predicate_flip(s, np.array(self.marked, dtype=bool), self.step)

    inverse = apply


class Circuit:
    """An ordered gate list usable as the state-preparation unitary."""

    def __init__(self, gates: Sequence = ()):
        self.gates = list(gates)

    def __len__(self):
        return len(self.gates)

    def append(self, gate) -> "Circuit":
        self.gates.append(gate)
        return self

    def run(self, s: StateVector, observer: Callable = None) -> StateVector:
        for gate in self.gates:
            s = gate.apply(s)
            if observer is not None:
                observer(gate, s)
        return s

    def run_inverse(self, s: StateVector) -> StateVector:
        for gate in reversed(self.gates):
            s = gate.inverse(s)
        return s


def grover_iterate(s: StateVector, prepare: Circuit, good_bits, k: int) -> StateVector:
    """Apply ``k`` rounds of ``A (2|0><0| - I) A^-1 S_good``.

    ``A`` is ``prepare``; ``s`` is expected to equal ``A |psi0>``.
    """
    if k < 0:
        raise ParameterError("iteration count must be non-negative")
    for _ in range(k):
        s = apply_phase_oracle(s, good_bits)
        s = prepare.run_inverse(s)
        s = reflect_about_initial(s)
        s = prepare.run(s)
    return s


def measure_register_distribution(s: StateVector, register: str) -> dict[int, float]:
    (reg,) = _registers(register)
    probs = np.abs(s.amplitudes) ** 2
    axes = {"domain": (1, 2), "bits": (0, 2), "ancilla": (0, 1)}[reg]
    marginal = probs.sum(axis=axes)
    return {i: float(p) for i, p in enumerate(marginal)}


def sample_measurement(s: StateVector, register: str, rng_seed: int) -> int:
    dist = measure_register_distribution(s, register)
    outcomes = np.array(list(dist))
    p = np.array(list(dist.values()))
    rng = np.random.default_rng(rng_seed)
    return int(rng.choice(outcomes, p=p / p.sum()))


def good_subspace_probability(s: StateVector, good_bits) -> float:
    y = parse_pattern(good_bits, s.layout.bit_qubits)
    return float(np.sum(np.abs(s.amplitudes[:, y, :]) ** 2))


# explicit matrices

def gate_matrix_from_table(table: Sequence[int], orientation: str = "column") -> np.ndarray:
    """0-1 matrix of a permutation gate.

    ``orientation="column"`` gives the operator acting on kets: column ``x`` has
    its 1 in row ``table[x]``. ``"row"`` is the transpose, where row ``x`` has
    its 1 in column ``table[x]``.
    """
    arr = check_bijection(table, len(table))
    d = len(arr)
    G = np.zeros((d, d), dtype=complex)
    G[arr, np.arange(d)] = 1
    if orientation == "column":
        return G
    if orientation == "row":
        return G.T.copy()
    raise ParameterError(f"unknown orientation {orientation!r}")


def gate_matrix_from_predicate(marked, size: int) -> np.ndarray:
    """Controlled flip over ``domain (x) one target qubit``; basis index ``2*x + t``."""
    mask = _mask(marked, size)
    table = np.arange(2 * size)
    for x in np.flatnonzero(mask):
        table[2 * x], table[2 * x + 1] = 2 * x + 1, 2 * x
    return gate_matrix_from_table(table)


def unitarity_deviation(G: np.ndarray) -> float:
    d = G.shape[0]
    return float(np.max(np.abs(G @ G.conj().T - np.eye(d))))


def is_unitary(G: np.ndarray, atol: float = NORM_TOL) -> bool:
    return G.ndim == 2 and G.shape[0] == G.shape[1] and unitarity_deviation(G) <= atol
