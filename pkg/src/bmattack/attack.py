"""Permanent-compromise attack: marking walk, amplitude amplification, recovery.

The domain register is loaded with every candidate for the first internal
state ``x_1``. Step ``i`` of the walk flips bit-register qubit ``i`` on the
branches whose current state would emit ``b_i``, then advances every branch
through the permutation. After ``m`` steps the branch carrying ``1...1`` holds
``x_{m+1}``, which amplitude amplification makes the likely measurement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .generators.base import GeneratorSpec, ParameterError
from .statevec import (
    Circuit,
    HadamardGate,
    PermutationGate,
    PredicateFlipGate,
    RegisterLayout,
    StateVector,
    DEFAULT_QUBIT_CAP,
    grover_iterate,
    init_state,
    measure_register_distribution,
    sample_measurement,
)

AMP_EPS = 1e-12


def parse_bits(bits) -> tuple[int, ...]:
    """Accept ``"10"``, ``[1, 0]`` or any iterable of 0/1 values."""
    if isinstance(bits, str):
        if not bits or set(bits) - {"0", "1"}:
            raise ParameterError(f"bit string {bits!r} must match [01]+")
        return tuple(int(b) for b in bits)
    out = tuple(int(b) for b in bits)
    if not out:
        raise ParameterError("at least one observed bit is required")
    if any(b not in (0, 1) for b in out):
        raise ParameterError(f"observed bits {out!r} must be 0 or 1")
    return out


def bits_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class AttackPlan:
    spec: GeneratorSpec
    observed_bits: tuple[int, ...]
    n: int
    m: int
    k: int
    theta: float
    predicted_success: float
    assumed_solutions: int = 1
    qubit_cap: int = DEFAULT_QUBIT_CAP

    @property
    def layout(self) -> RegisterLayout:
        return RegisterLayout(self.n, self.m, cap=self.qubit_cap)

    @property
    def good_pattern(self) -> str:
        return "1" * self.m


def grover_iterations(N: int, solutions: int = 1) -> int:
    # round() is half-to-even
    return round(math.pi / 4 * math.sqrt(N / solutions))


def plan_attack(spec: GeneratorSpec, bits, assumed_solutions: int = 1,
                qubit_cap: int = DEFAULT_QUBIT_CAP) -> AttackPlan:
    observed = parse_bits(bits)
    n, m = spec.n_bits, len(observed)
    RegisterLayout(n, m, cap=qubit_cap)  # raises ResourceError when oversized
    N = 1 << n
    if not 1 <= assumed_solutions <= N:
        raise ParameterError(f"assumed solution count must lie in 1..{N}")
    theta = math.asin(math.sqrt(assumed_solutions / N))
    k = grover_iterations(N, assumed_solutions)
    return AttackPlan(
        spec=spec,
        observed_bits=observed,
        n=n,
        m=m,
        k=k,
        theta=theta,
        predicted_success=math.sin((2 * k + 1) * theta) ** 2,
        assumed_solutions=assumed_solutions,
        qubit_cap=qubit_cap,
    )


def walk_circuit(plan: AttackPlan, hadamard: bool = True) -> Circuit:
    spec = plan.spec
    gates = [HadamardGate(("domain", "ancilla"))] if hadamard else []
    for i, b in enumerate(plan.observed_bits, start=1):
        gates.append(PredicateFlipGate(tuple(spec.marked(b)), i, label=f"delta_{b}"))
        gates.append(PermutationGate(spec.permutation))
    return Circuit(gates)


@dataclass(frozen=True)
class TraceEntry:
    domain: int
    bits: str
    ancilla: str
    amplitude: complex


@dataclass(frozen=True)
class Snapshot:
    label: str
    gate: str
    entries: tuple[TraceEntry, ...]

    def find(self, domain: int, bits: str) -> Optional[TraceEntry]:
        for e in self.entries:
            if e.domain == domain and e.bits == bits:
                return e
        return None


def _ancilla_factor(amps: np.ndarray) -> tuple[str, complex]:
    """Name the ancilla state if it factors out as one of |0>, |1>, |+>, |->."""
    a0, a1 = amps[..., 0], amps[..., 1]
    if np.all(np.abs(a1) < AMP_EPS):
        return "0", 1
    if np.all(np.abs(a0) < AMP_EPS):
        return "1", 1
    if np.allclose(a0, -a1, atol=AMP_EPS):
        return "-", math.sqrt(2)
    if np.allclose(a0, a1, atol=AMP_EPS):
        return "+", math.sqrt(2)
    return "", 1


def snapshot(label: str, gate: str, s: StateVector) -> Snapshot:
    """Nonzero entries sorted by (domain, bits), ancilla factored out when possible."""
    m = s.layout.bit_qubits
    amps = s.amplitudes
    anc, scale = _ancilla_factor(amps)
    entries = []
    for x, y in zip(*np.nonzero(np.abs(amps).max(axis=2) > AMP_EPS)):
        bits = format(int(y), f"0{m}b")
        if anc in ("0", "-", "+"):
            entries.append(TraceEntry(int(x), bits, anc, complex(amps[x, y, 0] * scale)))
        elif anc == "1":
            entries.append(TraceEntry(int(x), bits, anc, complex(amps[x, y, 1])))
        else:
            for a in (0, 1):
                if abs(amps[x, y, a]) > AMP_EPS:
                    entries.append(TraceEntry(int(x), bits, str(a), complex(amps[x, y, a])))
    return Snapshot(label, gate, tuple(entries))


@dataclass
class AttackTrace:
    """Labeled snapshots psi0, psi1, ... and the candidate sets they imply.

    ``marked_values[i - 1]`` are the domain values at ``psi(2i)`` whose bit
    qubits ``1..i`` are all set. ``candidates[i - 1]`` pulls them back through
    ``i - 1`` inverse permutations, giving candidates for the first internal
    state ``x_1``.
    """

    spec: GeneratorSpec
    m: int
    snapshots: list[Snapshot] = field(default_factory=list)
    marked_values: list[frozenset] = field(default_factory=list)
    candidates: list[frozenset] = field(default_factory=list)

    def record(self, gate: str, s: StateVector):
        label = f"psi{len(self.snapshots)}"
        self.snapshots.append(snapshot(label, gate, s))

    def __getitem__(self, label: str) -> Snapshot:
        for snap in self.snapshots:
            if snap.label == label:
                return snap
        raise KeyError(label)

    def finalize_candidates(self, states: Sequence[StateVector]):
        """Compute X-hat sets from the full states at psi2, psi4, ..."""
        self.marked_values, self.candidates = [], []
        for i in range(1, self.m + 1):
            amps = states[2 * i].amplitudes
            prefix = (1 << i) - 1
            ys = [y for y in range(1 << self.m) if (y >> (self.m - i)) == prefix]
            weight = np.abs(amps[:, ys, :]).max(axis=(1, 2))
            raw = frozenset(int(x) for x in np.flatnonzero(weight > AMP_EPS))
            self.marked_values.append(raw)
            self.candidates.append(frozenset(pull_back(self.spec, x, i - 1) for x in raw))


def candidate_set(trace: AttackTrace, i: int) -> frozenset:
    """First-state candidates consistent with the first ``i`` observed bits."""
    if not 1 <= i <= trace.m:
        raise ParameterError(f"step {i} outside 1..{trace.m}")
    return trace.candidates[i - 1]


def marked_values(trace: AttackTrace, i: int) -> frozenset:
    """Domain-register values carrying ``1..1`` in qubits ``1..i`` at ``psi(2i)``."""
    if not 1 <= i <= trace.m:
        raise ParameterError(f"step {i} outside 1..{trace.m}")
    return trace.marked_values[i - 1]


def run_walk(plan: AttackPlan) -> tuple[StateVector, AttackTrace]:
    circuit = walk_circuit(plan)
    state = init_state(plan.layout)
    trace = AttackTrace(plan.spec, plan.m)
    states = [state]
    trace.record("init", state)

    def observe(gate, s):
        states.append(s)
        trace.record(gate.label, s)

    state = circuit.run(state, observe)
    trace.finalize_candidates(states)
    return state, trace


def amplify(state: StateVector, plan: AttackPlan) -> StateVector:
    return grover_iterate(state, walk_circuit(plan), plan.good_pattern, plan.k)


def pull_back(spec: GeneratorSpec, x: int, steps: int) -> int:
    inv = spec.inverse_permutation
    for _ in range(steps):
        x = inv[x]
    return x


def consistent_seeds_bruteforce(spec: GeneratorSpec, bits) -> frozenset:
    """Every ``x_1`` in the domain whose orbit emits ``bits``."""
    observed = parse_bits(bits)
    found = set()
    for x1 in spec.domain:
        x = x1
        for i, b in enumerate(observed):
            if spec.predicate[x] != b:
                break
            if i + 1 < len(observed):
                x = spec.permutation[x]
        else:
            found.add(x1)
    return frozenset(found)


@dataclass(frozen=True)
class RecoveredStates:
    """Generator states around the representative, keyed by step offset."""

    representative: int
    chain: tuple[tuple[int, int, int], ...]  # (offset, state, bit), chronological

    @property
    def backward(self) -> list[int]:
        """Earlier states, nearest first."""
        return [s for off, s, _ in reversed(self.chain) if off < 0]

    @property
    def forward(self) -> list[int]:
        return [s for off, s, _ in self.chain if off > 0]

    def window(self, start: int, stop: int) -> tuple[list[int], list[int]]:
        """States and bits for offsets ``start <= offset < stop``."""
        sel = [(s, b) for off, s, b in self.chain if start <= off < stop]
        return [s for s, _ in sel], [b for _, b in sel]


def recover_internal_states(spec: GeneratorSpec, representative: int,
                            back: int, forward: int) -> RecoveredStates:
    if not spec.in_domain(representative):
        raise ParameterError(f"{representative} is not in the generator domain")
    if back < 0 or forward < 0:
        raise ParameterError("step counts must be non-negative")
    inv = spec.inverse_permutation
    chain = [(0, representative, spec.predicate[representative])]
    x = representative
    for off in range(1, back + 1):
        x = inv[x]
        chain.insert(0, (-off, x, spec.predicate[x]))
    x = representative
    for off in range(1, forward + 1):
        x = spec.permutation[x]
        chain.append((off, x, spec.predicate[x]))
    return RecoveredStates(representative, tuple(chain))


@dataclass(frozen=True)
class AttackReport:
    plan: AttackPlan
    distribution: dict[int, float]
    top_outcome: int
    top_probability: float
    sampled_outcome: int
    classical_consistent_seeds: frozenset
    recovered_states: RecoveredStates
    agreement: bool
    trace: AttackTrace
    final_state: StateVector

    @property
    def implied_first_state(self) -> int:
        """Top outcome walked ``m`` steps back: the implied ``x_1``."""
        return pull_back(self.plan.spec, self.top_outcome, self.plan.m)

    def replayed_bits(self) -> list[int]:
        _, bits = self.recovered_states.window(-self.plan.m, 0)
        return bits


def execute_attack(spec: GeneratorSpec, bits, rng_seed: int = 0, *,
                   assumed_solutions: int = 1, back: Optional[int] = None,
                   forward: Optional[int] = None,
                   qubit_cap: int = DEFAULT_QUBIT_CAP) -> AttackReport:
    plan = plan_attack(spec, bits, assumed_solutions, qubit_cap)
    state, trace = run_walk(plan)
    final = amplify(state, plan)
    trace.record(f"G^{plan.k}", final)

    dist = measure_register_distribution(final, "domain")
    # ties go to the smallest outcome
    top = min(dist, key=lambda x: (-round(dist[x], 12), x))
    sampled = sample_measurement(final, "domain", rng_seed)
    seeds = consistent_seeds_bruteforce(spec, plan.observed_bits)

    # padding outcomes are not generator states; recover only from real ones
    if spec.in_domain(top):
        recovered = recover_internal_states(
            spec, top, plan.m if back is None else back, plan.m if forward is None else forward)
    else:
        recovered = RecoveredStates(top, ())
    agree = (bool(seeds) and spec.in_domain(top)
             and pull_back(spec, top, plan.m) in seeds)
    return AttackReport(
        plan=plan,
        distribution=dist,
        top_outcome=top,
        top_probability=dist[top],
        sampled_outcome=sampled,
        classical_consistent_seeds=seeds,
        recovered_states=recovered,
        agreement=agree,
        trace=trace,
        final_state=final,
    )
