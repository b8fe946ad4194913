"""Uniform description of a Blum-Micali generator over an integer encoding."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np


class ParameterError(ValueError):
    """Invalid generator, attack or gate parameter."""


class ConstructionError(ValueError):
    """A generator spec could not be built from the given parameters."""


@dataclass(frozen=True)
class GeneratorSpec:
    """A finite Blum-Micali instance.

    ``domain`` holds the encodings of the true internal states. Every other
    index in ``[0, 2**n_bits)`` is padding: a fixed point of ``permutation``
    with predicate 0.
    """

    name: str
    n_bits: int
    domain: tuple[int, ...]
    permutation: tuple[int, ...]
    predicate: tuple[int, ...]
    params: Mapping[str, Any] = field(default_factory=dict)
    labels: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        size = 1 << self.n_bits
        if len(self.permutation) != size or len(self.predicate) != size:
            raise ConstructionError(
                f"tables must have length 2**{self.n_bits} = {size}")
        if sorted(self.permutation) != list(range(size)):
            raise ConstructionError("permutation table is not a bijection")
        dom = set(self.domain)
        for x in range(size):
            if x not in dom:
                if self.permutation[x] != x:
                    raise ConstructionError(f"padding index {x} is not a fixed point")
                if self.predicate[x]:
                    raise ConstructionError(f"padding index {x} has predicate 1")
            if self.predicate[x] not in (0, 1):
                raise ConstructionError(f"predicate({x}) is not a bit")
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))

    @property
    def size(self) -> int:
        return 1 << self.n_bits

    def in_domain(self, x: int) -> bool:
        return x in self._domain_set

    @cached_property
    def _domain_set(self) -> frozenset:
        return frozenset(self.domain)

    @cached_property
    def inverse_permutation(self) -> tuple[int, ...]:
        inv = [0] * self.size
        for x, y in enumerate(self.permutation):
            inv[y] = x
        return tuple(inv)

    def step(self, x: int) -> int:
        return self.permutation[x]

    def marked(self, bit: int) -> np.ndarray:
        """Boolean mask of domain states whose predicate equals ``bit``."""
        mask = np.zeros(self.size, dtype=bool)
        for x in self.domain:
            mask[x] = self.predicate[x] == bit
        return mask

    def label(self, x: int) -> str:
        return self.labels.get(x, str(x))


@dataclass(frozen=True)
class GeneratorState:
    current: int
    history: tuple[tuple[int, int], ...] = ()


def generate_bits(spec: GeneratorSpec, seed: int, m: int) -> tuple[list[int], list[int]]:
    """Run the generator ``m`` steps from ``seed``.

    Returns ``(bits, states)`` where ``states[i]`` is the state after ``i + 1``
    applications of the permutation and ``bits[i]`` is its predicate.
    """
    if not spec.in_domain(seed):
        raise ParameterError(f"seed {seed} is not in the generator domain")
    if m < 0:
        raise ParameterError("step count must be non-negative")
    bits, states = [], []
    x = seed
    for _ in range(m):
        x = spec.permutation[x]
        states.append(x)
        bits.append(spec.predicate[x])
    return bits, states


def run_generator(spec: GeneratorSpec, seed: int, m: int) -> GeneratorState:
    bits, states = generate_bits(spec, seed, m)
    return GeneratorState(current=states[-1] if states else seed,
                          history=tuple(zip(states, bits)))
