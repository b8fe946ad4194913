"""Blum-Blum-Shub: squaring modulo a Blum integer, one state bit as output."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .base import ConstructionError, GeneratorSpec, ParameterError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class BbsParams:
    """Public BBS parameters.

    ``j`` counts from the most significant of the ``n`` bits, so ``j == n``
    selects the least significant bit.
    """

    modulus: int
    j: int
    factors: Optional[tuple[int, int]] = None

    def __post_init__(self):
        M = self.modulus
        if self.factors is not None:
            p, q = self.factors
            if p * q != M:
                raise ParameterError(f"{p} * {q} != {M}")
            for f in (p, q):
                if not is_prime(f) or f % 4 != 3:
                    raise ParameterError(f"factor {f} is not a prime congruent to 3 mod 4")
        elif M < 6 or M % 2 == 0:
            raise ParameterError(f"modulus {M} must be odd and at least 6")
        if not 1 <= self.j <= self.n:
            raise ParameterError(f"bit position j={self.j} outside 1..{self.n}")

    @property
    def n(self) -> int:
        return (self.modulus - 1).bit_length()


def hardcore_bit(x: int, j: int, n: int) -> int:
    """Bit ``j`` of the ``n``-bit representation of ``x``, position 1 = MSB."""
    if not 1 <= j <= n:
        raise ParameterError(f"bit position j={j} outside 1..{n}")
    if not 0 <= x < (1 << n):
        raise ParameterError(f"{x} does not fit in {n} bits")
    return (x >> (n - j)) & 1


def rabin_step(x: int, M: int) -> int:
    if not 0 <= x < M:
        raise ParameterError(f"{x} is not a residue modulo {M}")
    return x * x % M


def quadratic_residues(M: int) -> set[int]:
    """Nonzero squares modulo ``M``.

    Squares of non-units are included: for ``M = 21`` this gives
    ``{1, 4, 7, 9, 15, 16, 18}``.
    """
    if M < 2:
        raise ParameterError("modulus must be at least 2")
    return {x * x % M for x in range(M)} - {0}


def bbs_spec(params: BbsParams) -> GeneratorSpec:
    M, j, n = params.modulus, params.j, params.n
    qr = sorted(quadratic_residues(M))
    size = 1 << n
    perm = list(range(size))
    pred = [0] * size
    seen: dict[int, int] = {}
    for x in qr:
        y = x * x % M
        if y in seen:
            raise ConstructionError(
                f"squaring is not injective on QR_{M}: {seen[y]} and {x} both map to {y}")
        seen[y] = x
        perm[x] = y
        pred[x] = hardcore_bit(x, j, n)
    if set(seen) != set(qr):
        raise ConstructionError(f"squaring does not permute QR_{M}")
    return GeneratorSpec(
        name="bbs",
        n_bits=n,
        domain=tuple(qr),
        permutation=tuple(perm),
        predicate=tuple(pred),
        params={"modulus": M, "j": j},
    )
