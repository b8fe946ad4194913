"""Group law on y^2 = x^3 + c over a small prime field."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .base import ParameterError
from .bbs import is_prime


class Affine(NamedTuple):
    x: int
    y: int

    def __str__(self):
        return f"({self.x},{self.y})"


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "O"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

EcPoint = Union[Affine, _Infinity]


@dataclass(frozen=True)
class CurveParams:
    p: int
    c: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p % 3 != 2:
            raise ParameterError(f"p={self.p} must be a prime congruent to 2 mod 3")
        if not 0 <= self.c < self.p:
            raise ParameterError(f"c={self.c} must lie in [0, {self.p})")

    def contains(self, P: EcPoint) -> bool:
        if P is INFINITY:
            return True
        x, y = P
        p = self.p
        return 0 <= x < p and 0 <= y < p and (y * y - x ** 3 - self.c) % p == 0

    def points(self) -> list[EcPoint]:
        """Affine points in lexicographic order, then the point at infinity."""
        p = self.p
        pts: list[EcPoint] = [Affine(x, y) for x in range(p) for y in range(p)
                              if (y * y - x ** 3 - self.c) % p == 0]
        pts.append(INFINITY)
        return pts


def _check(P: EcPoint, curve: CurveParams):
    if not curve.contains(P):
        raise ParameterError(f"{P} is not on y^2 = x^3 + {curve.c} mod {curve.p}")


def ec_add(P: EcPoint, R: EcPoint, curve: CurveParams) -> EcPoint:
    _check(P, curve)
    _check(R, curve)
    if P is INFINITY:
        return R
    if R is INFINITY:
        return P
    p = curve.p
    if P.x == R.x:
        if (P.y + R.y) % p == 0:
            return INFINITY
        # doubling, a = 0
        slope = 3 * P.x * P.x * pow(2 * P.y, -1, p) % p
    else:
        slope = (R.y - P.y) * pow(R.x - P.x, -1, p) % p
    x3 = (slope * slope - P.x - R.x) % p
    y3 = (slope * (P.x - x3) - P.y) % p
    return Affine(x3, y3)


def ec_neg(P: EcPoint, curve: CurveParams) -> EcPoint:
    _check(P, curve)
    if P is INFINITY:
        return P
    return Affine(P.x, -P.y % curve.p)


def ec_scalar_mul(k: int, P: EcPoint, curve: CurveParams) -> EcPoint:
    """Double-and-add; ``0 * P`` is the point at infinity."""
    if k < 0:
        raise ParameterError("scalar must be non-negative")
    _check(P, curve)
    acc: EcPoint = INFINITY
    addend = P
    while k:
        if k & 1:
            acc = ec_add(acc, addend, curve)
        addend = ec_add(addend, addend, curve)
        k >>= 1
    return acc


def point_order(P: EcPoint, curve: CurveParams) -> int:
    order, acc = 1, P
    while acc is not INFINITY:
        acc = ec_add(acc, P, curve)
        order += 1
    return order


def multiples(Q: EcPoint, curve: CurveParams) -> list[EcPoint]:
    """``[Q, 2Q, ...]`` up to and including the first return to infinity."""
    out = [Q]
    while out[-1] is not INFINITY:
        out.append(ec_add(out[-1], Q, curve))
    return out
