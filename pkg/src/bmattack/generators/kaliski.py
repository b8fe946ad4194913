"""Kaliski's elliptic-curve generator: P -> phi(P) * Q, output lambda(P)."""
from __future__ import annotations

from typing import Optional, Sequence

from .base import ConstructionError, GeneratorSpec, ParameterError
from .ec import INFINITY, Affine, CurveParams, EcPoint, ec_scalar_mul, multiples, point_order

# Point listing used by the published p=5, c=1 example: (4,0) is |1>, ..., O is |6>.
REFERENCE_KALISKI_POINTS: dict[tuple[int, int], tuple[EcPoint, ...]] = {
    (5, 1): (Affine(4, 0), Affine(0, 1), Affine(0, 4), Affine(2, 2), Affine(2, 3), INFINITY),
}


def kaliski_phi(P: EcPoint, curve: CurveParams) -> int:
    if P is INFINITY:
        return curve.p
    return P.y


def kaliski_lambda(P: EcPoint, curve: CurveParams) -> int:
    # 2 * phi >= p + 1  <=>  phi >= (p + 1) / 2 without fractions
    return int(2 * kaliski_phi(P, curve) >= curve.p + 1)


def default_generator(curve: CurveParams) -> EcPoint:
    """First affine point, in (x, y) order, whose order is p + 1."""
    for P in curve.points():
        if P is not INFINITY and point_order(P, curve) == curve.p + 1:
            return P
    raise ConstructionError(f"no point of order {curve.p + 1} on the curve")


def point_encoding(curve: CurveParams, Q: EcPoint,
                   points: Optional[Sequence[EcPoint]] = None) -> tuple[EcPoint, ...]:
    """Group elements listed so that ``result[i - 1]`` is encoded as ``i``.

    Without an explicit listing, the published table is used when one exists
    for ``(p, c)``; otherwise elements are listed as ``Q, 2Q, ..., (p+1)Q = O``.
    """
    group = multiples(Q, curve)
    if len(group) != curve.p + 1:
        raise ConstructionError(
            f"{Q} has order {len(group)}, not {curve.p + 1}; it does not generate the group")
    if points is None:
        points = REFERENCE_KALISKI_POINTS.get((curve.p, curve.c), group)
    points = tuple(points)
    if len(points) != len(group) or set(points) != set(group):
        raise ConstructionError("point listing must contain every group element exactly once")
    return points


def kaliski_spec(curve: CurveParams, Q: EcPoint,
                 points: Optional[Sequence[EcPoint]] = None) -> GeneratorSpec:
    if not curve.contains(Q):
        raise ParameterError(f"{Q} is not on the curve")
    points = point_encoding(curve, Q, points)
    code = {P: i + 1 for i, P in enumerate(points)}
    n = len(points).bit_length()
    size = 1 << n
    perm = list(range(size))
    pred = [0] * size
    for P, i in code.items():
        perm[i] = code[ec_scalar_mul(kaliski_phi(P, curve), Q, curve)]
        pred[i] = kaliski_lambda(P, curve)
    return GeneratorSpec(
        name="kaliski",
        n_bits=n,
        domain=tuple(sorted(code.values())),
        permutation=tuple(perm),
        predicate=tuple(pred),
        params={"p": curve.p, "c": curve.c, "Q": str(Q)},
        labels={i: str(P) for P, i in code.items()},
    )
