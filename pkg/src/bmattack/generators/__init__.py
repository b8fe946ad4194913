from .base import (
    ConstructionError,
    GeneratorSpec,
    GeneratorState,
    ParameterError,
    generate_bits,
    run_generator,
)
from .bbs import BbsParams, bbs_spec, hardcore_bit, is_prime, quadratic_residues, rabin_step
from .ec import (
    INFINITY,
    Affine,
    CurveParams,
    EcPoint,
    ec_add,
    ec_neg,
    ec_scalar_mul,
    multiples,
    point_order,
)
from .kaliski import (
    REFERENCE_KALISKI_POINTS,
    default_generator,
    kaliski_lambda,
    kaliski_phi,
    kaliski_spec,
    point_encoding,
)


def reference_bbs() -> GeneratorSpec:
    """BBS with M = 21 = 3 * 7 and the least significant bit as output."""
    return bbs_spec(BbsParams(21, 5, factors=(3, 7)))


def reference_kaliski() -> GeneratorSpec:
    """Kaliski over y^2 = x^3 + 1 mod 5 with Q = (2, 2)."""
    return kaliski_spec(CurveParams(5, 1), Affine(2, 2))


__all__ = [
    "Affine", "BbsParams", "ConstructionError", "CurveParams", "EcPoint",
    "GeneratorSpec", "GeneratorState", "INFINITY", "REFERENCE_KALISKI_POINTS",
    "ParameterError", "bbs_spec", "default_generator", "ec_add", "ec_neg",
    "ec_scalar_mul", "generate_bits", "hardcore_bit", "is_prime",
    "kaliski_lambda", "kaliski_phi", "kaliski_spec", "multiples",
    "reference_bbs", "reference_kaliski", "point_encoding", "point_order",
    "quadratic_residues", "rabin_step", "run_generator",
]
