"""Exact-arithmetic laboratory for sum-product growth of quaternion and
matrix sets: set algebra with multiplicative energy, the dyadic witness
pipeline with its certified inequality, kissing-number ball audits, and the
normalized-matrix verifier suite."""

from sumprod.exactnum import (
    ComplexEnclosure,
    GaussianRational,
    Interval,
    NormEnclosure,
    RMatrix,
    RQuaternion,
    Rational,
    Singular,
    Unresolved,
    ZeroInverse,
    canonical_key,
    matrix_det,
    matrix_inverse,
    op1_norm,
    quat_inverse,
)

__all__ = [
    "ComplexEnclosure",
    "GaussianRational",
    "Interval",
    "NormEnclosure",
    "RMatrix",
    "RQuaternion",
    "Rational",
    "Singular",
    "Unresolved",
    "ZeroInverse",
    "canonical_key",
    "matrix_det",
    "matrix_inverse",
    "op1_norm",
    "quat_inverse",
]
