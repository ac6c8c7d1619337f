"""Exact-arithmetic toolkit for symmetry groups of holomorphic maps
between complex unit balls."""

__version__ = "0.1.0"

from .scalar import (  # noqa: F401
    CycloScalar,
    FloatComplex,
    RadScalar,
    as_scalar,
    configure_floats,
    cyclo_make,
    rad_arith,
    to_float,
)
