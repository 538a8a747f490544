"""Zonal harmonic analysis on the sphere and j-projection bodies of revolution."""

from .errors import (
    ContractError,
    DomainError,
    NumericError,
    ParityError,
    ParseError,
    SingularOperatorError,
    UnsupportedOrderError,
)
from .legendre import LegendreBasis, harmonic_dim, kernel_multiplier, legendre_eval, make_basis
from .zonal import MultiplierOperator, ZonalProfile, apply, compose, expand, invert, synthesize

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "DomainError",
    "NumericError",
    "ParityError",
    "ParseError",
    "SingularOperatorError",
    "UnsupportedOrderError",
    "LegendreBasis",
    "harmonic_dim",
    "kernel_multiplier",
    "legendre_eval",
    "make_basis",
    "MultiplierOperator",
    "ZonalProfile",
    "apply",
    "compose",
    "expand",
    "invert",
    "synthesize",
]
