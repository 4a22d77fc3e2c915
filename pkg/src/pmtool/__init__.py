"""Process matrices, CJ operators, the causal game and the single-party
reduction theorem, over dense complex linear algebra."""

from .linalg import DimensionPair
from .channels import CJOperator, Instrument, KrausFamily
from .process import PartySpec, ProcessMatrix, ValidityReport
from .reduction import ReductionReport

__all__ = [
    "CJOperator",
    "DimensionPair",
    "Instrument",
    "KrausFamily",
    "PartySpec",
    "ProcessMatrix",
    "ReductionReport",
    "ValidityReport",
]

__version__ = "0.1.0"
