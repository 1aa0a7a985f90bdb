"""Finite-dimensional quantum measurement, tension and contextuality toolkit."""
from .errors import (
    ConvergenceError,
    DocumentError,
    LPError,
    NumericalError,
    TensionLabError,
)
from .linalg import Observable, commutator, eig_hermitian, spectral_decompose, tensor_product
from .measurement import StateVector, born_distribution, expectation, project, sequential_paths
from .tension import tension_degree, tension_free_check

__all__ = [
    "ConvergenceError",
    "DocumentError",
    "LPError",
    "NumericalError",
    "Observable",
    "StateVector",
    "TensionLabError",
    "born_distribution",
    "commutator",
    "eig_hermitian",
    "expectation",
    "project",
    "sequential_paths",
    "spectral_decompose",
    "tension_degree",
    "tension_free_check",
    "tensor_product",
]
