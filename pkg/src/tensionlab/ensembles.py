"""Random states and operators for property checks and demos.

Every sampler takes an explicit ``numpy.random.Generator``.
"""
from __future__ import annotations

import numpy as np

from .linalg import dagger


def random_state_amplitudes(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_state(dim: int, rng: np.random.Generator):
    from .measurement import StateVector

    return StateVector(random_state_amplitudes(dim, rng))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (a + dagger(a))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with the diagonal phase fix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_special_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(dim, rng)
    return u / np.linalg.det(u) ** (1.0 / dim)


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)
