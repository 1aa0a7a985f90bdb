"""Bipartite states: composition, Schmidt decomposition and the state-induced
correspondence between the two factors of a maximally entangled state."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionError, SchmidtRankError
from .linalg import (
    Observable,
    dagger,
    eig_hermitian,
    observable_from_eigenbasis,
    partial_trace,
    spectral_decompose,
)
from .measurement import StateLike, StateVector, _amps, _check_dims, canonical_phase

SCHMIDT_TOL = 1e-9
# Schmidt terms below this weight are dropped from the returned bases.
_KEEP = 1e-10


@dataclass(frozen=True)
class BipartiteShape:
    dA: int
    dB: int

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise ValueError("factor dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def check(self, dim: int) -> None:
        if dim != self.dim:
            raise DimensionError(f"dimension {dim} does not factor as {self.dA}x{self.dB}")


QUBITS = BipartiteShape(2, 2)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    rank: int

    def reconstruct(self) -> np.ndarray:
        out = 0
        for c, a, b in zip(self.coefficients, self.left_basis.T, self.right_basis.T):
            out = out + c * np.kron(a, b)
        return np.asarray(out)


def compose(psi_a: StateLike, psi_b: StateLike) -> StateVector:
    out = np.kron(_amps(psi_a), _amps(psi_b))
    return StateVector(out / np.linalg.norm(out))


def schmidt(psi: StateLike, shape: BipartiteShape, tol: float = SCHMIDT_TOL) -> SchmidtDecomposition:
    """Schmidt decomposition from the reduced density matrix of side A.

    The left vectors are eigenvectors ``a_i`` of ``rho_A``.  Each coefficient
    is ``sqrt(<a_i|rho_A|a_i>)`` evaluated as the norm of the partial inner
    product ``(<a_i| x I) psi``, which avoids the square root of round-off
    that the eigenvalue itself would carry; the right vector is that partial
    product divided by its coefficient.
    """
    a = _amps(psi)
    shape.check(a.size)
    rho_a = partial_trace(np.outer(a, np.conj(a)), (shape.dA, shape.dB), keep="A")
    _, vecs = eig_hermitian(rho_a)
    m = a.reshape(shape.dA, shape.dB)
    partners = m.T @ np.conj(vecs)
    coeffs = np.linalg.norm(partners, axis=0)
    order = np.argsort(coeffs, kind="stable")[::-1]
    coeffs, vecs, partners = coeffs[order], vecs[:, order], partners[:, order]
    keep = coeffs > _KEEP
    left = vecs[:, keep]
    right = partners[:, keep] / coeffs[keep]
    rank = int(np.sum(coeffs > tol))
    return SchmidtDecomposition(coeffs[keep], left, right, rank)


def is_entangled(psi: StateLike, shape: BipartiteShape, tol: float = SCHMIDT_TOL) -> bool:
    return schmidt(psi, shape, tol).rank >= 2


def singlet() -> StateVector:
    """``(|01> - |10>) / sqrt(2)`` with ``|0> = up``."""
    return StateVector(np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2))


def path_spin_state() -> StateVector:
    """Spin (first factor) entangled with path (second factor): up/upper + down/lower."""
    return StateVector(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))


def lift(obs: Observable, side: Literal["A", "B"], shape: BipartiteShape) -> Observable:
    """Embed a single-factor observable as ``O x I`` or ``I x O``."""
    if side == "A":
        if obs.dim != shape.dA:
            raise DimensionError(f"side-A observable must have dim {shape.dA}")
        m = np.kron(obs.matrix, np.eye(shape.dB))
        bases = [np.kron(b, np.eye(shape.dB)) for b in obs.bases]
    elif side == "B":
        if obs.dim != shape.dB:
            raise DimensionError(f"side-B observable must have dim {shape.dB}")
        m = np.kron(np.eye(shape.dA), obs.matrix)
        bases = [np.kron(np.eye(shape.dA), b) for b in obs.bases]
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return Observable(
        matrix=m,
        eigenvalues=obs.eigenvalues.copy(),
        projectors=tuple(b @ dagger(b) for b in bases),
        bases=tuple(bases),
    )


def choi_induced(psi: StateLike, shape: BipartiteShape, obs_a: Observable) -> Observable:
    """Side-B observable singled out by ``obs_a`` through the state ``psi``.

    ``psi`` is expanded over an eigenbasis ``{a_k}`` of ``obs_a``:
    ``psi = sum_k a_k x b_k``.  The partner vectors ``b_k`` are orthonormalized
    symmetrically (``B (B^dagger B)^(-1/2)``, which does not depend on the basis
    chosen inside degenerate eigenspaces) and carry the eigenvalue of their
    ``a_k``.  Requires full Schmidt rank with ``dA == dB``.
    """
    a = _amps(psi)
    shape.check(a.size)
    if shape.dA != shape.dB:
        raise SchmidtRankError("state-induced correspondence needs dA == dB")
    if obs_a.dim != shape.dA:
        raise DimensionError(f"side-A observable must have dim {shape.dA}")
    if schmidt(a, shape).rank != shape.dA:
        raise SchmidtRankError("state does not have maximal Schmidt rank")

    m = a.reshape(shape.dA, shape.dB)
    values, partners = [], []
    for lam, basis in zip(obs_a.eigenvalues, obs_a.bases):
        for k in range(basis.shape[1]):
            partners.append(m.T @ np.conj(basis[:, k]))
            values.append(lam)
    b = np.column_stack(partners)
    gw, gv = eig_hermitian(dagger(b) @ b)
    inv_sqrt = (gv / np.sqrt(gw)) @ dagger(gv)
    return observable_from_eigenbasis(values, b @ inv_sqrt)


def preparation_tension(psi: StateLike, obs: Observable, tol: float = 1e-9) -> bool:
    """True when ``psi`` is not an eigenvector of ``obs``."""
    a = _amps(psi)
    _check_dims(a, obs)
    oa = obs.matrix @ a
    residual = oa - np.vdot(a, oa) * a
    return bool(np.linalg.norm(residual) > tol)


def projector_observable(psi: StateLike) -> Observable:
    """``|psi><psi|`` as an observable (eigenvalues 0 and 1)."""
    a = canonical_phase(_amps(psi))
    return spectral_decompose(np.outer(a, np.conj(a)))
