"""Incompatibility between observables and when it actually bites.

``tension_degree`` is the spectral norm of the commutator.  Shared
eigenvectors of a noncommuting pair give states on which sequential
measurement behaves classically; ``tension_free_check`` tests exactly that
by enumerating measurement branches.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .linalg import (
    Observable,
    commutator,
    dagger,
    eig_hermitian,
    require_unitary,
    spectral_norm,
    transform_observable,
)
from .measurement import StateLike, StateVector, as_state, canonical_phase, sequential_paths

COMMON_TOL = 1e-8


def _same_dim(a: Observable, b: Observable) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"observables of dims {a.dim} and {b.dim}")


def tension_degree(a: Observable, b: Observable) -> float:
    _same_dim(a, b)
    return spectral_norm(commutator(a.matrix, b.matrix))


def common_eigenvectors(a: Observable, b: Observable, tol: float = COMMON_TOL) -> list[StateVector]:
    """Orthonormal simultaneous eigenvectors of ``a`` and ``b``.

    For each pair of eigenprojectors ``P`` (of ``a``) and ``Q`` (of ``b``)
    the intersection of their ranges is the eigenvalue-1 eigenspace of
    ``P Q P``; intersections for different pairs are mutually orthogonal.
    """
    _same_dim(a, b)
    out: list[StateVector] = []
    for p in a.projectors:
        for q in b.projectors:
            w, v = eig_hermitian(p @ q @ p)
            for k in np.flatnonzero(np.abs(w - 1.0) <= tol):
                vec = canonical_phase(v[:, k] / np.linalg.norm(v[:, k]))
                out.append(StateVector(vec))
    return out


def tension_free_check(psi: StateLike, a: Observable, b: Observable, tol: float = 1e-9) -> bool:
    """Does measuring ``b`` right after ``a`` leave every post-``a`` state intact?"""
    _same_dim(a, b)
    psi = as_state(psi)
    first = {path.outcomes: path for path in sequential_paths(psi, [a])}
    for path in sequential_paths(psi, [a, b]):
        before = first[path.outcomes[:1]]
        if abs(path.probability - before.probability) > tol:
            return False
        if not path.final_state.same_ray(before.final_state, tol):
            return False
    return True


def heisenberg_picture(obs: Observable, u: np.ndarray) -> Observable:
    """``U^dagger O U`` with the spectrum carried over unchanged."""
    u = require_unitary(u)
    if u.shape[0] != obs.dim:
        raise DimensionError(f"unitary of dim {u.shape[0]} vs observable of dim {obs.dim}")
    return transform_observable(obs, u)


@dataclass(frozen=True, eq=False)
class TensionReport:
    degree: float
    common_eigenvectors: list[StateVector] = field(default_factory=list)
    tension_free_states: list[StateVector] = field(default_factory=list)

    @property
    def commuting(self) -> bool:
        return self.degree <= COMMON_TOL


def tension_report(a: Observable, b: Observable, tol: float = COMMON_TOL) -> TensionReport:
    common = common_eigenvectors(a, b, tol)
    free = [v for v in common if tension_free_check(v, a, b)]
    return TensionReport(tension_degree(a, b), common, free)


def eigenbases_differ(a: Observable, b: Observable, tol: float = 1e-8) -> bool:
    """True unless every eigenspace of ``a`` is a sum of eigenspaces of ``b``.

    Equivalent to ``[a, b] != 0`` and used as an independent check on
    commutator-based witnesses.
    """
    _same_dim(a, b)
    for p in a.projectors:
        for q in b.projectors:
            overlap = p @ q
            if np.max(np.abs(overlap - dagger(overlap))) > tol:
                return True
    return False
