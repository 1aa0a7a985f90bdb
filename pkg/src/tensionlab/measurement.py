"""Projective measurement on pure states.

Outcomes follow the projection and probability postulates: measuring an
observable picks an eigenspace with probability ``<psi|P|psi>`` and leaves
the normalized projection ``P|psi>`` behind.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, NormalizationError, ZeroProbabilityError
from .linalg import Observable, commutator, dagger, require_unitary

NORM_TOL = 1e-10
ZERO_PROB = 1e-12
PHASE_TOL = 1e-10


def canonical_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    idx = np.flatnonzero(np.abs(amplitudes) > PHASE_TOL)
    if idx.size == 0:
        return amplitudes
    a = amplitudes[idx[0]]
    return amplitudes * (np.conj(a) / abs(a))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state in ``C^dim``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if a.size < 1 or not np.all(np.isfinite(a)):
            raise NormalizationError("state needs at least one finite amplitude")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"state norm is {norm:.12g}, expected 1")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex], canonical: bool = False) -> "StateVector":
        a = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(a)
        if norm == 0:
            raise NormalizationError("cannot normalize the zero vector")
        a = a / norm
        return cls(canonical_phase(a) if canonical else a)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, _amps(other)))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def same_ray(self, other: "StateVector", tol: float = 1e-10) -> bool:
        return abs(1.0 - abs(self.overlap(other))) <= tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


StateLike = Union[StateVector, Sequence[complex], np.ndarray]


def as_state(psi: StateLike) -> StateVector:
    return psi if isinstance(psi, StateVector) else StateVector(psi)


def _amps(psi: StateLike) -> np.ndarray:
    return as_state(psi).amplitudes


def _check_dims(psi: np.ndarray, *ops: Union[Observable, np.ndarray]) -> None:
    for op in ops:
        d = op.dim if isinstance(op, Observable) else op.shape[0]
        if d != psi.size:
            raise DimensionError(f"state of dim {psi.size} vs operator of dim {d}")


@dataclass(frozen=True, eq=False)
class Outcome:
    eigenvalue: float
    probability: float
    post_state: Optional[StateVector]


class OutcomeDistribution(tuple):
    """Tuple of :class:`Outcome`, one per eigenvalue, in ascending order."""

    def probability(self, value: float, tol: float = 1e-9) -> float:
        for o in self:
            if abs(o.eigenvalue - value) <= tol:
                return o.probability
        return 0.0

    def mean(self) -> float:
        return float(sum(o.eigenvalue * o.probability for o in self))


def born_distribution(psi: StateLike, obs: Observable) -> OutcomeDistribution:
    a = _amps(psi)
    _check_dims(a, obs)
    outcomes = []
    for lam, p, basis in zip(obs.eigenvalues, obs.projectors, obs.bases):
        # |B^dagger psi|^2 is nonnegative by construction, unlike <psi|P|psi>
        coeffs = dagger(basis) @ a
        prob = float(np.real(np.vdot(coeffs, coeffs)))
        post = None
        if prob > ZERO_PROB:
            post = StateVector(canonical_phase((basis @ coeffs) / np.sqrt(prob)))
        outcomes.append(Outcome(float(lam), prob, post))
    return OutcomeDistribution(outcomes)


def project(psi: StateLike, obs: Observable, value: float) -> StateVector:
    """Collapse ``psi`` onto the eigenspace of ``value``."""
    a = _amps(psi)
    _check_dims(a, obs)
    basis = obs.bases[obs.index_of(value)]
    coeffs = dagger(basis) @ a
    prob = float(np.real(np.vdot(coeffs, coeffs)))
    if prob <= ZERO_PROB:
        raise ZeroProbabilityError(f"outcome {value!r} has probability {prob:.3g}")
    return StateVector(canonical_phase((basis @ coeffs) / np.sqrt(prob)))


def expectation(psi: StateLike, obs: Union[Observable, np.ndarray]) -> float:
    a = _amps(psi)
    m = obs.matrix if isinstance(obs, Observable) else np.asarray(obs, dtype=complex)
    _check_dims(a, m)
    val = np.vdot(a, m @ a)
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(val.imag) > 1e-10 * scale:
        raise ValueError(f"expectation has imaginary part {val.imag:.3g}; operator not Hermitian?")
    return float(val.real)


def std_dev(psi: StateLike, obs: Observable) -> float:
    a = _amps(psi)
    _check_dims(a, obs)
    oa = obs.matrix @ a
    mean = float(np.real(np.vdot(a, oa)))
    var = float(np.real(np.vdot(oa, oa))) - mean * mean
    if var < 0:
        if var < -1e-12 * max(1.0, mean * mean):
            raise ArithmeticError(f"negative variance {var:.3g}")
        var = 0.0
    return float(np.sqrt(var))


def robertson_sides(psi: StateLike, a_obs: Observable, b_obs: Observable) -> tuple[float, float]:
    """Return ``(sigma_A sigma_B, |<[A, B]>| / 2)``."""
    a = _amps(psi)
    _check_dims(a, a_obs, b_obs)
    lhs = std_dev(a, a_obs) * std_dev(a, b_obs)
    c = commutator(a_obs.matrix, b_obs.matrix)
    rhs = abs(np.vdot(a, c @ a)) / 2.0
    return lhs, float(rhs)


def unitary_evolve(psi: StateLike, u: np.ndarray) -> StateVector:
    a = _amps(psi)
    u = require_unitary(u)
    _check_dims(a, u)
    out = u @ a
    return StateVector(out / np.linalg.norm(out))


@dataclass(frozen=True, eq=False)
class BranchPath:
    outcomes: tuple[float, ...]
    probability: float
    final_state: StateVector


def _normalize_sequence(sequence) -> list[tuple[Observable, Optional[np.ndarray]]]:
    steps = []
    for item in sequence:
        if isinstance(item, Observable):
            steps.append((item, None))
        else:
            obs, u = item
            steps.append((obs, None if u is None else require_unitary(u)))
    if not steps:
        raise ValueError("measurement sequence is empty")
    return steps


def sequential_paths(psi: StateLike, sequence) -> list[BranchPath]:
    """Enumerate every outcome path of a measurement sequence.

    ``sequence`` holds observables or ``(observable, unitary)`` pairs; the
    unitary (if any) is applied just before its measurement.  Paths whose
    cumulative probability falls to ``1e-12`` or below are dropped.
    """
    start = as_state(psi)
    steps = _normalize_sequence(sequence)
    for obs, u in steps:
        _check_dims(start.amplitudes, obs)
        if u is not None:
            _check_dims(start.amplitudes, u)

    frontier = [((), 1.0, start)]
    for obs, u in steps:
        nxt = []
        for outcomes, prob, state in frontier:
            if u is not None:
                state = unitary_evolve(state, u)
            for o in born_distribution(state, obs):
                p = prob * o.probability
                if p > ZERO_PROB:
                    nxt.append((outcomes + (o.eigenvalue,), p, o.post_state))
        frontier = nxt
    return [BranchPath(o, p, s) for o, p, s in frontier]


def sample_path(psi: StateLike, sequence, rng: np.random.Generator) -> BranchPath:
    """Draw one stochastic trajectory through ``sequence`` using ``rng``."""
    state = as_state(psi)
    steps = _normalize_sequence(sequence)
    outcomes, prob = [], 1.0
    for obs, u in steps:
        if u is not None:
            state = unitary_evolve(state, u)
        dist = [o for o in born_distribution(state, obs) if o.post_state is not None]
        weights = np.array([o.probability for o in dist])
        pick = dist[rng.choice(len(dist), p=weights / weights.sum())]
        outcomes.append(pick.eigenvalue)
        prob *= pick.probability
        state = pick.post_state
    return BranchPath(tuple(outcomes), prob, state)


def path_correlator(paths: Sequence[BranchPath]) -> float:
    """Expected product of all outcomes along each path."""
    return float(sum(p.probability * np.prod(p.outcomes) for p in paths))
