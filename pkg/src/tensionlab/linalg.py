"""Dense complex operator algebra.

Operators are plain ``numpy`` arrays of shape ``(d, d)``.  The Hermitian
eigensolver is a cyclic complex Jacobi method: every sweep visits all
off-diagonal pairs, grouped round-robin into rounds of disjoint pairs so
that a whole round is applied as one unitary similarity.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    NotHermitianError,
    NotInSpectrumError,
    NotUnitaryError,
)

ArrayLike = Union[np.ndarray, Sequence]

HERMITIAN_TOL = 1e-9
JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
CLUSTER_TOL = 1e-8

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
for _m in (IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z):
    _m.flags.writeable = False


def as_matrix(m: ArrayLike, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a square, finite complex array (a copy is not forced)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m: ArrayLike, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(m)
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def is_unitary(u: ArrayLike, tol: float = 1e-9) -> bool:
    a = as_matrix(u)
    return bool(np.max(np.abs(dagger(a) @ a - np.eye(a.shape[0]))) <= tol)


def require_unitary(u: ArrayLike, tol: float = 1e-9, name: str = "U") -> np.ndarray:
    a = as_matrix(u, name)
    if not is_unitary(a, tol):
        raise NotUnitaryError(f"{name} is not unitary within {tol:g}")
    return a


def _hermitian_scale(a: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(a))))


@functools.lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint (p, q) pairs covering every pair of ``range(n)`` once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def eig_hermitian(
    m: ArrayLike,
    off_tol: float = JACOBI_OFF_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix with cyclic complex Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Hermitian ``(d, d)`` matrix.
    off_tol : float
        Sweeps stop once the Frobenius norm of the off-diagonal part drops
        below ``off_tol * max(1, ||m||_F)``.
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    eigenvalues : ndarray of float, ascending
    eigenvectors : ndarray, the orthonormal eigenvectors as columns
    """
    a = as_matrix(m)
    if not is_hermitian(a, HERMITIAN_TOL * _hermitian_scale(a)):
        raise NotHermitianError("eig_hermitian requires a Hermitian matrix")
    n = a.shape[0]
    # large inputs are scaled down to unit max entry so norms cannot overflow
    scale = max(1.0, float(np.max(np.abs(a))))
    a = 0.5 * (a + dagger(a)) / scale
    v = np.eye(n, dtype=complex)
    threshold = off_tol * max(1.0 / scale, float(np.linalg.norm(a)))
    rounds = _round_robin(n)
    # entries this small are dropped rather than rotated: they cannot matter
    # for convergence and dividing by them can overflow
    negligible = threshold / (n * n)

    def off_norm(x: np.ndarray) -> float:
        return float(np.linalg.norm(x - np.diag(np.diag(x))))

    for _ in range(max_sweeps):
        if off_norm(a) <= threshold:
            break
        for p, q in rounds:
            beta = a[p, q]
            mag = np.abs(beta)
            live = mag > negligible
            if not np.any(live):
                continue
            alpha = a[p, p].real
            gamma = a[q, q].real
            safe = np.where(live, mag, 1.0)
            phase = np.where(live, beta / safe, 1.0)
            theta = (gamma - alpha) / (2.0 * safe)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            g = np.eye(n, dtype=complex)
            g[p, p] = c
            g[p, q] = s
            g[q, p] = -s * np.conj(phase)
            g[q, q] = c * np.conj(phase)
            a = dagger(g) @ a @ g
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ g
        a = 0.5 * (a + dagger(a))
    else:
        if off_norm(a) > threshold:
            raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")

    w = np.real(np.diag(a)) * scale
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian operator together with its spectral decomposition.

    ``eigenvalues`` are strictly increasing; ``projectors[k]`` projects onto
    the eigenspace of ``eigenvalues[k]`` and ``bases[k]`` holds an orthonormal
    basis of that eigenspace as columns.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    projectors: tuple[np.ndarray, ...]
    bases: tuple[np.ndarray, ...]

    def __post_init__(self):
        for arr in (self.matrix, self.eigenvalues, *self.projectors, *self.bases):
            arr.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectrum(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.eigenvalues.tolist(), self.projectors))

    def multiplicities(self) -> list[int]:
        return [b.shape[1] for b in self.bases]

    def projector_for(self, value: float, tol: float = 1e-9) -> np.ndarray:
        return self.projectors[self.index_of(value, tol)]

    def index_of(self, value: float, tol: float = 1e-9) -> int:
        hits = np.flatnonzero(np.abs(self.eigenvalues - value) <= tol * max(1.0, abs(value)))
        if hits.size == 0:
            raise NotInSpectrumError(f"{value!r} is not an eigenvalue of the observable")
        return int(hits[0])

    def check(self, tol: float = 1e-9) -> None:
        """Raise ``AssertionError`` if any structural invariant is violated."""
        d = self.dim
        assert np.all(np.diff(self.eigenvalues) > 0), "eigenvalues not strictly increasing"
        assert np.max(np.abs(self.matrix - dagger(self.matrix))) <= tol
        total = np.zeros((d, d), dtype=complex)
        recon = np.zeros((d, d), dtype=complex)
        for i, (lam, p) in enumerate(zip(self.eigenvalues, self.projectors)):
            assert np.max(np.abs(p - dagger(p))) <= tol, "projector not Hermitian"
            assert np.max(np.abs(p @ p - p)) <= tol, "projector not idempotent"
            for j in range(i + 1, len(self.projectors)):
                assert np.max(np.abs(p @ self.projectors[j])) <= tol, "projectors not orthogonal"
            total += p
            recon += lam * p
        assert np.max(np.abs(total - np.eye(d))) <= tol, "projectors do not sum to identity"
        assert np.max(np.abs(recon - self.matrix)) <= tol, "spectral sum does not reconstruct"


def _from_eigensystem(
    matrix: np.ndarray, w: np.ndarray, vecs: np.ndarray, cluster_tol: float
) -> Observable:
    scale = max(1.0, float(w[-1] - w[0]))
    groups: list[list[int]] = [[0]]
    for k in range(1, len(w)):
        if w[k] - w[k - 1] <= cluster_tol * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    values, projectors, bases = [], [], []
    for g in groups:
        b = vecs[:, g].copy()
        values.append(float(np.mean(w[g])))
        bases.append(b)
        projectors.append(b @ dagger(b))
    return Observable(
        matrix=np.array(matrix, dtype=complex),
        eigenvalues=np.array(values),
        projectors=tuple(projectors),
        bases=tuple(bases),
    )


def spectral_decompose(m: ArrayLike, cluster_tol: float = CLUSTER_TOL) -> Observable:
    """Split a Hermitian matrix into eigenvalues and eigenprojectors.

    Eigenvalues closer than ``cluster_tol`` (relative to ``max(1, range)``)
    are merged into one eigenspace.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    a = as_matrix(m)
    w, vecs = eig_hermitian(a)
    return _from_eigensystem(0.5 * (a + dagger(a)), w, vecs, cluster_tol)


def observable_from_eigenbasis(values: Sequence[float], basis: np.ndarray) -> Observable:
    """Build ``sum_k values[k] |b_k><b_k|`` from orthonormal columns ``basis``."""
    basis = np.asarray(basis, dtype=complex)
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    w, b = values[order], basis[:, order]
    matrix = (b * w) @ dagger(b)
    return _from_eigensystem(matrix, w, b, CLUSTER_TOL)


def transform_observable(obs: Observable, u: np.ndarray) -> Observable:
    """Return the observable ``u^dagger O u``, transporting each eigenspace."""
    ud = dagger(u)
    bases = tuple(ud @ b for b in obs.bases)
    return Observable(
        matrix=ud @ obs.matrix @ u,
        eigenvalues=obs.eigenvalues.copy(),
        projectors=tuple(b @ dagger(b) for b in bases),
        bases=bases,
    )


def commutator(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    a = _matrix_of(a)
    b = _matrix_of(b)
    if a.shape != b.shape:
        raise DimensionError(f"commutator of {a.shape} and {b.shape} matrices")
    return a @ b - b @ a


def _matrix_of(x) -> np.ndarray:
    if isinstance(x, Observable):
        return x.matrix
    return as_matrix(x)


def tensor_product(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    return np.kron(_matrix_of(a), _matrix_of(b))


def kron_all(*factors: ArrayLike) -> np.ndarray:
    return functools.reduce(np.kron, [_matrix_of(f) for f in factors])


def partial_trace(
    m: ArrayLike, dims: tuple[int, int], keep: Literal["A", "B"] = "A"
) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``C^dA (x) C^dB``."""
    a = as_matrix(m)
    da, db = dims
    if da < 1 or db < 1 or a.shape[0] != da * db:
        raise DimensionError(f"matrix of dim {a.shape[0]} does not factor as {da}x{db}")
    t = a.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def spectral_norm(m: ArrayLike) -> float:
    """Largest singular value.

    Hermitian and anti-Hermitian inputs (e.g. commutators of observables) use
    their eigenvalues directly; anything else goes through ``m^dagger m``.
    """
    a = as_matrix(m)
    tol = HERMITIAN_TOL * _hermitian_scale(a)
    if is_hermitian(a, tol):
        w, _ = eig_hermitian(a)
    elif is_hermitian(1j * a, tol):
        w, _ = eig_hermitian(1j * a)
    else:
        w, _ = eig_hermitian(dagger(a) @ a)
        return float(np.sqrt(max(0.0, w[-1])))
    return float(max(abs(w[0]), abs(w[-1])))


def spin_component(direction: Sequence[float]) -> np.ndarray:
    """``n . sigma`` for a unit Bloch vector ``n``."""
    n = np.asarray(direction, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit 3-vector")
    return n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z


def spin_rotation(axis: Sequence[float], angle: float) -> np.ndarray:
    """``exp(-i angle n.sigma / 2)`` in closed form."""
    return np.cos(angle / 2) * IDENTITY2 - 1j * np.sin(angle / 2) * spin_component(axis)


def unitary_exp(h: ArrayLike, t: float = 1.0) -> np.ndarray:
    """``exp(-i t H)`` for Hermitian ``H`` via its eigendecomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * t * w)) @ dagger(v)
