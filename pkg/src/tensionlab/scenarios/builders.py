"""Canonical scenarios: CHSH, KCBS, Leggett-Garg, Mermin-Peres square, GHZ."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..entanglement import QUBITS, lift, singlet
from ..linalg import (
    IDENTITY2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    kron_all,
    spectral_decompose,
    spin_component,
    spin_rotation,
)
from ..measurement import StateVector
from .model import Inequality, Scenario

_S2 = np.sqrt(2.0)

CHSH_OPTIMAL = {
    "a0": (0.0, 0.0, 1.0),
    "a1": (1.0, 0.0, 0.0),
    "b0": (-1 / _S2, 0.0, -1 / _S2),
    "b1": (1 / _S2, 0.0, -1 / _S2),
}


def chsh_scenario(
    a0: Sequence[float] = CHSH_OPTIMAL["a0"],
    a1: Sequence[float] = CHSH_OPTIMAL["a1"],
    b0: Sequence[float] = CHSH_OPTIMAL["b0"],
    b1: Sequence[float] = CHSH_OPTIMAL["b1"],
    state: Optional[StateVector] = None,
) -> Scenario:
    """Spin measurements along Bloch directions on a shared two-qubit state.

    Defaults to the singlet and the settings reaching ``2 sqrt(2)``.
    """
    obs = {}
    for name, side, direction in (("A0", "A", a0), ("A1", "A", a1), ("B0", "B", b0), ("B1", "B", b1)):
        obs[name] = lift(spectral_decompose(spin_component(direction)), side, QUBITS)
    ineq = Inequality.of(
        [(1, ("A0", "B0")), (1, ("A0", "B1")), (1, ("A1", "B0")), (-1, ("A1", "B1"))],
        "max",
    )
    return Scenario(
        name="chsh",
        state=state if state is not None else singlet(),
        observables=obs,
        contexts=(("A0", "B0"), ("A0", "B1"), ("A1", "B0"), ("A1", "B1")),
        inequality=ineq,
    )


def pentagram_vectors() -> np.ndarray:
    """Five real unit vectors in C^3, consecutive ones orthogonal, C5-symmetric.

    Rows are the vectors; the symmetry axis is ``(1, 0, 0)``.
    """
    c = np.cos(np.pi / 5)
    cos_t = np.sqrt(c / (1 + c))
    sin_t = np.sqrt(1 - cos_t**2)
    phis = 4 * np.pi * np.arange(5) / 5
    v = np.column_stack([np.full(5, cos_t), sin_t * np.cos(phis), sin_t * np.sin(phis)])
    for i in range(5):
        dot = abs(v[i] @ v[(i + 1) % 5])
        if dot > 1e-12:
            raise ArithmeticError(f"pentagram vectors {i},{(i + 1) % 5} overlap by {dot:.3g}")
    return v


def kcbs_scenario(state: Optional[StateVector] = None) -> Scenario:
    """Qutrit with ``A_i = 2|v_i><v_i| - I``; classical models keep ``sum <A_i A_i+1> >= -3``."""
    vecs = pentagram_vectors()
    obs = {}
    for i, v in enumerate(vecs):
        obs[f"A{i}"] = spectral_decompose(2 * np.outer(v, v).astype(complex) - np.eye(3))
    pairs = tuple((f"A{i}", f"A{(i + 1) % 5}") for i in range(5))
    return Scenario(
        name="kcbs",
        state=state if state is not None else StateVector(np.array([1, 0, 0], dtype=complex)),
        observables=obs,
        contexts=pairs,
        inequality=Inequality.of([(1, p) for p in pairs], "min"),
    )


def leggett_garg_scenario(theta: float) -> Scenario:
    """``sigma_z`` measured three times on ``|0>`` with ``exp(-i theta sigma_x / 2)`` in between."""
    sz = spectral_decompose(PAULI_Z)
    u = spin_rotation((1.0, 0.0, 0.0), theta)
    return Scenario(
        name="leggett-garg",
        state=StateVector.basis(2, 0),
        observables={"Q1": sz, "Q2": sz, "Q3": sz},
        contexts=(),
        inequality=Inequality.of([(1, ("Q1", "Q2")), (1, ("Q2", "Q3")), (-1, ("Q1", "Q3"))], "max"),
        temporal_sequence=(("Q1", None), ("Q2", u), ("Q3", u)),
        metadata={"theta": repr(float(theta))},
    )


def leggett_garg_oracle(theta: float) -> float:
    return 2 * np.cos(theta) - np.cos(2 * theta)


# rows multiply to +I, columns to +I, +I, -I
MERMIN_PERES_SQUARE = (
    (("ZI", (PAULI_Z, IDENTITY2)), ("IZ", (IDENTITY2, PAULI_Z)), ("ZZ", (PAULI_Z, PAULI_Z))),
    (("IX", (IDENTITY2, PAULI_X)), ("XI", (PAULI_X, IDENTITY2)), ("XX", (PAULI_X, PAULI_X))),
    (("ZX", (PAULI_Z, PAULI_X)), ("XZ", (PAULI_X, PAULI_Z)), ("YY", (PAULI_Y, PAULI_Y))),
)

MERMIN_PERES_CONSTRAINTS = (
    (("ZI", "IZ", "ZZ"), 1),
    (("IX", "XI", "XX"), 1),
    (("ZX", "XZ", "YY"), 1),
    (("ZI", "IX", "ZX"), 1),
    (("IZ", "XI", "XZ"), 1),
    (("ZZ", "XX", "YY"), -1),
)


def mermin_peres_scenario(state: Optional[StateVector] = None) -> Scenario:
    """The 3x3 square of two-qubit Paulis as a state-independent inequality.

    Each row/column product enters with its required sign, so quantum
    mechanics reaches 6 on every state while pre-assigned values reach 4.
    """
    obs = {}
    for row in MERMIN_PERES_SQUARE:
        for name, factors in row:
            obs[name] = spectral_decompose(kron_all(*factors))
    return Scenario(
        name="mermin-peres",
        state=state if state is not None else StateVector.basis(4, 0),
        observables=obs,
        contexts=tuple(names for names, _ in MERMIN_PERES_CONSTRAINTS),
        inequality=Inequality.of([(sign, names) for names, sign in MERMIN_PERES_CONSTRAINTS], "max"),
    )


GHZ_CONSTRAINTS = (
    (("X1", "X2", "X3"), 1),
    (("X1", "Y2", "Y3"), -1),
    (("Y1", "X2", "Y3"), -1),
    (("Y1", "Y2", "X3"), -1),
)


def ghz_state() -> StateVector:
    a = np.zeros(8, dtype=complex)
    a[0] = a[7] = 1 / _S2
    return StateVector(a)


def ghz_scenario() -> Scenario:
    """Single-qubit X/Y on three qubits of ``(|000> + |111>)/sqrt(2)``.

    The four product observables have the GHZ state as eigenvector with the
    eigenvalues in ``GHZ_CONSTRAINTS``; the inequality is Mermin's
    ``<XXX> - <XYY> - <YXY> - <YYX>`` (quantum 4, classical 2).
    """
    obs = {}
    for q in range(3):
        for label, pauli in (("X", PAULI_X), ("Y", PAULI_Y)):
            factors = [IDENTITY2] * 3
            factors[q] = pauli
            obs[f"{label}{q + 1}"] = spectral_decompose(kron_all(*factors))
    obs = {n: obs[n] for n in ("X1", "Y1", "X2", "Y2", "X3", "Y3")}
    return Scenario(
        name="ghz",
        state=ghz_state(),
        observables=obs,
        contexts=tuple(names for names, _ in GHZ_CONSTRAINTS),
        inequality=Inequality.of([(sign, names) for names, sign in GHZ_CONSTRAINTS], "max"),
    )


BUILTIN = {
    "chsh": chsh_scenario,
    "kcbs": kcbs_scenario,
    "leggett-garg": lambda: leggett_garg_scenario(np.pi / 3),
    "mermin-peres": mermin_peres_scenario,
    "ghz": ghz_scenario,
}
