import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import max_abs
from strategies import hermitian, state_amplitudes
from tensionlab.ensembles import random_hermitian, random_special_unitary, random_state, random_unitary
from tensionlab.entanglement import (
    QUBITS,
    BipartiteShape,
    choi_induced,
    compose,
    is_entangled,
    lift,
    path_spin_state,
    preparation_tension,
    projector_observable,
    schmidt,
    singlet,
)
from tensionlab.errors import DimensionError, SchmidtRankError
from tensionlab.linalg import PAULI_X, PAULI_Y, PAULI_Z, commutator, partial_trace, spectral_decompose
from tensionlab.measurement import StateVector
from tensionlab.tension import eigenbases_differ, tension_degree

S2 = np.sqrt(2.0)
SX, SY, SZ = (spectral_decompose(p) for p in (PAULI_X, PAULI_Y, PAULI_Z))
ZERO, ONE = StateVector.basis(2, 0), StateVector.basis(2, 1)
PLUS = StateVector(np.array([1, 1]) / S2)


class TestCompose:
    def test_zero_zero(self):
        assert compose(ZERO, ZERO).amplitudes.tolist() == [1, 0, 0, 0]

    def test_plus_zero(self):
        np.testing.assert_allclose(compose(PLUS, ZERO).amplitudes, np.array([1, 0, 1, 0]) / S2)

    @given(st.integers(1, 4).flatmap(state_amplitudes), st.integers(1, 4).flatmap(state_amplitudes))
    def test_product_is_rank_one(self, a, b):
        psi = compose(a, b)
        assert schmidt(psi, BipartiteShape(a.size, b.size)).rank == 1


class TestSchmidt:
    def test_product(self):
        s = schmidt(compose(PLUS, ONE), QUBITS)
        assert s.rank == 1
        np.testing.assert_allclose(s.coefficients, [1])

    def test_singlet(self):
        s = schmidt(singlet(), QUBITS)
        assert s.rank == 2
        np.testing.assert_allclose(s.coefficients, [1 / S2, 1 / S2], atol=1e-12)

    def test_path_spin_state(self):
        s = schmidt(path_spin_state(), QUBITS)
        assert s.rank == 2
        np.testing.assert_allclose(s.coefficients, [1 / S2, 1 / S2], atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            schmidt(singlet(), BipartiteShape(2, 3))

    @pytest.mark.parametrize("da,db", [(2, 2), (2, 3), (3, 3), (4, 2), (1, 5)])
    def test_invariants(self, rng, da, db):
        for _ in range(10):
            psi = random_state(da * db, rng)
            s = schmidt(psi, BipartiteShape(da, db))
            assert np.sum(s.coefficients**2) == pytest.approx(1, abs=1e-9)
            assert np.all(np.diff(s.coefficients) <= 1e-15)
            assert max_abs(s.reconstruct() - psi.amplitudes) <= 1e-9
            assert max_abs(s.left_basis.conj().T @ s.left_basis - np.eye(s.rank)) <= 1e-9
            assert max_abs(s.right_basis.conj().T @ s.right_basis - np.eye(s.rank)) <= 1e-9

    def test_matches_svd(self, rng):
        psi = random_state(12, rng)
        sv = np.linalg.svd(psi.amplitudes.reshape(3, 4), compute_uv=False)
        np.testing.assert_allclose(schmidt(psi, BipartiteShape(3, 4)).coefficients, sv, atol=1e-10)


class TestIsEntangled:
    def test_basis_product(self):
        assert not is_entangled(compose(ZERO, ONE), QUBITS)

    def test_singlet(self):
        assert is_entangled(singlet(), QUBITS)

    def test_weakly_entangled(self):
        eps = 1e-3
        psi = StateVector.normalized([1, 0, 0, eps])
        assert is_entangled(psi, QUBITS, tol=1e-6)
        assert schmidt(psi, QUBITS).coefficients[1] == pytest.approx(eps / np.sqrt(1 + eps**2), rel=1e-6)


class TestSinglet:
    def test_amplitudes(self):
        np.testing.assert_allclose(singlet().amplitudes, [0, 1 / S2, -1 / S2, 0])

    def test_reduced_state(self):
        rho = singlet().density()
        assert max_abs(partial_trace(rho, (2, 2), "A") - np.eye(2) / 2) < 1e-15
        assert max_abs(partial_trace(rho, (2, 2), "B") - np.eye(2) / 2) < 1e-15

    def test_rotation_invariance(self, rng):
        psi = singlet()
        for _ in range(20):
            r = random_special_unitary(2, rng)
            rotated = np.kron(r, r) @ psi.amplitudes
            assert abs(abs(np.vdot(psi.amplitudes, rotated)) - 1) <= 1e-10

    def test_rotated_basis_rewriting(self):
        # in the x basis the singlet keeps its antisymmetric form
        plus, minus = np.array([1, 1]) / S2, np.array([1, -1]) / S2
        rewritten = (np.kron(plus, minus) - np.kron(minus, plus)) / S2
        assert abs(abs(np.vdot(singlet().amplitudes, rewritten)) - 1) < 1e-15


class TestLift:
    def test_sigma_z_on_a(self):
        assert max_abs(lift(SZ, "A", QUBITS).matrix - np.diag([1, 1, -1, -1])) == 0

    def test_opposite_sides_commute(self, rng):
        a = spectral_decompose(random_hermitian(2, rng))
        b = spectral_decompose(random_hermitian(3, rng))
        shape = BipartiteShape(2, 3)
        assert max_abs(commutator(lift(a, "A", shape), lift(b, "B", shape))) < 1e-14

    def test_multiplicities_scale(self, rng):
        a = spectral_decompose(random_hermitian(3, rng))
        la = lift(a, "A", BipartiteShape(3, 4))
        np.testing.assert_allclose(la.eigenvalues, a.eigenvalues)
        assert la.multiplicities() == [4, 4, 4]
        la.check(1e-9)

    def test_wrong_side_dim(self):
        with pytest.raises(DimensionError):
            lift(SZ, "B", BipartiteShape(2, 3))


class TestChoiInduced:
    def test_singlet_sigma_z(self):
        ob = choi_induced(singlet(), QUBITS, SZ)
        # anticorrelation: up on A pairs with down on B
        assert max_abs(ob.matrix + PAULI_Z) < 1e-12
        assert ob.eigenvalues.tolist() == pytest.approx([-1, 1])

    def test_commutes_with_lift(self):
        ob = choi_induced(singlet(), QUBITS, SZ)
        c = commutator(lift(SZ, "A", QUBITS), lift(ob, "B", QUBITS))
        assert max_abs(c) <= 1e-10

    def test_incompatibility_witness(self):
        ob = choi_induced(singlet(), QUBITS, SZ)
        assert tension_degree(SX, ob) > 0
        assert eigenbases_differ(SX, ob)

    def test_perfect_correlation_through_state(self, rng):
        # measuring O_A and O'_B on psi always gives matching eigenvalues
        for _ in range(5):
            a = spectral_decompose(random_hermitian(3, rng))
            u = random_unitary(3, rng)
            psi = StateVector((np.kron(u, np.eye(3)) @ np.eye(3).reshape(-1)) / np.sqrt(3))
            ob = choi_induced(psi, BipartiteShape(3, 3), a)
            for lam, p in zip(a.eigenvalues, a.projectors):
                q = ob.projector_for(lam)
                both = np.kron(p, q) @ psi.amplitudes
                alone = np.kron(p, np.eye(3)) @ psi.amplitudes
                assert np.vdot(both, both).real == pytest.approx(np.vdot(alone, alone).real, abs=1e-9)

    def test_degenerate_observable(self):
        # eigenspaces, not a chosen basis, determine the result
        a = spectral_decompose(np.diag([1.0, 1.0, -1.0]))
        psi = StateVector(np.eye(3).reshape(-1) / np.sqrt(3))
        ob = choi_induced(psi, BipartiteShape(3, 3), a)
        assert max_abs(ob.matrix - np.diag([1.0, 1.0, -1.0])) < 1e-12

    @given(hermitian(2, 2))
    def test_commutation_for_any_observable(self, m):
        a = spectral_decompose(m)
        ob = choi_induced(singlet(), QUBITS, a)
        c = commutator(lift(a, "A", QUBITS), lift(ob, "B", QUBITS))
        assert max_abs(c) <= 1e-10 * max(1.0, max_abs(m))

    def test_rejects_product_state(self):
        with pytest.raises(SchmidtRankError):
            choi_induced(compose(ZERO, ONE), QUBITS, SZ)

    def test_rejects_unequal_factors(self):
        with pytest.raises(SchmidtRankError):
            choi_induced(StateVector.basis(6, 0), BipartiteShape(2, 3), SZ)


class TestPreparationTension:
    def test_eigenstate(self):
        assert not preparation_tension(ZERO, SZ)

    def test_singlet_projector(self):
        psi = singlet()
        assert not preparation_tension(psi, projector_observable(psi))

    def test_singlet_local_spin(self):
        assert preparation_tension(singlet(), lift(SZ, "A", QUBITS))

    def test_singlet_total_spin_component(self):
        # sigma_z x I + I x sigma_z annihilates the singlet
        total = spectral_decompose(np.kron(PAULI_Z, np.eye(2)) + np.kron(np.eye(2), PAULI_Z))
        assert not preparation_tension(singlet(), total)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            preparation_tension(ZERO, lift(SZ, "A", QUBITS))
