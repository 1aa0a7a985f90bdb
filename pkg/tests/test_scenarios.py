import itertools

import numpy as np
import pytest

from conftest import max_abs
from tensionlab.ensembles import random_state, random_unit_vector
from tensionlab.entanglement import QUBITS, compose, lift, singlet
from tensionlab.errors import NonCommutingError, NotMeasurableError, ScenarioError, SearchSpaceOverflow
from tensionlab.linalg import PAULI_X, PAULI_Z, spectral_decompose, spin_component, spin_rotation
from tensionlab.measurement import StateVector, expectation, sequential_paths
from tensionlab.scenarios import (
    BUILTIN,
    CHSH_OPTIMAL,
    GHZ_CONSTRAINTS,
    MERMIN_PERES_CONSTRAINTS,
    DeterministicStrategy,
    Inequality,
    Scenario,
    analyze,
    chsh_scenario,
    classical_bound,
    correlation,
    ghz_scenario,
    ghz_state,
    joint_distribution_feasible,
    kcbs_scenario,
    ks_assignment_search,
    leggett_garg_oracle,
    leggett_garg_scenario,
    mermin_peres_scenario,
    pentagram_vectors,
    quantum_value,
    temporal_correlator,
    temporal_embed,
    term_values,
)

SX, SZ = spectral_decompose(PAULI_X), spectral_decompose(PAULI_Z)
ZERO = StateVector.basis(2, 0)
PM = [-1.0, 1.0]

# frozen from a zoomed grid search over real qutrit states of the pentagram
# operator sum (independent of this package's eigensolver)
KCBS_GRID_ORACLE = -3.944271909999


def spin(n, side):
    return lift(spectral_decompose(spin_component(n)), side, QUBITS)


def singlet_chsh_oracle(a0, a1, b0, b1):
    e = lambda a, b: -float(np.dot(a, b))  # noqa: E731
    return e(a0, b0) + e(a0, b1) + e(a1, b0) - e(a1, b1)


class TestCorrelation:
    def test_zz_on_singlet(self):
        assert correlation(singlet(), spin((0, 0, 1), "A"), spin((0, 0, 1), "B")) == pytest.approx(-1)

    @pytest.mark.parametrize("angle", [0.0, np.pi / 2, np.pi / 4])
    def test_singlet_is_minus_dot(self, angle):
        a = np.array([0.0, 0.0, 1.0])
        b = np.array([np.sin(angle), 0.0, np.cos(angle)])
        assert correlation(singlet(), spin(a, "A"), spin(b, "B")) == pytest.approx(-np.cos(angle), abs=1e-12)

    def test_product_state_factorizes(self, rng):
        pa, pb = random_state(2, rng), random_state(2, rng)
        a = spectral_decompose(spin_component(random_unit_vector(rng)))
        b = spectral_decompose(spin_component(random_unit_vector(rng)))
        c = correlation(compose(pa, pb), lift(a, "A", QUBITS), lift(b, "B", QUBITS))
        assert c == pytest.approx(expectation(pa, a) * expectation(pb, b), abs=1e-12)

    def test_noncommuting_rejected(self):
        with pytest.raises(NonCommutingError):
            correlation(ZERO, SZ, SX)


class TestTemporalCorrelator:
    def test_repeat(self, rng):
        assert temporal_correlator(random_state(2, rng), SZ, SZ) == pytest.approx(1)

    def test_z_then_x(self):
        assert temporal_correlator(ZERO, SZ, SX) == pytest.approx(0, abs=1e-12)

    def test_commuting_matches_static(self, rng):
        a = spectral_decompose(np.diag([1.0, -1.0, 2.0]))
        b = spectral_decompose(np.diag([3.0, 0.5, -1.0]))
        for _ in range(5):
            psi = random_state(3, rng)
            assert temporal_correlator(psi, a, b) == pytest.approx(correlation(psi, a, b), abs=1e-9)

    def test_precession(self):
        theta = 0.4
        assert temporal_correlator(ZERO, SZ, SZ, spin_rotation((1, 0, 0), theta)) == pytest.approx(np.cos(theta))


class TestChsh:
    def test_optimal(self):
        s = chsh_scenario()
        oracle = singlet_chsh_oracle(*(np.array(CHSH_OPTIMAL[k]) for k in ("a0", "a1", "b0", "b1")))
        assert oracle == pytest.approx(2 * np.sqrt(2))
        assert quantum_value(s) == pytest.approx(oracle, abs=1e-6)
        assert len(s.observables) == 4 and len(s.contexts) == 4

    def test_random_settings_match_oracle(self, rng):
        for _ in range(10):
            n = [random_unit_vector(rng) for _ in range(4)]
            assert quantum_value(chsh_scenario(*n)) == pytest.approx(singlet_chsh_oracle(*n), abs=1e-9)

    def test_degenerate_settings(self, rng):
        a, b = random_unit_vector(rng), random_unit_vector(rng)
        s = chsh_scenario(a, a, b, b)
        v = quantum_value(s)
        assert v == pytest.approx(2 * term_values(s)[0])
        assert abs(v) <= 2 + 1e-12

    def test_classical_bound(self):
        bound, witness = classical_bound(chsh_scenario())
        assert bound == 2
        assert witness.value(chsh_scenario().inequality) == 2


class TestKcbs:
    def test_pentagram_geometry(self):
        v = pentagram_vectors()
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1, atol=1e-15)
        for i in range(5):
            assert abs(v[i] @ v[(i + 1) % 5]) < 1e-15

    def test_adjacent_commute(self):
        s = kcbs_scenario()
        for i in range(5):
            a, b = s.observables[f"A{i}"], s.observables[f"A{(i + 1) % 5}"]
            assert max_abs(a.matrix @ b.matrix - b.matrix @ a.matrix) <= 1e-10

    def test_classical_bound(self):
        bound, _ = classical_bound(kcbs_scenario())
        assert bound == -3

    def test_quantum_value_matches_grid_oracle(self):
        v = quantum_value(kcbs_scenario())
        assert v < -3
        assert v == pytest.approx(KCBS_GRID_ORACLE, abs=1e-4)
        assert v == pytest.approx(5 - 4 * np.sqrt(5), abs=1e-9)


class TestLeggettGarg:
    def test_theta_zero(self):
        assert quantum_value(leggett_garg_scenario(0.0)) == pytest.approx(1)

    def test_pi_over_three(self):
        assert quantum_value(leggett_garg_scenario(np.pi / 3)) == pytest.approx(1.5, abs=1e-9)

    @pytest.mark.parametrize("theta", np.linspace(0, 2 * np.pi, 13))
    def test_oracle(self, theta):
        assert quantum_value(leggett_garg_scenario(theta)) == pytest.approx(leggett_garg_oracle(theta), abs=1e-9)

    def test_classical_bound(self):
        bound, _ = classical_bound(leggett_garg_scenario(0.3))
        assert bound == 1

    def test_is_temporal(self):
        s = leggett_garg_scenario(0.1)
        assert s.temporal and s.metadata["theta"] == "0.1"


class TestTemporalEmbed:
    @pytest.mark.parametrize("name", ["chsh", "kcbs", "mermin-peres", "ghz"])
    def test_builtin_values_preserved(self, name):
        s = BUILTIN[name]()
        e = temporal_embed(s)
        assert e.temporal and e.name == f"{s.name}-temporal"
        assert quantum_value(e) == pytest.approx(quantum_value(s), abs=1e-9)

    def test_single_observable(self, rng):
        s = Scenario(
            "single", random_state(2, rng), {"Z": SZ}, (), Inequality.of([(1, ("Z",))])
        )
        assert quantum_value(temporal_embed(s)) == pytest.approx(quantum_value(s), abs=1e-12)

    def test_rejects_noncommuting_term(self):
        bad = Scenario("bad", ZERO, {"Z": SZ, "X": SX}, (), Inequality.of([(1, ("Z", "X"))]))
        with pytest.raises(NotMeasurableError):
            quantum_value(bad)
        with pytest.raises(NonCommutingError):
            temporal_embed(bad)

    def test_already_temporal(self):
        with pytest.raises(ValueError):
            temporal_embed(leggett_garg_scenario(0.2))


class TestScenarioValidation:
    def test_noncommuting_context(self):
        with pytest.raises(NonCommutingError, match=r"contexts\[0\]"):
            Scenario("s", ZERO, {"Z": SZ, "X": SX}, (("Z", "X"),), Inequality.of([(1, ("Z",))]))

    def test_unknown_name(self):
        with pytest.raises(ScenarioError):
            Scenario("s", ZERO, {"Z": SZ}, (), Inequality.of([(1, ("Q",))]))

    def test_deterministic(self):
        for name, build in BUILTIN.items():
            assert quantum_value(build()) == pytest.approx(quantum_value(build()), abs=1e-10)


class TestClassicalBound:
    def test_witness_reaches_bound_exactly(self):
        for build in BUILTIN.values():
            s = build()
            bound, witness = classical_bound(s)
            assert witness.value(s.inequality) == bound
            for n, v in witness.assignment.items():
                assert np.min(np.abs(s.observables[n].eigenvalues - v)) < 1e-9

    def test_first_extremum_in_lexicographic_order(self):
        labels = {"A": PM, "B": PM}
        _, witness = classical_bound((labels, Inequality.of([(1, ("A", "B"))])))
        assert witness.assignment == {"A": -1.0, "B": -1.0}

    def test_brute_force_agreement(self, rng):
        labels = {"A": [-1.0, 0.0, 2.0], "B": PM, "C": [0.5, 1.0]}
        ineq = Inequality.of([(1.5, ("A", "B")), (-2, ("B", "C")), (0.7, ("A",)), (1, ("A", "B", "C"))])
        best = max(
            DeterministicStrategy(dict(zip(labels, vals))).value(ineq)
            for vals in itertools.product(*labels.values())
        )
        assert classical_bound((labels, ineq))[0] == pytest.approx(best, abs=1e-12)

    def test_overflow(self):
        labels = {f"O{i}": PM for i in range(30)}
        with pytest.raises(SearchSpaceOverflow):
            classical_bound((labels, Inequality.of([(1, ("O0",))])))


class TestKsSearch:
    def test_mermin_peres(self):
        r = ks_assignment_search(mermin_peres_scenario().observables, MERMIN_PERES_CONSTRAINTS)
        assert not r.feasible and r.checked == 512 and r.min_violations == 1

    def test_mermin_peres_parity(self):
        # each symbol appears in two constraints, so the product of all six
        # requirements must be +1 for any assignment; it is -1
        assert np.prod([sign for _, sign in MERMIN_PERES_CONSTRAINTS]) == -1
        counts = {}
        for names, _ in MERMIN_PERES_CONSTRAINTS:
            for n in names:
                counts[n] = counts.get(n, 0) + 1
        assert set(counts.values()) == {2}

    def test_single_constraint(self):
        r = ks_assignment_search(["A", "B"], [(("A", "B"), 1)])
        assert r.feasible and r.assignment == {"A": 1, "B": 1}

    def test_ghz(self):
        r = ks_assignment_search(ghz_scenario().observables, GHZ_CONSTRAINTS)
        assert not r.feasible and r.checked == 64

    def test_ghz_algebraic_cross_check(self):
        # product of the four constraint left sides squares every symbol
        assert np.prod([sign for _, sign in GHZ_CONSTRAINTS]) == -1

    def test_ghz_eigen_relations(self):
        s, psi = ghz_scenario(), ghz_state().amplitudes
        for names, sign in GHZ_CONSTRAINTS:
            op = np.eye(8)
            for n in names:
                op = op @ s.observables[n].matrix
            assert max_abs(op @ psi - sign * psi) < 1e-12

    def test_overflow(self):
        with pytest.raises(SearchSpaceOverflow):
            ks_assignment_search([f"O{i}" for i in range(25)], [])

    def test_rejects_non_dichotomic(self):
        with pytest.raises(ScenarioError):
            ks_assignment_search({"A": spectral_decompose(np.diag([0.0, 1.0]))}, [])


class TestMerminPeresQuantum:
    def test_operator_identities(self):
        s = mermin_peres_scenario()
        for names, sign in MERMIN_PERES_CONSTRAINTS:
            op = np.eye(4)
            for n in names:
                op = op @ s.observables[n].matrix
            assert max_abs(op - sign * np.eye(4)) <= 1e-9

    def test_outcome_products_certain(self, rng):
        s = mermin_peres_scenario()
        for _ in range(5):
            psi = random_state(4, rng)
            for names, sign in MERMIN_PERES_CONSTRAINTS:
                paths = sequential_paths(psi, [s.observables[n] for n in names])
                for p in paths:
                    assert np.prod(p.outcomes) == pytest.approx(sign, abs=1e-9)

    def test_state_independent_value(self, rng):
        s = mermin_peres_scenario(random_state(4, rng))
        assert quantum_value(s) == pytest.approx(6)
        assert classical_bound(s)[0] == 4

    def test_ghz_mermin_value(self):
        s = ghz_scenario()
        assert quantum_value(s) == pytest.approx(4, abs=1e-12)
        assert classical_bound(s)[0] == 2


class TestFine:
    CHSH_TERMS = [("A0", "B0"), ("A0", "B1"), ("A1", "B0"), ("A1", "B1")]
    LABELS = {n: PM for n in ("A0", "A1", "B0", "B1")}

    def test_deterministic_strategies_feasible(self):
        for vals in itertools.product(PM, repeat=4):
            a = dict(zip(self.LABELS, vals))
            cons = [(t, a[t[0]] * a[t[1]]) for t in self.CHSH_TERMS]
            r = joint_distribution_feasible(self.LABELS, cons)
            assert r.feasible
            for t, v in cons:
                assert r.distribution.expectation(t) == pytest.approx(v, abs=1e-7)

    def test_singlet_correlators_infeasible(self):
        r = 1 / np.sqrt(2)
        cons = list(zip(self.CHSH_TERMS, [r, r, r, -r]))
        assert not joint_distribution_feasible(self.LABELS, cons).feasible

    def test_boundary_feasible(self):
        cons = list(zip(self.CHSH_TERMS, [1.0, 1.0, 1.0, 1.0]))
        r = joint_distribution_feasible(self.LABELS, cons)
        assert r.feasible
        assert r.max_residual <= 1e-7
        assert sum(q for _, q in r.distribution.support()) == pytest.approx(1)

    def test_overflow(self):
        labels = {f"O{i}": PM for i in range(21)}
        with pytest.raises(SearchSpaceOverflow):
            joint_distribution_feasible(labels, [])


class TestAnalyze:
    @pytest.mark.parametrize("name", list(BUILTIN))
    def test_builtins_violate(self, name):
        b = analyze(BUILTIN[name]())
        assert b.violation and not b.lp_feasible

    def test_violation_threshold(self):
        ineq = Inequality.of([(1, ("Z",))], "max")
        assert not ineq.exceeds(1 + 1e-10, 1.0)
        assert ineq.exceeds(1 + 2e-9, 1.0)
        low = Inequality.of([(1, ("Z",))], "min")
        assert low.exceeds(1 - 2e-9, 1.0) and not low.exceeds(1 - 1e-10, 1.0)

    def test_local_settings_feasible(self):
        # identical settings on both sides: no violation, LP finds a witness
        n = (0.0, 0.0, 1.0)
        s = chsh_scenario(n, n, n, n)
        b = analyze(s)
        assert not b.violation and b.lp_feasible
        values = term_values(s)
        for t, v in zip(s.inequality.terms, values):
            assert b.distribution.expectation(t.names) == pytest.approx(v, abs=1e-7)
