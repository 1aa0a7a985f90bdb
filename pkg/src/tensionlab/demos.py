"""Built-in demonstrations, each producing a :class:`RunReport`."""
from __future__ import annotations

import time
from typing import Callable, Optional

import numpy as np

from .entanglement import QUBITS, choi_induced, lift, preparation_tension, projector_observable, singlet
from .ensembles import random_hermitian, random_state
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, commutator, spectral_decompose, spin_component
from .measurement import StateVector, robertson_sides, sequential_paths
from .report import RunReport, report_from_bounds, report_tolerance
from .scenarios import (
    BUILTIN,
    GHZ_CONSTRAINTS,
    MERMIN_PERES_CONSTRAINTS,
    analyze,
    ghz_state,
    ks_assignment_search,
    quantum_value,
    temporal_embed,
)
from .scenarios.model import Scenario
from .tension import eigenbases_differ, tension_degree

UNCERTAINTY_TRIPLES = 1000
UNCERTAINTY_SEED = 0


class UnknownDemo(KeyError):
    pass


def _scenario_demo(s: Scenario, tol: float, extras: Optional[dict] = None) -> RunReport:
    start = time.perf_counter()
    bounds = analyze(s, tol)
    extras = dict(extras or {})
    if not s.temporal:
        extras["temporal_embed_value"] = quantum_value(temporal_embed(s))
    return report_from_bounds(s, bounds, extras, time.perf_counter() - start)


def _product_identities(s: Scenario, constraints) -> float:
    """Largest deviation of a context product from its required multiple of identity."""
    worst = 0.0
    for names, sign in constraints:
        prod = np.eye(s.dim, dtype=complex)
        for n in names:
            prod = prod @ s.observables[n].matrix
        worst = max(worst, float(np.max(np.abs(prod - sign * np.eye(s.dim)))))
    return worst


def _context_products_certain(s: Scenario, constraints, state: StateVector, tol: float) -> bool:
    """Every sequential run of a context yields an outcome product equal to its sign."""
    for names, sign in constraints:
        for path in sequential_paths(state, [s.observables[n] for n in names]):
            if abs(np.prod(path.outcomes) - sign) > tol:
                return False
    return True


def demo_mermin_peres(tol: float) -> RunReport:
    s = BUILTIN["mermin-peres"]()
    ks = ks_assignment_search(s.observables, MERMIN_PERES_CONSTRAINTS)
    extras = {
        "ks_assignments_checked": ks.checked,
        "ks_feasible": ks.feasible,
        "ks_min_violated_constraints": ks.min_violations,
        "product_identity_error": _product_identities(s, MERMIN_PERES_CONSTRAINTS),
        "context_products_certain": _context_products_certain(
            s, MERMIN_PERES_CONSTRAINTS, singlet(), tol
        ),
    }
    return _scenario_demo(s, tol, extras)


def demo_ghz(tol: float) -> RunReport:
    s = BUILTIN["ghz"]()
    ks = ks_assignment_search(s.observables, GHZ_CONSTRAINTS)
    psi = ghz_state().amplitudes
    eig_err = 0.0
    for names, sign in GHZ_CONSTRAINTS:
        prod = np.eye(8, dtype=complex)
        for n in names:
            prod = prod @ s.observables[n].matrix
        eig_err = max(eig_err, float(np.max(np.abs(prod @ psi - sign * psi))))
    extras = {
        "ks_assignments_checked": ks.checked,
        "ks_feasible": ks.feasible,
        "ks_min_violated_constraints": ks.min_violations,
        "ghz_eigenrelation_error": eig_err,
    }
    return _scenario_demo(s, tol, extras)


def demo_uncertainty(tol: float, triples: int = UNCERTAINTY_TRIPLES, seed: int = UNCERTAINTY_SEED) -> RunReport:
    """Robertson's bound on random states and observables, dims 2..8."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    violations, min_slack = 0, np.inf
    for _ in range(triples):
        d = int(rng.integers(2, 9))
        psi = random_state(d, rng)
        a = spectral_decompose(random_hermitian(d, rng))
        b = spectral_decompose(random_hermitian(d, rng))
        lhs, rhs = robertson_sides(psi, a, b)
        min_slack = min(min_slack, lhs - rhs)
        if lhs < rhs - tol:
            violations += 1
    sx, sy, sz = (spectral_decompose(p) for p in (PAULI_X, PAULI_Y, PAULI_Z))
    lhs, rhs = robertson_sides(StateVector.basis(2, 0), sx, sy)
    return RunReport(
        scenario="uncertainty",
        quantum_value=None,
        classical_bound=None,
        lp_verdict="N/A",
        violation=False,
        tension=(("X|Y", tension_degree(sx, sy)), ("X|Z", tension_degree(sx, sz)), ("Y|Z", tension_degree(sy, sz))),
        extras={
            "triples": triples,
            "seed": seed,
            "robertson_violations": violations,
            "min_slack": float(min_slack),
            "equality_case_lhs": lhs,
            "equality_case_rhs": rhs,
        },
        timing=time.perf_counter() - start,
    )


def demo_epr_choi(tol: float) -> RunReport:
    """Side-B observable singled out by a side-A spin measurement on the singlet.

    Side A measures spin-1/2 along (x+z)/sqrt(2) (eigenvalues +-1/2); side B
    measures along x, whose eigenbasis differs from the induced one.
    Half the projector sum onto the two spin states is ``I/2``, which carries
    no measurement content, so the spin observable with eigenvalues +-1/2 on
    those same eigenvectors stands in for it.
    """
    start = time.perf_counter()
    psi = singlet()
    diag = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
    o_a = spectral_decompose(0.5 * spin_component(diag))
    o_b = spectral_decompose(0.5 * spin_component((1.0, 0.0, 0.0)))
    o_b_induced = choi_induced(psi, QUBITS, o_a)
    la, lb, lb_ind = lift(o_a, "A", QUBITS), lift(o_b, "B", QUBITS), lift(o_b_induced, "B", QUBITS)
    lifts_commutator = float(np.max(np.abs(commutator(la.matrix, lb_ind.matrix))))
    witness = tension_degree(o_b, o_b_induced)
    prep = projector_observable(psi)
    return RunReport(
        scenario="epr-choi",
        quantum_value=float(np.real(np.vdot(psi.amplitudes, la.matrix @ lb.matrix @ psi.amplitudes))),
        classical_bound=None,
        lp_verdict="N/A",
        violation=False,
        tension=(
            ("OA(x)I|I(x)OB", tension_degree(la, lb)),
            ("OA(x)I|I(x)OB'", tension_degree(la, lb_ind)),
            ("OB|OB'", witness),
            ("prep|OA(x)I", tension_degree(prep, la)),
        ),
        extras={
            "lifted_commutator_max": lifts_commutator,
            "incompatibility_witness": witness,
            "eigenbases_differ": eigenbases_differ(o_b, o_b_induced),
            "preparation_tension_OA": preparation_tension(psi, la),
            "preparation_tension_OB": preparation_tension(psi, lb),
            "singlet_is_prep_eigenstate": not preparation_tension(psi, prep),
        },
        timing=time.perf_counter() - start,
    )


DEMOS: dict[str, Callable[[float], RunReport]] = {
    "chsh": lambda tol: _scenario_demo(BUILTIN["chsh"](), tol),
    "kcbs": lambda tol: _scenario_demo(BUILTIN["kcbs"](), tol),
    "leggett-garg": lambda tol: _scenario_demo(BUILTIN["leggett-garg"](), tol),
    "mermin-peres": demo_mermin_peres,
    "ghz": demo_ghz,
    "uncertainty": demo_uncertainty,
    "epr-choi": demo_epr_choi,
}


def run_demo(name: str, tol: Optional[float] = None) -> RunReport:
    if name not in DEMOS:
        raise UnknownDemo(name)
    return DEMOS[name](report_tolerance() if tol is None else tol)


def run_scenario(s: Scenario, tol: Optional[float] = None) -> RunReport:
    return _scenario_demo(s, report_tolerance() if tol is None else tol)
