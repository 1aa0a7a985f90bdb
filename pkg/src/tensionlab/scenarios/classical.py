"""Classical oracles: deterministic hidden-variable strategies, outcome
pre-assignment search and joint-distribution feasibility."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from ..errors import LPError, ScenarioError, SearchSpaceOverflow
from ..linalg import Observable
from .evaluate import quantum_value, term_values
from .model import BoundReport, DeterministicStrategy, Inequality, Scenario
from .simplex import linprog_eq

MAX_STRATEGIES = 10**7
MAX_KS_OBSERVABLES = 24
MAX_ATOMS = 10**6
LP_MATCH_TOL = 1e-7
VIOLATION_TOL = 1e-9


def outcome_values(obs: Observable) -> list[float]:
    # rounding makes +-1 (and other simple spectra) exact, so bounds are exact
    return [round(float(v), 12) + 0.0 for v in obs.eigenvalues]


def _mixed_radix(sizes: Sequence[int], start: int, stop: int) -> np.ndarray:
    """Digits of ``range(start, stop)`` in lexicographic mixed radix, first digit most significant."""
    k = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(sizes), k.size), dtype=np.int64)
    for i in range(len(sizes) - 1, -1, -1):
        digits[i] = k % sizes[i]
        k = k // sizes[i]
    return digits


def classical_bound(
    s: Union[Scenario, tuple[Mapping[str, Sequence[float]], Inequality]],
    limit: int = MAX_STRATEGIES,
    chunk: int = 1 << 18,
) -> tuple[float, DeterministicStrategy]:
    """Extremal inequality value over all deterministic outcome assignments.

    Assignments are enumerated lexicographically over the observables in
    declaration order; the first extremal strategy is returned as witness.
    """
    if isinstance(s, Scenario):
        labels = {n: outcome_values(o) for n, o in s.observables.items()}
        ineq = s.inequality
    else:
        labels, ineq = s
        labels = {n: list(v) for n, v in labels.items()}
    names = list(labels)
    sizes = [len(labels[n]) for n in names]
    total = int(np.prod(sizes, dtype=object))
    if total > limit:
        raise SearchSpaceOverflow(f"{total} strategies exceed the limit of {limit}")
    index = {n: i for i, n in enumerate(names)}
    tables = [np.asarray(labels[n], dtype=float) for n in names]
    sign = 1.0 if ineq.direction == "max" else -1.0

    best_val, best_k = -np.inf, -1
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        digits = _mixed_radix(sizes, start, stop)
        value = np.zeros(stop - start)
        for term in ineq.terms:
            prod = np.ones(stop - start)
            for n in term.names:
                i = index[n]
                prod = prod * tables[i][digits[i]]
            value += term.coeff * prod
        k = int(np.argmax(sign * value))
        if sign * value[k] > best_val:
            best_val, best_k = float(sign * value[k]), start + k
    digits = _mixed_radix(sizes, best_k, best_k + 1)[:, 0]
    witness = DeterministicStrategy({n: tables[i][digits[i]].item() for i, n in enumerate(names)})
    return witness.value(ineq), witness


@dataclass(frozen=True)
class KSResult:
    feasible: bool
    assignment: Optional[dict[str, int]]
    checked: int
    min_violations: int
    minimizers: int


def ks_assignment_search(
    observables: Union[Sequence[str], Mapping[str, Observable]],
    constraints: Sequence[tuple[Sequence[str], int]],
    limit: int = MAX_KS_OBSERVABLES,
) -> KSResult:
    """Exhaustively look for a +-1 value assignment meeting every product constraint.

    Assignment ``k`` gives the ``i``-th observable the value ``+1`` when bit
    ``n-1-i`` of ``k`` is clear, so enumeration starts from all ``+1``.
    When nothing satisfies every constraint, the result records the smallest
    number of violated constraints and how many assignments reach it.
    """
    if isinstance(observables, Mapping):
        for n, o in observables.items():
            if sorted(outcome_values(o)) != [-1.0, 1.0]:
                raise ScenarioError(f"{n}: not a dichotomic +-1 observable")
        names = list(observables)
    else:
        names = list(observables)
    n = len(names)
    if n > limit:
        raise SearchSpaceOverflow(f"{n} observables exceed the limit of {limit}")
    index = {name: i for i, name in enumerate(names)}
    masks = []
    for names_c, required in constraints:
        if required not in (1, -1):
            raise ValueError("required products must be +1 or -1")
        bits = 0
        for name in names_c:
            if name not in index:
                raise ScenarioError(f"constraint uses unknown observable {name!r}")
            bits ^= 1 << (n - 1 - index[name])
        masks.append((bits, 0 if required == 1 else 1))

    total = 1 << n
    chunk = 1 << 20
    best, count, first = len(masks) + 1, 0, None
    for start in range(0, total, chunk):
        k = np.arange(start, min(total, start + chunk), dtype=np.int64)
        violations = np.zeros(k.size, dtype=np.int64)
        for bits, parity in masks:
            par = np.bitwise_count(k & bits) & 1
            violations += par != parity
        low = int(violations.min())
        if low < best:
            best, count = low, int(np.sum(violations == low))
            first = int(k[np.argmax(violations == low)])
        elif low == best:
            count += int(np.sum(violations == low))
    if best == 0:
        assignment = {name: (1 if not (first >> (n - 1 - i)) & 1 else -1) for i, name in enumerate(names)}
        return KSResult(True, assignment, total, 0, count)
    return KSResult(False, None, total, best, count)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    names: tuple[str, ...]
    atoms: np.ndarray
    probabilities: np.ndarray

    def expectation(self, names: Sequence[str]) -> float:
        cols = [self.names.index(n) for n in names]
        return float(self.probabilities @ np.prod(self.atoms[:, cols], axis=1))

    def support(self, tol: float = 1e-12) -> list[tuple[dict[str, float], float]]:
        out = []
        for atom, p in zip(self.atoms, self.probabilities):
            if p > tol:
                out.append((dict(zip(self.names, atom.tolist())), float(p)))
        return out


@dataclass(frozen=True, eq=False)
class FineResult:
    feasible: bool
    distribution: Optional[JointDistribution]
    max_residual: Optional[float] = None


def joint_distribution_feasible(
    outcome_labels: Mapping[str, Sequence[float]],
    constraints: Sequence[tuple[Sequence[str], float]],
    limit: int = MAX_ATOMS,
) -> FineResult:
    """Is there a joint distribution over all outcomes matching the given moments?

    Variables are the probabilities of the atoms of the product outcome
    space; the LP asks for ``p >= 0``, ``sum p = 1`` and every constrained
    product expectation to match.
    """
    names = tuple(outcome_labels)
    sizes = [len(outcome_labels[n]) for n in names]
    total = int(np.prod(sizes, dtype=object))
    if total > limit:
        raise SearchSpaceOverflow(f"{total} atoms exceed the limit of {limit}")
    digits = _mixed_radix(sizes, 0, total)
    atoms = np.column_stack(
        [np.asarray(outcome_labels[n], dtype=float)[digits[i]] for i, n in enumerate(names)]
    ) if names else np.zeros((1, 0))

    rows, rhs = [np.ones(total)], [1.0]
    for term, value in constraints:
        cols = [names.index(n) for n in term]
        rows.append(np.prod(atoms[:, cols], axis=1))
        rhs.append(float(value))
    a_eq, b_eq = np.vstack(rows), np.array(rhs)
    result = linprog_eq(np.zeros(total), a_eq, b_eq)
    if result.status == "infeasible":
        return FineResult(False, None)
    if result.status != "optimal":
        raise LPError(f"feasibility LP ended with status {result.status}")
    p = result.x / result.x.sum()
    residual = float(np.max(np.abs(a_eq @ p - b_eq)))
    if residual > LP_MATCH_TOL:
        raise LPError(f"LP witness misses the constraints by {residual:.3g}")
    return FineResult(True, JointDistribution(names, atoms, p), residual)


def analyze(s: Scenario, tol: float = VIOLATION_TOL) -> BoundReport:
    """Quantum value, classical bound and joint-distribution verdict for ``s``."""
    q = quantum_value(s)
    bound, witness = classical_bound(s)
    labels = {n: outcome_values(o) for n, o in s.observables.items()}
    moments: dict[tuple[str, ...], float] = {}
    for term, value in zip(s.inequality.terms, term_values(s)):
        moments.setdefault(term.names, value)
    fine = joint_distribution_feasible(labels, list(moments.items()))
    return BoundReport(
        quantum_value=q,
        classical_bound=bound,
        lp_feasible=fine.feasible,
        violation=s.inequality.exceeds(q, bound, tol),
        witness=witness,
        distribution=fine.distribution,
    )
