from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Mapping, Optional, Sequence

import numpy as np

from ..errors import DimensionError, NonCommutingError, NotUnitaryError, ScenarioError
from ..linalg import Observable, is_unitary
from ..measurement import StateVector

COMMUTE_TOL = 1e-9

Direction = Literal["max", "min"]


@dataclass(frozen=True)
class Term:
    coeff: float
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "coeff", float(self.coeff))
        if not self.names:
            raise ValueError("a term needs at least one observable")


@dataclass(frozen=True)
class Inequality:
    """``sum_k coeff_k <prod names_k>`` compared against a classical bound.

    ``direction="max"`` means classical models satisfy ``value <= bound``;
    ``"min"`` means ``value >= bound``.
    """

    terms: tuple[Term, ...]
    direction: Direction = "max"
    classical_bound: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.direction not in ("max", "min"):
            raise ValueError(f"direction must be 'max' or 'min', got {self.direction!r}")

    @classmethod
    def of(cls, spec: Sequence[tuple[float, Sequence[str]]], direction: Direction = "max", bound=None):
        return cls(tuple(Term(c, tuple(n)) for c, n in spec), direction, bound)

    def names(self) -> list[str]:
        seen: dict[str, None] = {}
        for t in self.terms:
            for n in t.names:
                seen.setdefault(n)
        return list(seen)

    def exceeds(self, value: float, bound: float, tol: float = 1e-9) -> bool:
        if self.direction == "max":
            return value > bound + tol
        return value < bound - tol


def max_commutator(a: Observable, b: Observable) -> float:
    return float(np.max(np.abs(a.matrix @ b.matrix - b.matrix @ a.matrix)))


def first_noncommuting_pair(
    observables: Sequence[Observable], tol: float = COMMUTE_TOL
) -> Optional[tuple[int, int]]:
    for i in range(len(observables)):
        for j in range(i + 1, len(observables)):
            if max_commutator(observables[i], observables[j]) > tol:
                return i, j
    return None


@dataclass(frozen=True, eq=False)
class Scenario:
    """A state, named observables, measurement contexts and an inequality.

    With ``temporal_sequence`` set the scenario is evaluated in temporal
    mode: entries are ``(name, unitary-or-None)`` and the unitary is applied
    just before that step's measurement.
    """

    name: str
    state: StateVector
    observables: Mapping[str, Observable]
    contexts: tuple[tuple[str, ...], ...]
    inequality: Inequality
    temporal_sequence: Optional[tuple[tuple[str, Optional[np.ndarray]], ...]] = None
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "observables", dict(self.observables))
        object.__setattr__(self, "contexts", tuple(tuple(c) for c in self.contexts))
        if self.temporal_sequence is not None:
            object.__setattr__(
                self, "temporal_sequence", tuple((n, u) for n, u in self.temporal_sequence)
            )
        self.validate()

    @property
    def temporal(self) -> bool:
        return self.temporal_sequence is not None

    @property
    def dim(self) -> int:
        return self.state.dim

    def validate(self) -> None:
        d = self.state.dim
        for name, obs in self.observables.items():
            if obs.dim != d:
                raise DimensionError(f"observables.{name}: dim {obs.dim}, state dim {d}")
        for i, ctx in enumerate(self.contexts):
            for n in ctx:
                if n not in self.observables:
                    raise ScenarioError(f"contexts[{i}]: unknown observable {n!r}")
            pair = first_noncommuting_pair([self.observables[n] for n in ctx])
            if pair is not None:
                a, b = ctx[pair[0]], ctx[pair[1]]
                raise NonCommutingError(f"contexts[{i}]: {a} and {b} do not commute")
        for i, term in enumerate(self.inequality.terms):
            for n in term.names:
                if n not in self.observables:
                    raise ScenarioError(f"inequality.terms[{i}]: unknown observable {n!r}")
        if self.temporal_sequence is not None:
            if not self.temporal_sequence:
                raise ScenarioError("sequence: empty temporal sequence")
            for i, (n, u) in enumerate(self.temporal_sequence):
                if n not in self.observables:
                    raise ScenarioError(f"sequence[{i}]: unknown observable {n!r}")
                if u is not None:
                    u = np.asarray(u)
                    if u.shape != (d, d):
                        raise DimensionError(f"sequence[{i}].unitary: shape {u.shape}, expected {(d, d)}")
                    if not is_unitary(u):
                        raise NotUnitaryError(f"sequence[{i}].unitary: not unitary")


@dataclass(frozen=True)
class DeterministicStrategy:
    """One pre-assigned outcome per observable."""

    assignment: Mapping[str, float]

    def value(self, inequality: Inequality) -> float:
        total = 0.0
        for t in inequality.terms:
            prod = 1.0
            for n in t.names:
                prod *= self.assignment[n]
            total += t.coeff * prod
        return total


@dataclass(frozen=True, eq=False)
class BoundReport:
    quantum_value: float
    classical_bound: float
    lp_feasible: bool
    violation: bool
    witness: Optional[DeterministicStrategy] = None
    distribution: Optional[object] = None
