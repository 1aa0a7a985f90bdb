"""Quantum values of scenarios: static correlators and ordered measurements."""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..errors import NonCommutingError, NotMeasurableError
from ..linalg import Observable
from ..measurement import (
    StateLike,
    _amps,
    _check_dims,
    as_state,
    path_correlator,
    sequential_paths,
    unitary_evolve,
)
from .model import COMMUTE_TOL, Scenario, first_noncommuting_pair


def correlation(psi: StateLike, *observables: Observable) -> float:
    """``<psi| A B ... |psi>`` for mutually commuting observables."""
    if not observables:
        raise ValueError("correlation needs at least one observable")
    a = _amps(psi)
    _check_dims(a, *observables)
    pair = first_noncommuting_pair(observables, COMMUTE_TOL)
    if pair is not None:
        raise NonCommutingError(
            f"observables {pair[0]} and {pair[1]} do not commute; use temporal_correlator"
        )
    v = a
    for obs in reversed(observables):
        v = obs.matrix @ v
    val = np.vdot(a, v)
    if abs(val.imag) > 1e-10:
        raise ArithmeticError(f"correlation has imaginary part {val.imag:.3g}")
    return float(val.real)


def temporal_correlator(
    psi: StateLike,
    a: Observable,
    b: Observable,
    u_between: Optional[np.ndarray] = None,
) -> float:
    """``E[o1 o2]`` for measuring ``a``, evolving by ``u_between``, then measuring ``b``."""
    paths = sequential_paths(psi, [(a, None), (b, u_between)])
    return path_correlator(paths)


def _static_term(s: Scenario, names: tuple[str, ...]) -> float:
    if len(names) > 1 and not any(set(names) <= set(ctx) for ctx in s.contexts):
        raise NotMeasurableError(f"term {names} is not contained in any context")
    return correlation(s.state, *(s.observables[n] for n in names))


def _temporal_term(s: Scenario, names: tuple[str, ...]) -> float:
    seq = s.temporal_sequence
    order = [n for n, _ in seq]
    try:
        positions = sorted({order.index(n) for n in names})
    except ValueError:
        raise NotMeasurableError(f"term {names} is not part of the temporal sequence") from None
    if len(positions) != len(set(names)):
        raise NotMeasurableError(f"term {names} repeats an observable")

    def evolution(lo: int, hi: int) -> Optional[np.ndarray]:
        # product of the unitaries attached to steps lo..hi (applied in order)
        u = None
        for k in range(lo, hi + 1):
            step_u = seq[k][1]
            if step_u is not None:
                u = step_u if u is None else step_u @ u
        return u

    state = as_state(s.state)
    u0 = evolution(0, positions[0])
    if u0 is not None:
        state = unitary_evolve(state, u0)
    steps = [(s.observables[order[positions[0]]], None)]
    for prev, cur in zip(positions, positions[1:]):
        steps.append((s.observables[order[cur]], evolution(prev + 1, cur)))
    return path_correlator(sequential_paths(state, steps))


def term_values(s: Scenario) -> list[float]:
    evaluate = _temporal_term if s.temporal else _static_term
    return [evaluate(s, t.names) for t in s.inequality.terms]


def quantum_value(s: Scenario) -> float:
    return float(sum(t.coeff * v for t, v in zip(s.inequality.terms, term_values(s))))


def temporal_embed(s: Scenario) -> Scenario:
    """Re-read a static scenario as measurements performed one after another.

    Every observable becomes one step of a unitary-free sequence; each term
    is then measured in sequence order.  Terms must consist of commuting
    observables, in which case the value is unchanged.
    """
    if s.temporal:
        raise ValueError("scenario is already temporal")
    for i, t in enumerate(s.inequality.terms):
        pair = first_noncommuting_pair([s.observables[n] for n in t.names])
        if pair is not None:
            raise NonCommutingError(
                f"inequality.terms[{i}]: {t.names[pair[0]]} and {t.names[pair[1]]} do not commute"
            )
    return Scenario(
        name=f"{s.name}-temporal",
        state=s.state,
        observables=s.observables,
        contexts=s.contexts,
        inequality=s.inequality,
        temporal_sequence=tuple((n, None) for n in s.observables),
        metadata=dict(s.metadata),
    )
