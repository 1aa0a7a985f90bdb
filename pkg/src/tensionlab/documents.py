"""Scenario documents: a strict JSON layout with complex numbers as ``[re, im]``.

::

    {
      "id": "chsh",
      "dim": 4,
      "state": [[0, 0], [0.7071, 0], ...],
      "observables": {"A0": [[[1, 0], [0, 0], ...], ...], ...},
      "contexts": [["A0", "B0"], ...],
      "sequence": [{"observable": "Q1"}, {"observable": "Q2", "unitary": [[...]]}],
      "inequality": {"terms": [{"coeff": 1, "names": ["A0", "B0"]}],
                     "direction": "max", "classical_bound": null}
    }

``sequence`` is optional and switches the scenario to temporal mode.
Every validation failure raises :class:`DocumentError` naming the field.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .errors import DocumentError
from .linalg import spectral_decompose
from .measurement import NORM_TOL, StateVector
from .scenarios.model import COMMUTE_TOL, Inequality, Scenario, Term, max_commutator

TOP_KEYS = {"id", "dim", "state", "observables", "contexts", "sequence", "inequality", "metadata"}
REQUIRED = ("dim", "state", "observables", "contexts", "inequality")
HERMITIAN_TOL = 1e-9
UNITARY_TOL = 1e-9


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _loads(text: str) -> Any:
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    except ValueError as exc:
        raise DocumentError("document", str(exc)) from None


def _number(x: Any, field: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(field, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        raise DocumentError(field, "number is not finite")
    return float(x)


def _complex(x: Any, field: str) -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise DocumentError(field, "expected a [re, im] pair")
    return complex(_number(x[0], f"{field}[0]"), _number(x[1], f"{field}[1]"))


def _vector(x: Any, dim: int, field: str) -> np.ndarray:
    if not isinstance(x, list):
        raise DocumentError(field, "expected a list of [re, im] pairs")
    if len(x) != dim:
        raise DocumentError(field, f"expected {dim} amplitudes, got {len(x)}")
    return np.array([_complex(v, f"{field}[{i}]") for i, v in enumerate(x)], dtype=complex)


def _matrix(x: Any, dim: int, field: str) -> np.ndarray:
    if not isinstance(x, list) or len(x) != dim:
        raise DocumentError(field, f"expected {dim} rows")
    return np.array([_vector(row, dim, f"{field}[{i}]") for i, row in enumerate(x)], dtype=complex)


def _names(x: Any, known: dict, field: str) -> tuple[str, ...]:
    if not isinstance(x, list) or not x:
        raise DocumentError(field, "expected a non-empty list of observable names")
    for i, n in enumerate(x):
        if not isinstance(n, str):
            raise DocumentError(f"{field}[{i}]", "expected a string")
        if n not in known:
            raise DocumentError(f"{field}[{i}]", f"unknown observable {n!r}")
    if len(set(x)) != len(x):
        raise DocumentError(field, "repeated observable name")
    return tuple(x)


def _object(x: Any, field: str, allowed: set, required: tuple = ()) -> dict:
    if not isinstance(x, dict):
        raise DocumentError(field, "expected an object")
    for k in x:
        if k not in allowed:
            raise DocumentError(f"{field}.{k}" if field != "document" else k, "unexpected key")
    for k in required:
        if k not in x:
            raise DocumentError(f"{field}.{k}" if field != "document" else k, "missing")
    return x


def scenario_from_document(doc: Any, default_id: str = "scenario") -> Scenario:
    doc = _object(doc, "document", TOP_KEYS, REQUIRED)
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise DocumentError("dim", "expected a positive integer")
    name = doc.get("id", default_id)
    if not isinstance(name, str) or not name:
        raise DocumentError("id", "expected a non-empty string")

    amps = _vector(doc["state"], dim, "state")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_TOL:
        raise DocumentError("state", f"norm is {norm:.12g}, expected 1")
    state = StateVector(amps)

    raw_obs = doc["observables"]
    if not isinstance(raw_obs, dict) or not raw_obs:
        raise DocumentError("observables", "expected a non-empty object")
    observables = {}
    for n, m in raw_obs.items():
        field = f"observables.{n}"
        mat = _matrix(m, dim, field)
        dev = float(np.max(np.abs(mat - mat.conj().T)))
        if dev > HERMITIAN_TOL:
            raise DocumentError(field, f"not Hermitian (max deviation {dev:.3g})")
        observables[n] = spectral_decompose(mat)
    contexts_raw = doc["contexts"]
    if not isinstance(contexts_raw, list):
        raise DocumentError("contexts", "expected a list")
    contexts = []
    for i, ctx in enumerate(contexts_raw):
        field = f"contexts[{i}]"
        names = _names(ctx, observables, field)
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                if max_commutator(observables[names[a]], observables[names[b]]) > COMMUTE_TOL:
                    raise DocumentError(field, f"{names[a]} and {names[b]} do not commute")
        contexts.append(names)

    sequence = None
    if "sequence" in doc:
        raw_seq = doc["sequence"]
        if not isinstance(raw_seq, list) or not raw_seq:
            raise DocumentError("sequence", "expected a non-empty list")
        sequence = []
        for i, step in enumerate(raw_seq):
            field = f"sequence[{i}]"
            step = _object(step, field, {"observable", "unitary"}, ("observable",))
            obs_name = step["observable"]
            if not isinstance(obs_name, str) or obs_name not in observables:
                raise DocumentError(f"{field}.observable", f"unknown observable {obs_name!r}")
            u = None
            if step.get("unitary") is not None:
                u = _matrix(step["unitary"], dim, f"{field}.unitary")
                dev = float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))
                if dev > UNITARY_TOL:
                    raise DocumentError(f"{field}.unitary", f"not unitary (max deviation {dev:.3g})")
            sequence.append((obs_name, u))

    ineq_raw = _object(
        doc["inequality"], "inequality", {"terms", "direction", "classical_bound"}, ("terms",)
    )
    terms_raw = ineq_raw["terms"]
    if not isinstance(terms_raw, list) or not terms_raw:
        raise DocumentError("inequality.terms", "expected a non-empty list")
    terms = []
    for i, t in enumerate(terms_raw):
        field = f"inequality.terms[{i}]"
        t = _object(t, field, {"coeff", "names"}, ("coeff", "names"))
        coeff = _number(t["coeff"], f"{field}.coeff")
        names = _names(t["names"], observables, f"{field}.names")
        if sequence is None and len(names) > 1 and not any(set(names) <= set(c) for c in contexts):
            raise DocumentError(f"{field}.names", "not contained in any context")
        if sequence is not None and not set(names) <= {n for n, _ in sequence}:
            raise DocumentError(f"{field}.names", "not part of the sequence")
        terms.append(Term(coeff, names))
    direction = ineq_raw.get("direction", "max")
    if direction not in ("max", "min"):
        raise DocumentError("inequality.direction", "expected \"max\" or \"min\"")
    bound = ineq_raw.get("classical_bound")
    if bound is not None:
        bound = _number(bound, "inequality.classical_bound")

    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict) or not all(isinstance(v, str) for v in metadata.values()):
        raise DocumentError("metadata", "expected an object of strings")

    return Scenario(
        name=name,
        state=state,
        observables=observables,
        contexts=tuple(contexts),
        inequality=Inequality(tuple(terms), direction, bound),
        temporal_sequence=None if sequence is None else tuple(sequence),
        metadata=metadata,
    )


def parse_scenario(text: Union[str, bytes], default_id: str = "scenario") -> Scenario:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError("document", f"not UTF-8: {exc}") from None
    return scenario_from_document(_loads(text), default_id)


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise DocumentError(str(path), exc.strerror or str(exc)) from None
    return parse_scenario(data, default_id=path.stem)


def _pairs(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def scenario_to_document(s: Scenario) -> dict:
    doc: dict[str, Any] = {
        "id": s.name,
        "dim": s.dim,
        "state": _pairs(s.state.amplitudes),
        "observables": {n: [_pairs(row) for row in o.matrix] for n, o in s.observables.items()},
        "contexts": [list(c) for c in s.contexts],
    }
    if s.temporal_sequence is not None:
        steps = []
        for n, u in s.temporal_sequence:
            step: dict[str, Any] = {"observable": n}
            if u is not None:
                step["unitary"] = [_pairs(row) for row in np.asarray(u)]
            steps.append(step)
        doc["sequence"] = steps
    ineq: dict[str, Any] = {
        "terms": [{"coeff": t.coeff, "names": list(t.names)} for t in s.inequality.terms],
        "direction": s.inequality.direction,
    }
    if s.inequality.classical_bound is not None:
        ineq["classical_bound"] = s.inequality.classical_bound
    doc["inequality"] = ineq
    if s.metadata:
        doc["metadata"] = dict(s.metadata)
    return doc


def dump_scenario(s: Scenario, indent: Optional[int] = 1) -> str:
    return json.dumps(scenario_to_document(s), indent=indent) + "\n"
