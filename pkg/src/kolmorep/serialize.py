"""JSON and CSV codecs for the package's file formats.

Schemas (all fractions are emitted as lowest-term strings, so every artifact
re-parses to exactly the value that produced it):

* matrix          {"dim": n, "entries": [[[re, im], ...], ...]}  (row-major)
* vector          {"n": 4, "entries": [{"I": [1, 3], "p": "3/8"}, ...]}
* weights         {"n": 2, "weights": [{"eps": [1, 0], "p": "1/2"}, ...]}
* suite           {"dim": 4, "density": <matrix>,
                   "measurements": [{"name": "A", "projector": <matrix>}, ...]}
* distribution    {"contexts": [{"members": ["A", "B"], "weight": "1/4"}, ...]}
* space           {"points": [{"id": "...", "mass": "3/32"}, ...],
                   "events": {"A": ["id", ...], ...}}

Values in "p"/"weight"/"mass" positions may be fraction strings, decimal
strings, integers, or floats; floats are identified with exact fractions
under the active rationalization policy. In vector entries, a bare integer
"I" is accepted as shorthand for a one-element set.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Mapping

import numpy as np

from .censorship import CensoredSpace, MeasurementSuite
from .errors import SchemaError
from .polytope import ConjunctionScheme, CorrelationVector, KolmogorovSpace
from .quantum import Operator
from .rational import DEFAULT_POLICY, RationalizationPolicy, format_rational, parse_rational
from .simulation import PRNG_ALGORITHM, FrequencyEstimate, TrialRecord


def _expect(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{where}: key {key!r} must be {kind.__name__}")
    return value


# --- matrices -------------------------------------------------------------

def matrix_to_json(op: Operator) -> dict:
    entries = [
        [[float(z.real), float(z.imag)] for z in row] for row in op.entries
    ]
    return {"dim": op.dim, "entries": entries}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    dim = _expect(obj, "dim", int, where)
    rows = _expect(obj, "entries", list, where)
    if dim < 1 or len(rows) != dim:
        raise SchemaError(f"{where}: expected {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise SchemaError(f"{where}: row {r} must hold {dim} [re, im] pairs")
        for c, cell in enumerate(row):
            if not isinstance(cell, list) or len(cell) != 2:
                raise SchemaError(f"{where}: entry ({r},{c}) must be an [re, im] pair")
            out[r, c] = complex(float(cell[0]), float(cell[1]))
    return out


# --- correlation vectors --------------------------------------------------

def vector_to_json(vec: CorrelationVector) -> dict:
    return {
        "n": vec.scheme.n,
        "entries": [
            {"I": sorted(s), "p": format_rational(v)} for s, v in vec.items()
        ],
    }


def vector_from_json(
    obj, policy: RationalizationPolicy = DEFAULT_POLICY
) -> CorrelationVector:
    n = _expect(obj, "n", int, "vector")
    entries = _expect(obj, "entries", list, "vector")
    values = {}
    for k, entry in enumerate(entries):
        where = f"vector entry {k}"
        raw = _expect(entry, "I", None, where)
        if isinstance(raw, int):
            raw = [raw]
        if not isinstance(raw, list) or not raw:
            raise SchemaError(f"{where}: 'I' must be a non-empty index list")
        key = frozenset(int(i) for i in raw)
        if key in values:
            raise SchemaError(f"{where}: duplicate index set {sorted(key)}")
        values[key] = parse_rational(_expect(entry, "p", None, where), policy)
    scheme = ConjunctionScheme(n, frozenset(values))
    return CorrelationVector(scheme, values)


# --- vertex weights -------------------------------------------------------

def weights_to_json(n: int, weights: Mapping) -> dict:
    ordered = sorted(weights.items())
    return {
        "n": n,
        "weights": [
            {"eps": list(bits), "p": format_rational(w)} for bits, w in ordered
        ],
    }


def weights_from_json(obj, policy: RationalizationPolicy = DEFAULT_POLICY):
    n = _expect(obj, "n", int, "weights")
    items = _expect(obj, "weights", list, "weights")
    out = {}
    for k, entry in enumerate(items):
        where = f"weights entry {k}"
        eps = _expect(entry, "eps", list, where)
        bits = tuple(int(b) for b in eps)
        out[bits] = parse_rational(_expect(entry, "p", None, where), policy)
    return n, out


# --- suites and distributions ----------------------------------------------

def suite_to_json(suite: MeasurementSuite) -> dict:
    return {
        "dim": suite.dim,
        "density": matrix_to_json(suite.density),
        "measurements": [
            {"name": m.name, "projector": matrix_to_json(m.projector)}
            for m in suite.measurements
        ],
    }


def suite_from_json(obj) -> MeasurementSuite:
    dim = _expect(obj, "dim", int, "suite")
    density = Operator(matrix_from_json(_expect(obj, "density", dict, "suite"), "density"), tags=("density",))
    if density.dim != dim:
        raise SchemaError(f"suite: density dim {density.dim} does not match {dim}")
    measurements = []
    for k, entry in enumerate(_expect(obj, "measurements", list, "suite")):
        where = f"measurement {k}"
        name = _expect(entry, "name", str, where)
        proj = Operator(
            matrix_from_json(_expect(entry, "projector", dict, where), where),
            tags=("projector",),
        )
        measurements.append((name, proj))
    return MeasurementSuite.make(density, measurements)


def distribution_to_json(suite: MeasurementSuite, weights: Mapping) -> dict:
    ordered = sorted(weights.items(), key=lambda kv: sorted(kv[0]))
    return {
        "contexts": [
            {
                "members": [suite.name_of(i) for i in sorted(j)],
                "weight": format_rational(w),
            }
            for j, w in ordered
        ]
    }


def distribution_from_json(
    obj, suite: MeasurementSuite, policy: RationalizationPolicy = DEFAULT_POLICY
) -> dict:
    """Raw context weights keyed by index sets; validate separately."""
    out = {}
    for k, entry in enumerate(_expect(obj, "contexts", list, "distribution")):
        where = f"context {k}"
        members = _expect(entry, "members", list, where)
        if not members:
            raise SchemaError(f"{where}: members must be non-empty")
        try:
            key = frozenset(suite.index(name) for name in members)
        except Exception as exc:
            raise SchemaError(f"{where}: {exc}") from exc
        if key in out:
            raise SchemaError(f"{where}: duplicate context {sorted(members)}")
        out[key] = parse_rational(_expect(entry, "weight", None, where), policy)
    return out


# --- probability spaces ----------------------------------------------------

def space_to_json(space: KolmogorovSpace) -> dict:
    return {
        "points": [
            {"id": pid, "mass": format_rational(space.mass[pid])} for pid in space.points
        ],
        "events": {
            name: sorted(members) for name, members in sorted(space.events.items())
        },
    }


def space_from_json(obj, policy: RationalizationPolicy = DEFAULT_POLICY) -> KolmogorovSpace:
    points = []
    mass = {}
    for k, entry in enumerate(_expect(obj, "points", list, "space")):
        where = f"space point {k}"
        pid = _expect(entry, "id", str, where)
        points.append(pid)
        mass[pid] = parse_rational(_expect(entry, "mass", None, where), policy)
    events_obj = _expect(obj, "events", dict, "space")
    events = {
        name: frozenset(str(p) for p in members) for name, members in events_obj.items()
    }
    return KolmogorovSpace(tuple(points), mass, events)


def censored_space_to_json(censored: CensoredSpace) -> dict:
    out = space_to_json(censored.space)
    out["outcome_events"] = dict(sorted(censored.outcome_events.items()))
    out["switch_events"] = dict(sorted(censored.switch_events.items()))
    return out


# --- simulation output -----------------------------------------------------

def records_to_csv(records: Iterable[TrialRecord], seed: int) -> str:
    """CSV stream with a reproducibility header comment line."""
    buf = io.StringIO()
    buf.write(f"# prng={PRNG_ALGORITHM} seed={seed}\n")
    writer = csv.writer(buf)
    writer.writerow(["trial", "context", "bits"])
    for rec in records:
        writer.writerow(
            [rec.trial, "+".join(rec.context), "".join(str(b) for b in rec.bits)]
        )
    return buf.getvalue()


def estimates_to_json(estimates: Iterable[FrequencyEstimate], seed: int, trials: int) -> dict:
    return {
        "prng": PRNG_ALGORITHM,
        "seed": seed,
        "trials": trials,
        "estimates": [
            {
                "outcomes": list(e.outcomes),
                "performed": list(e.performed),
                "frequency": e.frequency,
                "stderr": e.stderr,
            }
            for e in estimates
        ],
    }


def queries_from_json(obj) -> list:
    out = []
    for k, entry in enumerate(_expect(obj, "queries", list, "queries")):
        where = f"query {k}"
        outcomes = entry.get("outcomes", []) if isinstance(entry, dict) else None
        performed = entry.get("performed", []) if isinstance(entry, dict) else None
        if outcomes is None or performed is None:
            raise SchemaError(f"{where}: expected an object with 'outcomes'/'performed'")
        if not isinstance(outcomes, list) or not isinstance(performed, list):
            raise SchemaError(f"{where}: 'outcomes' and 'performed' must be name lists")
        out.append((tuple(map(str, outcomes)), tuple(map(str, performed))))
    return out
