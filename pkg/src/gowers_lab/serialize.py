"""JSON and CSV round-tripping for every public object.

Canonical output is deterministic: sorted keys, fixed separators, no
whitespace variance, numpy scalars converted to native types.  Floats
are emitted in Python's shortest round-trip form, which re-reads to the
identical double.
"""
from __future__ import annotations

import json

import numpy as np

from .cyclic import GroupFunction, PhaseSum, quasiperiodic
from .errors import InvalidConfigurationError
from .partitions import Partition
from .structure import TRACE_COLUMNS
from .uap import CertifiedFunction, UapCertificate
from .vdw import Colouring


def _pyify(obj):
    if isinstance(obj, dict):
        return {k: _pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_pyify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [float(np.real(obj)), float(np.imag(obj))]
    return obj


def canonical_dumps(obj) -> str:
    return json.dumps(_pyify(obj), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# functions


def function_to_json(f: GroupFunction) -> dict:
    return {
        "n": f.n,
        "re": [float(v) for v in f.values.real],
        "im": [float(v) for v in f.values.imag],
    }


def function_from_json(obj: dict) -> GroupFunction:
    """Accepts the dense {"n","re","im"} form, the indicator shorthand
    {"n","set"}, and the quasiperiodic shorthand {"n","terms"}."""
    if "re" in obj:
        n = int(obj["n"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros(n)), dtype=float)
        if re.shape != (n,) or im.shape != (n,):
            raise InvalidConfigurationError("re/im length must equal n")
        return GroupFunction(n, re + 1j * im)
    if "set" in obj:
        return GroupFunction.indicator(int(obj["n"]), obj["set"])
    if "terms" in obj:
        return phase_sum_from_json(obj).func
    raise InvalidConfigurationError("unrecognized function JSON shape")


def phase_sum_from_json(obj: dict) -> PhaseSum:
    n = int(obj["n"])
    terms = []
    for t in obj["terms"]:
        c = t["c"]
        terms.append((complex(c[0], c[1]), tuple(int(a) for a in t["poly"])))
    return quasiperiodic(n, terms)


def phase_sum_to_json(ps: PhaseSum) -> dict:
    return {
        "n": ps.n,
        "terms": [
            {"c": [float(np.real(c)), float(np.imag(c))], "poly": list(p)}
            for c, p in ps.terms
        ],
    }


# ---------------------------------------------------------------------------
# partitions and colourings


def partition_to_json(p: Partition) -> dict:
    return {"n": p.n, "labels": [int(v) for v in p.labels]}


def partition_from_json(obj: dict) -> Partition:
    return Partition(int(obj["n"]), np.asarray(obj["labels"], dtype=np.int64))


def colouring_to_json(c: Colouring) -> dict:
    return {"n": c.n, "m": c.m, "colours": list(c.colours)}


def colouring_from_json(obj: dict) -> Colouring:
    return Colouring(int(obj["n"]), int(obj["m"]), tuple(int(v) for v in obj["colours"]))


# ---------------------------------------------------------------------------
# certificates


def certificate_to_json(cf: CertifiedFunction) -> dict:
    """Recursive tree; structural sharing is expanded on output."""
    cert = cf.cert
    out = {
        "order": cert.order,
        "M": float(cert.bound),
        "func": function_to_json(cf.func),
    }
    if cert.order == 0:
        out["value"] = [float(np.real(cert.value)), float(np.imag(cert.value))]
        return out
    out["weights"] = [float(w) for w in cert.weights]
    out["columns"] = [function_to_json(g) for g in cert.columns]
    if cert.order == 1:
        coeff = np.asarray(cert.coeffs)
        out["coeffs"] = [
            [[float(c.real), float(c.imag)] for c in row] for row in coeff
        ]
    else:
        out["coeffs"] = [
            [certificate_to_json(c) for c in row] for row in cert.coeffs
        ]
    return out


def certificate_from_json(obj: dict) -> CertifiedFunction:
    order = int(obj["order"])
    bound = float(obj["M"])
    func = function_from_json(obj["func"])
    if order == 0:
        value = complex(obj["value"][0], obj["value"][1])
        return CertifiedFunction(func, UapCertificate(0, bound, value=value))
    weights = np.asarray(obj["weights"], dtype=float)
    columns = tuple(function_from_json(g) for g in obj["columns"])
    if order == 1:
        coeffs = np.array(
            [[complex(c[0], c[1]) for c in row] for row in obj["coeffs"]],
            dtype=np.complex128,
        )
    else:
        coeffs = tuple(
            tuple(certificate_from_json(c) for c in row) for row in obj["coeffs"]
        )
    cert = UapCertificate(order, bound, weights=weights, columns=columns, coeffs=coeffs)
    return CertifiedFunction(func, cert)


# ---------------------------------------------------------------------------
# CSV


def trace_to_csv(trace) -> str:
    lines = [",".join(TRACE_COLUMNS)]
    for entry in trace:
        lines.append(",".join(
            repr(v) if isinstance(v, float) else str(v) for v in entry.as_row()
        ))
    return "\n".join(lines) + "\n"


def empirical_c_to_csv(results) -> str:
    lines = ["N,k,delta,c_min,witness_set"]
    for r in results:
        witness = " ".join(str(v) for v in r.witness)
        lines.append(f"{r.n},{r.k},{repr(float(r.delta))},{repr(float(r.c_min))},{witness}")
    return "\n".join(lines) + "\n"
