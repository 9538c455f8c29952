"""Run-wide configuration: tolerances, budgets, and seeded RNG streams.

All randomness in the package flows through derive_rng so that a single
top-level seed plus a component label reproduces every draw exactly,
independent of call order.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, asdict

import numpy as np

DEFAULT_TOL = 1e-9

# Step budget for the energy-increment driver.
DEFAULT_DRIVER_BUDGET = 10 ** 6

# Node budget for recursive certificate constructions.
DEFAULT_CERT_NODE_BUDGET = 200_000

# Decimal-digit guard for the tower-type recurrence bounds.
DEFAULT_DIGIT_LIMIT = 10 ** 6

VERSION = "0.1.0"


def _label_entropy(label: str) -> int:
    # stable across platforms/processes; Python's hash() is salted, so no
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(seed: int, label: str, *indices: int) -> np.random.Generator:
    """Deterministic child generator for (seed, component label, counters)."""
    ss = np.random.SeedSequence([int(seed), _label_entropy(label), *map(int, indices)])
    return np.random.default_rng(ss)


def thread_cap(requested: int | None = None) -> int:
    """Worker cap honouring the GOWERS_LAB_THREADS environment variable.

    The current engines are serial; the knob exists so callers and scripts
    can pass it through without interface churn.
    """
    env = os.environ.get("GOWERS_LAB_THREADS")
    cap = None
    if env is not None:
        try:
            cap = max(1, int(env))
        except ValueError:
            cap = None
    if requested is None:
        return cap if cap is not None else 1
    return min(requested, cap) if cap is not None else requested


# Cap on Bernstein polynomial degrees in certified approximation.
DEFAULT_POLY_DEGREE = 64

# Node budget for the van der Waerden backtracking search.
DEFAULT_VDW_NODES = 10 ** 9


@dataclass
class RunConfig:
    """Bundle of knobs shared by the CLI and the high-level drivers."""

    seed: int = 0
    tol: float = DEFAULT_TOL
    driver_steps: int = DEFAULT_DRIVER_BUDGET
    cert_nodes: int = DEFAULT_CERT_NODE_BUDGET
    poly_degree: int = DEFAULT_POLY_DEGREE
    vdw_nodes: int = DEFAULT_VDW_NODES
    digit_limit: int = DEFAULT_DIGIT_LIMIT
    threads: int = field(default_factory=thread_cap)

    def digest(self) -> str:
        # threads comes from the environment and must not perturb
        # byte-identical outputs, so it stays out of the digest
        payload = asdict(self)
        payload.pop("threads")
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
