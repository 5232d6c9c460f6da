"""Input validation helpers shared across the package.

All qubit indices in the public API are 1-based: qubit 1 is the top of the
chain and maps to the most significant bit of a basis-state index.
"""

from __future__ import annotations

import numpy as np

# Dense 2^n simulation stays interactive on a laptop up to this size.
MAX_QUBITS = 14

PAULI_LABELS = "IXYZ"


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (e.g. a trace that must be real is not)."""


def check_qubit_count(n) -> int:
    n = int(n)
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    return n


def check_qubit_index(q, n) -> int:
    q = int(q)
    if not 1 <= q <= n:
        raise IndexError(f"qubit index must be in [1, {n}], got {q}")
    return q


def check_prob_dist(p) -> np.ndarray:
    """Validate and return a probability vector of length 2^n."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or p.size & (p.size - 1):
        raise ValueError(f"distribution length must be a power of two, got shape {p.shape}")
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()}")
    total = p.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"probabilities sum to {total}, expected 1")
    return p


def dist_qubit_count(p) -> int:
    return int(np.asarray(p).size).bit_length() - 1


def check_pauli_string(pauli, n) -> str:
    pauli = str(pauli).upper()
    if len(pauli) != n:
        raise ValueError(f"Pauli string length {len(pauli)} does not match {n} qubits")
    bad = set(pauli) - set(PAULI_LABELS)
    if bad:
        raise ValueError(f"invalid Pauli labels {sorted(bad)}; allowed: I, X, Y, Z")
    return pauli


def check_unit_interval(value, name) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value


def as_rng(seed) -> np.random.Generator:
    """Accept a seed, None, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
