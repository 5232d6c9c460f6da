"""Analytic noise models applied at the distribution level.

A chaotic circuit symmetrizes physical errors toward a global depolarizing
channel, so noise is modeled as a convex mix of the ideal distribution with
the uniform one instead of evolving a density matrix. Readout error is a
tensor product of per-qubit 2x2 confusion matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .validation import check_prob_dist, check_unit_interval, dist_qubit_count

#: demo readout flip probability; real devices are configured explicitly
DEFAULT_READOUT_FLIP = 0.03


def depolarize_dist(p_ideal, epsilon) -> np.ndarray:
    """Mix a distribution with the uniform one: (1-eps) * p + eps / N."""
    p_ideal = check_prob_dist(p_ideal)
    epsilon = check_unit_interval(epsilon, "epsilon")
    return (1.0 - epsilon) * p_ideal + epsilon / p_ideal.size


def depolarized_state_fidelity(epsilon, n) -> float:
    """Fidelity of the globally depolarized state against its pure target.

    F = 1 - eps * (1 - 1/2^n); equivalently 1 - F = (1 - F_in)(1 - 1/N)
    with F_in = 1 - eps.
    """
    epsilon = check_unit_interval(epsilon, "epsilon")
    return 1.0 - epsilon * (1.0 - 0.5 ** n)


@dataclass(frozen=True)
class ReadoutModel:
    """Per-qubit readout confusion: flips[q-1] = (p01, p10).

    p01 is the probability of reading 1 given true 0, p10 of reading 0
    given true 1. Each probability must lie in [0, 0.5].
    """

    flips: np.ndarray

    def __post_init__(self):
        flips = np.asarray(self.flips, dtype=float)
        if flips.ndim != 2 or flips.shape[1] != 2 or flips.shape[0] < 1:
            raise ValueError(f"flips must have shape (n, 2), got {flips.shape}")
        if flips.min() < 0.0 or flips.max() > 0.5:
            raise ValueError("flip probabilities must lie in [0, 0.5]")
        object.__setattr__(self, "flips", flips)

    @property
    def n_qubits(self) -> int:
        return self.flips.shape[0]

    @classmethod
    def uniform(cls, n_qubits, p01=DEFAULT_READOUT_FLIP, p10=None) -> "ReadoutModel":
        """Same confusion on every qubit (symmetric unless p10 given)."""
        if p10 is None:
            p10 = p01
        return cls(np.tile([float(p01), float(p10)], (n_qubits, 1)))

    def confusion_matrix(self, q) -> np.ndarray:
        """Column-stochastic 2x2 matrix mapping true to read probabilities."""
        p01, p10 = self.flips[q - 1]
        return np.array([[1.0 - p01, p10], [p01, 1.0 - p10]])

    def to_dict(self) -> dict:
        return {"flips": self.flips.tolist()}

    @classmethod
    def from_dict(cls, data) -> "ReadoutModel":
        return cls(np.asarray(data["flips"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text) -> "ReadoutModel":
        return cls.from_dict(json.loads(text))


def apply_readout_error(p, model: ReadoutModel) -> np.ndarray:
    """Push a distribution through the tensor product of per-qubit confusions."""
    p = check_prob_dist(p)
    n = dist_qubit_count(p)
    if model.n_qubits != n:
        raise ValueError(f"readout model covers {model.n_qubits} qubits, distribution has {n}")
    out = p.copy()
    for q in range(1, n + 1):
        m = model.confusion_matrix(q)
        view = out.reshape(1 << (q - 1), 2, -1)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
        view[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    return out / out.sum()
