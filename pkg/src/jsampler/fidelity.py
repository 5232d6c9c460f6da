"""State-fidelity and information-fidelity estimators plus distribution metrics.

The Monte-Carlo state-fidelity estimator importance-samples Pauli operators
with probability proportional to the squared characteristic function of the
target state, then averages ratio estimators chi_noisy / chi_target. With
exact expectations and a noiseless channel every ratio is 1.

The information fidelity compares the measured cross-entropy against two
analytic anchors of the ideal distribution: its Shannon entropy and the
uniform average of the per-outcome information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import StateVector
from .validation import (
    PAULI_LABELS,
    as_rng,
    check_pauli_string,
    check_prob_dist,
    check_unit_interval,
)

#: floor applied to ideal probabilities before taking logarithms
PROB_FLOOR = 1e-15

# Per-qubit map from density-matrix entries (2x + y ordering of rho[x, y])
# to traces against I, X, Y, Z.
_PAULI_TRANSFORM = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1j, -1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class FidelityEstimate:
    """Monte-Carlo fidelity estimate; value is deliberately not clipped to [0, 1]."""

    value: float
    std_error: float
    n_paulis: int
    shots: int | None


@dataclass(frozen=True)
class DistSummary:
    """The four per-distribution characterizations used by the sampling experiments."""

    ave: float
    std: float
    shannon: float
    mean_index: float


def state_fidelity_exact(target: StateVector, state: StateVector, epsilon=0.0) -> float:
    """Overlap fidelity of `state` (optionally depolarized) with a pure target.

    Pure vs pure is |<target|state>|^2; with depolarizing strength epsilon the
    prepared state is the convex mix and the fidelity picks up an epsilon/N term.
    """
    if target.n != state.n:
        raise ValueError(f"qubit counts differ: {target.n} vs {state.n}")
    epsilon = check_unit_interval(epsilon, "epsilon")
    overlap = abs(target.inner(state)) ** 2
    return (1.0 - epsilon) * overlap + epsilon / (1 << target.n)


def pauli_expectation(state: StateVector, pauli, shots=None, seed=None) -> float:
    """<state|P|state> for a Pauli label string, exact or from simulated shots."""
    pauli = check_pauli_string(pauli, state.n)
    if shots is None:
        transformed = state.copy().apply_pauli(pauli)
        return float(state.inner(transformed).real)
    signs, probs = _measurement_signs(state, pauli)
    rng = as_rng(seed)
    counts = rng.multinomial(int(shots), probs / probs.sum())
    return float((signs * counts).sum() / float(shots))


def _measurement_signs(state: StateVector, pauli, epsilon=0.0):
    """Outcome signs and probabilities of a computational readout measuring `pauli`.

    X and Y qubits are rotated into the Z basis first; the outcome sign is the
    parity of the bits on non-identity qubits. Depolarizing mixes the readout
    distribution with uniform.
    """
    rotated = state.copy()
    n = state.n
    for q, label in enumerate(pauli, start=1):
        if label == "X":
            rotated.apply_h(q)
        elif label == "Y":
            rotated.apply_u(q, 0.0, -np.pi / 2.0)
            rotated.apply_h(q)
    probs = rotated.probabilities()
    if epsilon:
        probs = (1.0 - epsilon) * probs + epsilon / probs.size
    mask = 0
    for q, label in enumerate(pauli, start=1):
        if label != "I":
            mask |= 1 << (n - q)
    indices = np.arange(probs.size)
    parity = np.zeros(probs.size, dtype=int)
    while mask:
        bit = mask & (-mask)
        parity ^= (indices & bit) > 0
        mask ^= bit
    signs = 1.0 - 2.0 * parity
    return signs, probs


def pauli_traces(matrix) -> np.ndarray:
    """Tr(M P) for every n-qubit Pauli string P, as a flat length-4^n array.

    The flat index is base-4 with qubit 1 as the most significant digit and
    digit order I, X, Y, Z; index 0 is the identity string. Cost O(n 4^n).
    """
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    if matrix.shape != (dim, dim) or dim & (dim - 1) or dim < 2:
        raise ValueError(f"expected a 2^n x 2^n matrix, got shape {matrix.shape}")
    n = dim.bit_length() - 1
    # Pair each qubit's row and column bits into one axis of size 4.
    tensor = matrix.reshape((2,) * (2 * n))
    order = [axis for q in range(n) for axis in (q, n + q)]
    tensor = tensor.transpose(order).reshape((4,) * n)
    for axis in range(n):
        tensor = np.moveaxis(np.tensordot(_PAULI_TRANSFORM, tensor, axes=(1, axis)), 0, axis)
    return tensor.reshape(-1)


def pauli_index_to_string(index, n) -> str:
    """Decode a flat base-4 Pauli index (qubit 1 = most significant digit)."""
    labels = []
    for _ in range(n):
        labels.append(PAULI_LABELS[index % 4])
        index //= 4
    return "".join(reversed(labels))


def dfe_estimate(
    target: StateVector,
    prepared: StateVector | None = None,
    epsilon=0.0,
    n_paulis=8,
    shots=None,
    seed=None,
) -> FidelityEstimate:
    """Direct fidelity estimation of a depolarized `prepared` state against `target`.

    Samples `n_paulis` Pauli strings (with replacement) proportional to the
    target's squared Pauli weights, evaluates each expectation on the noisy
    state (exactly, or from `shots` simulated measurements) and returns the
    mean ratio estimator with its standard error.
    """
    if prepared is None:
        prepared = target
    if target.n != prepared.n:
        raise ValueError(f"qubit counts differ: {target.n} vs {prepared.n}")
    if target.n > 10:
        raise ValueError("direct fidelity estimation enumerates 4^n Paulis; n > 10 unsupported")
    n_paulis = int(n_paulis)
    if n_paulis < 1:
        raise ValueError(f"need at least one Pauli sample, got {n_paulis}")
    epsilon = check_unit_interval(epsilon, "epsilon")
    rng = as_rng(seed)

    n = target.n
    root_dim = np.sqrt(1 << n)
    chi_target = pauli_traces(np.outer(target.amps, target.amps.conj())).real / root_dim
    weights = np.clip(chi_target**2, 0.0, None)
    weights /= weights.sum()
    sampled = rng.choice(weights.size, size=n_paulis, p=weights)

    ratios = np.empty(n_paulis)
    for i, k in enumerate(sampled):
        if k == 0:
            ratios[i] = 1.0  # identity: trace preserved by any channel
            continue
        pauli = pauli_index_to_string(int(k), n)
        if shots is None:
            expect = pauli_expectation(prepared, pauli) * (1.0 - epsilon)
        else:
            signs, probs = _measurement_signs(prepared, pauli, epsilon=epsilon)
            counts = rng.multinomial(int(shots), probs / probs.sum())
            expect = float((signs * counts).sum() / float(shots))
        ratios[i] = (expect / root_dim) / chi_target[k]

    value = float(ratios.mean())
    std_error = float(ratios.std(ddof=1) / np.sqrt(n_paulis)) if n_paulis > 1 else 0.0
    return FidelityEstimate(value, std_error, n_paulis, None if shots is None else int(shots))


def _information(p_ideal) -> np.ndarray:
    """Per-outcome information log2(1/p), with p floored to avoid infinities."""
    return -np.log2(np.maximum(np.asarray(p_ideal, dtype=float), PROB_FLOOR))


def shannon_entropy(p) -> float:
    """-sum p log2 p in bits, with 0 log 0 = 0."""
    p = check_prob_dist(p)
    return float((p * _information(p)).sum())


def surprise_moments(p_ideal) -> tuple[float, float]:
    """(S_ideal, S_unif): information averaged under p_ideal and uniformly.

    S_ideal is the Shannon entropy; S_unif over-weights rare outcomes and is
    never smaller, so the pair anchors the cross-entropy fidelity scale.
    """
    p_ideal = check_prob_dist(p_ideal)
    info = _information(p_ideal)
    return float((p_ideal * info).sum()), float(info.mean())


def cross_entropy(p_meas, p_ideal) -> float:
    """Information of the ideal outcomes averaged under the measured distribution."""
    p_meas = check_prob_dist(p_meas)
    p_ideal = check_prob_dist(p_ideal)
    if p_meas.size != p_ideal.size:
        raise ValueError("distributions must have equal length")
    return float((p_meas * _information(p_ideal)).sum())


def information_fidelity(p_meas, p_ideal) -> float:
    """Cross-entropy fidelity (S_unif - H_c) / (S_unif - S_ideal).

    Equals 1 when p_meas matches p_ideal, 0 when p_meas is uniform, and
    1 - eps when p_meas is the depolarized ideal. Undefined for a uniform
    ideal distribution.
    """
    s_ideal, s_unif = surprise_moments(p_ideal)
    if s_unif - s_ideal < 1e-12:
        raise ValueError("ideal distribution is uniform; information fidelity is degenerate")
    return (s_unif - cross_entropy(p_meas, p_ideal)) / (s_unif - s_ideal)


def l1_error(p_meas, p_ideal) -> float:
    """L1 distance between distributions divided by N."""
    p_meas = check_prob_dist(p_meas)
    p_ideal = check_prob_dist(p_ideal)
    if p_meas.size != p_ideal.size:
        raise ValueError("distributions must have equal length")
    return float(np.abs(p_meas - p_ideal).mean())


def dist_summary(p) -> DistSummary:
    """Ave (always 1/N), population Std of p(x), Shannon entropy, mean index."""
    p = check_prob_dist(p)
    return DistSummary(
        ave=1.0 / p.size,
        std=float(p.std()),
        shannon=shannon_entropy(p),
        mean_index=float((np.arange(p.size) * p).sum()),
    )
