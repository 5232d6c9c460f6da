"""Single-qubit entanglement measures and their Haar-averaged references.

All measures reduce the state one chain qubit at a time: the purity of each
2x2 reduced density matrix feeds the average bipartite entanglement Q, the
second Renyi entropy, and the von Neumann entanglement entropy. Reference
values come from the closed-form Haar average of Q and the Haar-averaged
subsystem entropy for a 2 x 2^(n-1) bipartition, with a Gaussian-vector
sampler as the brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .statevector import StateVector, rdm_eigenvalues
from .validation import as_rng, check_qubit_count


def purity(rdm) -> float:
    """Tr(rho^2) of a single-qubit reduced density matrix; 0.5 mixed, 1 pure."""
    rdm = np.asarray(rdm)
    return float(np.trace(rdm @ rdm).real)


def qubit_purities(state: StateVector) -> np.ndarray:
    """Exact reduced-state purity of every chain qubit."""
    return np.array(
        [purity(state.reduced_density_matrix(q)) for q in range(1, state.n + 1)]
    )


def _require_chain(state: StateVector) -> None:
    if state.n < 2:
        raise ValueError("entanglement measures need at least 2 qubits")


def q_measure(state: StateVector) -> float:
    """Average bipartite entanglement Q = 2(1 - mean purity)."""
    _require_chain(state)
    return 2.0 * (1.0 - qubit_purities(state).mean())


def renyi2(state: StateVector) -> float:
    """Average second Renyi entropy of the single-qubit reductions, in bits."""
    _require_chain(state)
    return float(-np.log2(qubit_purities(state)).mean())


def _entropy_bits(eig_lo, eig_hi) -> float:
    total = 0.0
    for lam in (eig_lo, eig_hi):
        if lam > 1e-15:
            total -= lam * np.log2(lam)
    return total


def entanglement_entropy(state: StateVector) -> float:
    """Average von Neumann entropy of the single-qubit reductions, in bits."""
    _require_chain(state)
    total = 0.0
    for q in range(1, state.n + 1):
        lo, hi = rdm_eigenvalues(state.reduced_density_matrix(q))
        total += _entropy_bits(max(lo, 0.0), hi)
    return total / state.n


@dataclass(frozen=True)
class EntanglementReport:
    """Per-qubit purities and the three derived entanglement measures."""

    gammas: np.ndarray
    gamma_bar: float
    q: float
    s2: float
    se: float


def entanglement_report(state: StateVector) -> EntanglementReport:
    """All purity-based measures of a state in one pass."""
    _require_chain(state)
    gammas = qubit_purities(state)
    return EntanglementReport(
        gammas=gammas,
        gamma_bar=float(gammas.mean()),
        q=2.0 * (1.0 - float(gammas.mean())),
        s2=float(-np.log2(gammas).mean()),
        se=entanglement_entropy(state),
    )


def entanglement_report_tomographic(state: StateVector, shots, seed=None) -> EntanglementReport:
    """Entanglement measures from shot-based single-qubit tomography.

    Converges to entanglement_report as shots grows; the repaired tomographic
    reductions are always physical, so purities stay in [0.5, 1].
    """
    _require_chain(state)
    rng = as_rng(seed)
    gammas = np.empty(state.n)
    se_total = 0.0
    for q in range(1, state.n + 1):
        rdm = state.tomographic_rdm(q, shots, rng)
        gammas[q - 1] = purity(rdm)
        lo, hi = rdm_eigenvalues(rdm)
        se_total += _entropy_bits(max(lo, 0.0), hi)
    return EntanglementReport(
        gammas=gammas,
        gamma_bar=float(gammas.mean()),
        q=2.0 * (1.0 - float(gammas.mean())),
        s2=float(-np.log2(gammas).mean()),
        se=se_total / state.n,
    )


def haar_q(n) -> float:
    """Haar average of Q: (N - 2) / (N + 1) with N = 2^n."""
    n = check_qubit_count(n)
    dim = 1 << n
    return (dim - 2.0) / (dim + 1.0)


def page_entropy(dim_a, dim_b) -> float:
    """Haar-averaged entanglement entropy in bits of a dim_a x dim_b bipartition.

    Valid for dim_a <= dim_b:  [sum_{k=dim_b+1}^{dim_a dim_b} 1/k
    - (dim_a - 1) / (2 dim_b)] / ln 2.
    """
    dim_a, dim_b = int(dim_a), int(dim_b)
    if dim_a < 1 or dim_b < 1:
        raise ValueError("subsystem dimensions must be >= 1")
    if dim_a > dim_b:
        raise ValueError(f"formula requires dim_a <= dim_b, got {dim_a} > {dim_b}")
    ks = np.arange(dim_b + 1, dim_a * dim_b + 1, dtype=float)
    return float(((1.0 / ks).sum() - (dim_a - 1.0) / (2.0 * dim_b)) / np.log(2.0))


class LinearizedRenyi(NamedTuple):
    slope_intercept_a: float
    slope_b: float
    value: float


def linearized_renyi(gamma_bar, gamma0) -> LinearizedRenyi:
    """Tangent-line approximation of the Renyi entropy about a reference purity.

    Returns (a, b, a - b * gamma_bar) with a = log2(1/gamma0) + 1/ln2 and
    b = 1/(gamma0 ln2); gamma0 = 0.7 gives a, b close to the Q-measure's (2, 2).
    """
    gamma0 = float(gamma0)
    if not 0.0 < gamma0 <= 1.0:
        raise ValueError(f"reference purity must be in (0, 1], got {gamma0}")
    a = np.log2(1.0 / gamma0) + 1.0 / np.log(2.0)
    b = 1.0 / (gamma0 * np.log(2.0))
    return LinearizedRenyi(float(a), float(b), float(a - b * float(gamma_bar)))


def haar_random_state(n, seed=None) -> StateVector:
    """Haar-random pure state: normalized vector of i.i.d. complex Gaussians."""
    n = check_qubit_count(n)
    rng = as_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class HaarReferenceSample:
    """Entanglement measures evaluated on a batch of Haar-random states."""

    q: np.ndarray
    s2: np.ndarray
    se: np.ndarray


def haar_reference_sample(n, count, seed=None) -> HaarReferenceSample:
    """Monte-Carlo oracle for the Haar averages of Q, S2 and Se."""
    if n > 8:
        raise ValueError("Haar reference sampling is capped at n <= 8")
    count = int(count)
    if count < 1:
        raise ValueError(f"need at least one draw, got {count}")
    rng = as_rng(seed)
    q = np.empty(count)
    s2 = np.empty(count)
    se = np.empty(count)
    for i in range(count):
        report = entanglement_report(haar_random_state(n, rng))
        q[i], s2[i], se[i] = report.q, report.s2, report.se
    return HaarReferenceSample(q=q, s2=s2, se=se)
