"""Dense statevector representation and bit-indexed gate kernels.

Amplitudes are stored as a flat complex array of length 2^n. Qubit q
(1-based) maps to bit position n-q, so qubit 1 is the most significant bit
of the basis-state index. Gate kernels never build the 2^n x 2^n operator;
a single-qubit gate is applied by splitting the index into
(leading bits, target bit, trailing bits) via a reshape, which also lets
every kernel act on a batch of states stored as trailing axes.
"""

from __future__ import annotations

import numpy as np

from .validation import (
    as_rng,
    check_pauli_string,
    check_prob_dist,
    check_qubit_count,
    check_qubit_index,
)

DEFAULT_SHOTS = 8000  # shots per measured circuit used throughout

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def u_matrix(theta, phi) -> np.ndarray:
    """2x2 matrix of the sampler's native rotation: z-rotation after y-rotation."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    zm, zp = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    return np.array([[zm * c, -zm * s], [zp * s, zp * c]])


def _contiguous_view(amps, lead):
    # Reshape must alias the input or the in-place update is silently lost.
    if not amps.flags.c_contiguous:
        raise ValueError("gate kernels require a C-contiguous amplitude array")
    return amps.reshape(lead, 2, -1)


def apply_gate(amps, n, q, matrix) -> None:
    """Apply a 2x2 matrix to qubit q of amps, in place.

    amps may have trailing batch axes; axis 0 must have length 2^n.
    """
    view = _contiguous_view(amps, 1 << (q - 1))
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    view[:, 1, :] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def apply_cz(amps, n, q1, q2) -> None:
    """Negate amplitudes with both control bits set, in place."""
    if q1 > q2:
        q1, q2 = q2, q1
    if not amps.flags.c_contiguous:
        raise ValueError("gate kernels require a C-contiguous amplitude array")
    lead = 1 << (q1 - 1)
    mid = 1 << (q2 - q1 - 1)
    view = amps.reshape(lead, 2, mid, 2, -1)
    view[:, 1, :, 1, :] *= -1.0


def apply_pauli_label(amps, n, q, label) -> None:
    """Apply a single-qubit Pauli (I, X, Y or Z) to qubit q, in place."""
    if label == "I":
        return
    view = _contiguous_view(amps, 1 << (q - 1))
    if label == "X":
        a0 = view[:, 0, :].copy()
        view[:, 0, :] = view[:, 1, :]
        view[:, 1, :] = a0
    elif label == "Y":
        a0 = view[:, 0, :].copy()
        view[:, 0, :] = -1j * view[:, 1, :]
        view[:, 1, :] = 1j * a0
    elif label == "Z":
        view[:, 1, :] *= -1.0
    else:
        raise ValueError(f"unknown Pauli label {label!r}")


def apply_pauli_string(amps, n, pauli) -> None:
    """Apply a tensor-product Pauli operator given as a length-n label string."""
    for q, label in enumerate(pauli, start=1):
        apply_pauli_label(amps, n, q, label)


class StateVector:
    """Mutable n-qubit pure state. Gate methods mutate in place and return self."""

    def __init__(self, n, amps=None):
        self.n = check_qubit_count(n)
        size = 1 << self.n
        if amps is None:
            self.amps = np.zeros(size, dtype=complex)
            self.amps[0] = 1.0
        else:
            amps = np.asarray(amps, dtype=complex)
            if amps.shape != (size,):
                raise ValueError(f"expected {size} amplitudes for n={n}, got shape {amps.shape}")
            self.amps = amps.copy()

    @classmethod
    def zero(cls, n) -> "StateVector":
        """The all-zeros computational basis state."""
        return cls(n)

    @classmethod
    def basis(cls, n, x) -> "StateVector":
        """The computational basis state with index x."""
        state = cls(n)
        x = int(x)
        if not 0 <= x < state.amps.size:
            raise ValueError(f"basis index {x} out of range for n={n}")
        state.amps[0] = 0.0
        state.amps[x] = 1.0
        return state

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other) -> complex:
        """<self|other>."""
        if other.n != self.n:
            raise ValueError(f"qubit counts differ: {self.n} vs {other.n}")
        return complex(np.vdot(self.amps, other.amps))

    # -- gates ---------------------------------------------------------------

    def apply_u(self, q, theta, phi) -> "StateVector":
        """Native rotation u(theta, phi): y-rotation by theta, then z-rotation by phi."""
        check_qubit_index(q, self.n)
        apply_gate(self.amps, self.n, q, u_matrix(theta, phi))
        return self

    def apply_u_dagger(self, q, theta, phi) -> "StateVector":
        """Exact inverse of apply_u(q, theta, phi)."""
        check_qubit_index(q, self.n)
        apply_gate(self.amps, self.n, q, u_matrix(theta, phi).conj().T)
        return self

    def apply_h(self, q) -> "StateVector":
        check_qubit_index(q, self.n)
        apply_gate(self.amps, self.n, q, _H)
        return self

    def apply_cz(self, q1, q2) -> "StateVector":
        check_qubit_index(q1, self.n)
        check_qubit_index(q2, self.n)
        if q1 == q2:
            raise ValueError("CZ needs two distinct qubits")
        apply_cz(self.amps, self.n, q1, q2)
        return self

    def apply_pauli(self, pauli) -> "StateVector":
        """Apply a tensor-product Pauli given as a label string, e.g. 'IXYZ'."""
        pauli = check_pauli_string(pauli, self.n)
        apply_pauli_string(self.amps, self.n, pauli)
        return self

    # -- measurement ---------------------------------------------------------

    def probabilities(self) -> np.ndarray:
        """Born-rule outcome distribution p(x) = |amps[x]|^2."""
        return np.abs(self.amps) ** 2

    def marginal_one(self, q) -> float:
        """Probability that qubit q reads 1."""
        check_qubit_index(q, self.n)
        lead = 1 << (q - 1)
        return float(self.probabilities().reshape(lead, 2, -1)[:, 1, :].sum())

    # -- reduced states --------------------------------------------------------

    def reduced_density_matrix(self, q) -> np.ndarray:
        """Exact 2x2 reduced state of qubit q (partial trace over the rest)."""
        check_qubit_index(q, self.n)
        lead = 1 << (q - 1)
        a = self.amps.reshape(lead, 2, -1)
        return np.einsum("iaj,ibj->ab", a, a.conj())

    def tomographic_rdm(self, q, shots=None, seed=None) -> np.ndarray:
        """Reconstruct the reduced state of qubit q from X/Y/Z basis measurements.

        Each basis expectation comes from `shots` simulated single-qubit
        readouts (exact expectations when shots is None). The Bloch-vector
        estimate can be unphysical at finite shots, so eigenvalues are
        clipped to [0, 1] and the trace renormalized.
        """
        check_qubit_index(q, self.n)
        rng = as_rng(seed)
        bloch = []
        for basis in "XYZ":
            rotated = self.copy()
            if basis == "X":
                rotated.apply_h(q)
            elif basis == "Y":
                rotated.apply_u(q, 0.0, -np.pi / 2.0)  # S^dagger up to global phase
                rotated.apply_h(q)
            p1 = rotated.marginal_one(q)
            if shots is not None:
                if shots < 1:
                    raise ValueError("shots must be >= 1")
                p1 = rng.binomial(int(shots), min(max(p1, 0.0), 1.0)) / float(shots)
            bloch.append(1.0 - 2.0 * p1)
        ex, ey, ez = bloch
        rho = 0.5 * np.array([[1.0 + ez, ex - 1j * ey], [ex + 1j * ey, 1.0 - ez]])
        return repair_rdm(rho)


def rdm_eigenvalues(rho) -> tuple[float, float]:
    """Closed-form eigenvalues (ascending) of a 2x2 Hermitian matrix."""
    mean = 0.5 * (rho[0, 0].real + rho[1, 1].real)
    radius = np.hypot(0.5 * (rho[0, 0].real - rho[1, 1].real), abs(rho[0, 1]))
    return mean - radius, mean + radius


def repair_rdm(rho) -> np.ndarray:
    """Project a trace-1 Hermitian estimate onto the physical set.

    Clips eigenvalues to [0, 1] and renormalizes the trace; for a trace-1
    matrix this shrinks an over-long Bloch vector to unit length.
    """
    lo, hi = rdm_eigenvalues(rho)
    if lo >= 0.0 and hi <= 1.0:
        return rho
    # Eigenvector for the larger eigenvalue of [[a, c], [conj(c), b]].
    c = rho[0, 1]
    v = np.array([c, hi - rho[0, 0]]) if abs(c) > 1e-300 else np.array(
        [1.0 + 0j, 0.0] if rho[0, 0].real >= rho[1, 1].real else [0.0, 1.0 + 0j]
    )
    v = v / np.linalg.norm(v)
    proj_hi = np.outer(v, v.conj())
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    rho_fixed = hi * proj_hi + lo * (np.eye(2) - proj_hi)
    return rho_fixed / np.trace(rho_fixed).real


def sample_counts(dist, shots=DEFAULT_SHOTS, seed=None) -> np.ndarray:
    """Empirical outcome frequencies from a multinomial draw of `shots` samples."""
    dist = check_prob_dist(dist)
    shots = int(shots)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    rng = as_rng(seed)
    counts = rng.multinomial(shots, dist / dist.sum())
    return counts / float(shots)
