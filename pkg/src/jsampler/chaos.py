"""Porter-Thomas statistics and out-of-time-order correlators (OTOCs).

The OTOC uses V = Y on the first chain qubit and W = U^dag X U with X on the
last qubit, U being the sampler circuit. Per basis state,
G(x) = <x| W V W V |x>, and the correlator F = Tr(W V W V)/N is the mean of
G over all x. Scrambling drives |F| from 1 toward 0; circuits built from
half-pi rotations map Paulis to signed Paulis under conjugation, so for them
W V W V = +/- identity and |F| stays exactly 1.

F can be estimated from a small random subset of basis states because the
real part of G(x) is nearly x-independent while the imaginary part is small
and random; the estimator monitors the imaginary part and warns when it
exceeds the scale where that approximation is trustworthy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .circuit import SamplerSpec, build_circuit, inverse_gates, apply_gates
from .statevector import StateVector, apply_pauli_label
from .validation import ConsistencyError, as_rng, check_unit_interval

#: warn when |Im G(x)| exceeds this scale (the abs-mode estimator ignores it)
IM_WARN_THRESHOLD = 0.10

_EULER_GAMMA = float(np.euler_gamma)


def pt_entropy(n) -> float:
    """Universal Porter-Thomas entropy value n - 1 + Euler's gamma."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return n - 1.0 + _EULER_GAMMA


@dataclass(frozen=True)
class PtHistogram:
    """Observed density of scaled probabilities N*p against the e^{-Np} reference."""

    edges: np.ndarray
    observed: np.ndarray
    reference: np.ndarray
    one_over_n: float
    n_values: int


def pt_histogram(dists, bins=24) -> PtHistogram:
    """Pool scaled probabilities N*p(x) from several distributions and bin them.

    The reference column is the Porter-Thomas density N e^{-Np} (in scaled
    units, e^{-y}) averaged over each bin.
    """
    dists = [np.asarray(d, dtype=float) for d in dists]
    if not dists:
        raise ValueError("need at least one distribution")
    size = dists[0].size
    if any(d.size != size for d in dists):
        raise ValueError("all distributions must share the qubit count")
    scaled = np.concatenate([d * size for d in dists])
    observed, edges = np.histogram(scaled, bins=bins, density=True)
    widths = np.diff(edges)
    reference = (np.exp(-edges[:-1]) - np.exp(-edges[1:])) / widths
    return PtHistogram(
        edges=edges,
        observed=observed,
        reference=reference,
        one_over_n=1.0 / size,
        n_values=scaled.size,
    )


def _resolve_ops(spec, v_pauli, v_qubit, w_pauli, w_qubit):
    n = spec.n_qubits
    if w_qubit is None:
        w_qubit = n
    for q in (v_qubit, w_qubit):
        if not 1 <= q <= n:
            raise IndexError(f"operator qubit {q} out of range [1, {n}]")
    for label in (v_pauli, w_pauli):
        if label not in ("X", "Y", "Z"):
            raise ValueError(f"operator Pauli must be X, Y or Z, got {label!r}")
    return v_pauli, v_qubit, w_pauli, w_qubit


def _apply_v(amps, n, v_pauli, v_qubit):
    apply_pauli_label(amps, n, v_qubit, v_pauli)


def _apply_w(amps, n, w_pauli, w_qubit, gates, gates_inv):
    apply_gates(amps, n, gates)
    apply_pauli_label(amps, n, w_qubit, w_pauli)
    apply_gates(amps, n, gates_inv)


def otoc_g(spec: SamplerSpec, x, v_pauli="Y", v_qubit=1, w_pauli="X", w_qubit=None) -> complex:
    """Single-basis-state OTOC contribution G(x) = <x| W V W V |x>."""
    v_pauli, v_qubit, w_pauli, w_qubit = _resolve_ops(spec, v_pauli, v_qubit, w_pauli, w_qubit)
    n = spec.n_qubits
    gates = build_circuit(spec)
    gates_inv = inverse_gates(gates)
    state = StateVector.basis(n, x)
    for _ in range(2):
        _apply_v(state.amps, n, v_pauli, v_qubit)
        _apply_w(state.amps, n, w_pauli, w_qubit, gates, gates_inv)
    return complex(state.amps[int(x)])


def otoc_g_all(spec: SamplerSpec, v_pauli="Y", v_qubit=1, w_pauli="X", w_qubit=None) -> np.ndarray:
    """G(x) for every basis state at once via one batched evolution.

    Builds the matrix M = W V by evolving all basis columns together, then
    reads out the diagonal of M^2 without forming it.
    """
    v_pauli, v_qubit, w_pauli, w_qubit = _resolve_ops(spec, v_pauli, v_qubit, w_pauli, w_qubit)
    n = spec.n_qubits
    if n > 12:
        raise ValueError("full OTOC enumeration is capped at n <= 12")
    gates = build_circuit(spec)
    gates_inv = inverse_gates(gates)
    matrix = np.eye(1 << n, dtype=complex)
    _apply_v(matrix, n, v_pauli, v_qubit)
    _apply_w(matrix, n, w_pauli, w_qubit, gates, gates_inv)
    return np.einsum("xy,yx->x", matrix, matrix)


def otoc_f_exact(spec: SamplerSpec, **op_kwargs) -> tuple[float, float]:
    """Exact OTOC F = mean_x G(x) and the commutator norm C = 2(1 - F).

    F is a trace of Hermitian-paired factors and must come out real; a
    residual imaginary part beyond 1e-6 signals a broken kernel.
    """
    g = otoc_g_all(spec, **op_kwargs)
    f = complex(g.mean())
    if abs(f.imag) > 1e-6:
        raise ConsistencyError(f"OTOC trace has imaginary residue {f.imag:.3e}")
    return f.real, 2.0 * (1.0 - f.real)


def _sampled_indices(dim, n_samples, rng):
    if n_samples is None:
        return np.arange(dim)
    n_samples = int(n_samples)
    if not 1 <= n_samples <= dim:
        raise ValueError(f"sample count must be in [1, {dim}], got {n_samples}")
    return np.sort(rng.choice(dim, size=n_samples, replace=False))


def _warn_imaginary(g_values) -> float:
    max_im = float(np.abs(np.asarray(g_values).imag).max())
    if max_im > IM_WARN_THRESHOLD:
        warnings.warn(
            f"max |Im G(x)| = {max_im:.3f} exceeds {IM_WARN_THRESHOLD}; "
            "the x-independence approximation is degrading",
            RuntimeWarning,
            stacklevel=3,
        )
    return max_im


def otoc_f_stochastic(
    spec: SamplerSpec, n_samples, seed=None, mode="abs", **op_kwargs
) -> float:
    """Stochastic trace estimate of the OTOC from a random subset of basis states.

    mode "real_part" averages Re G(x) (estimates F); mode "abs" averages
    |G(x)| (estimates |F|, additionally discarding the small imaginary part).
    Sampling is without replacement, so n_samples = 2^n recovers the exact
    trace in real_part mode.
    """
    if mode not in ("real_part", "abs"):
        raise ValueError(f"mode must be 'real_part' or 'abs', got {mode!r}")
    rng = as_rng(seed)
    indices = _sampled_indices(1 << spec.n_qubits, n_samples, rng)
    g_values = np.array([otoc_g(spec, int(x), **op_kwargs) for x in indices])
    _warn_imaginary(g_values)
    if mode == "real_part":
        return float(g_values.real.mean())
    return float(np.abs(g_values).mean())


def wvvw_correlator(
    spec: SamplerSpec, x, v_pauli="Y", v_qubit=1, w_pauli="X", w_qubit=None
) -> complex:
    """<x| W V V W |x>, identically 1 for noiseless evolution (V^2 = W^2 = I)."""
    v_pauli, v_qubit, w_pauli, w_qubit = _resolve_ops(spec, v_pauli, v_qubit, w_pauli, w_qubit)
    n = spec.n_qubits
    gates = build_circuit(spec)
    gates_inv = inverse_gates(gates)
    state = StateVector.basis(n, x)
    _apply_w(state.amps, n, w_pauli, w_qubit, gates, gates_inv)
    _apply_v(state.amps, n, v_pauli, v_qubit)
    _apply_v(state.amps, n, v_pauli, v_qubit)
    _apply_w(state.amps, n, w_pauli, w_qubit, gates, gates_inv)
    return complex(state.amps[int(x)])


def _damped_magnitude(g, epsilon, dim) -> float:
    """Measured magnitude of a per-basis-state correlator under depolarizing.

    The hardware estimate of |<x|A|x>| comes from a return probability, and
    mixing that readout distribution with uniform damps it toward 1/sqrt(N).
    """
    return float(np.sqrt((1.0 - epsilon) * abs(g) ** 2 + epsilon / dim))


def wvvw_average(
    spec: SamplerSpec, n_samples=None, seed=None, epsilon=0.0, **op_kwargs
) -> float:
    """Mean measured |<x|WVVW|x>| over sampled basis states; 1 unless noise is on."""
    epsilon = check_unit_interval(epsilon, "epsilon")
    rng = as_rng(seed)
    dim = 1 << spec.n_qubits
    indices = _sampled_indices(dim, n_samples, rng)
    values = [
        _damped_magnitude(wvvw_correlator(spec, int(x), **op_kwargs), epsilon, dim)
        for x in indices
    ]
    return float(np.mean(values))


def _safe_ratio(numerator, denominator) -> float:
    if abs(denominator) < 1e-6:
        raise ValueError(f"degenerate reference correlator {denominator:.3e} in OTOC ratio")
    return numerator / denominator


def otoc_ratio(
    spec: SamplerSpec, n_samples=None, seed=None, epsilon=0.0, **op_kwargs
) -> float:
    """Error-resistant scrambling metric |<WVWV>| / |<WVVW>| over a shared sample.

    Both correlators are evaluated on the same basis states. Noiseless, the
    denominator is exactly 1 and the full-enumeration ratio equals |F|.
    """
    epsilon = check_unit_interval(epsilon, "epsilon")
    rng = as_rng(seed)
    dim = 1 << spec.n_qubits
    indices = _sampled_indices(dim, n_samples, rng)
    g_values = np.array([otoc_g(spec, int(x), **op_kwargs) for x in indices])
    if epsilon:
        damped = []
        for g in g_values:
            scale = _damped_magnitude(g, epsilon, dim)
            damped.append(g * (scale / abs(g)) if abs(g) > 1e-300 else scale)
        g_values = np.array(damped)
    numerator = abs(g_values.mean())
    denominator = np.mean(
        [
            _damped_magnitude(wvvw_correlator(spec, int(x), **op_kwargs), epsilon, dim)
            for x in indices
        ]
    )
    return _safe_ratio(numerator, float(denominator))


@dataclass(frozen=True)
class OtocRecord:
    """Everything one scrambling measurement produces for a single circuit."""

    spec: SamplerSpec
    g: np.ndarray
    f_exact: float
    f_stochastic: float
    c: float
    wvvw: float
    ratio: float
    n_samples: int
    max_im_g: float


def otoc_record(
    spec: SamplerSpec, n_samples=8, seed=None, mode="abs", epsilon=0.0, **op_kwargs
) -> OtocRecord:
    """Exact and stochastic OTOC diagnostics for one circuit.

    The stochastic estimate, the reference correlator and the ratio share one
    set of sampled basis states (and reuse the exact G values).
    """
    if mode not in ("real_part", "abs"):
        raise ValueError(f"mode must be 'real_part' or 'abs', got {mode!r}")
    epsilon = check_unit_interval(epsilon, "epsilon")
    g = otoc_g_all(spec, **op_kwargs)
    f = complex(g.mean())
    if abs(f.imag) > 1e-6:
        raise ConsistencyError(f"OTOC trace has imaginary residue {f.imag:.3e}")
    dim = g.size
    rng = as_rng(seed)
    indices = _sampled_indices(dim, n_samples, rng)
    sampled = g[indices]
    max_im = _warn_imaginary(sampled)
    if mode == "real_part":
        f_stochastic = float(sampled.real.mean())
    else:
        f_stochastic = float(np.abs(sampled).mean())
    wvvw_vals = [
        _damped_magnitude(wvvw_correlator(spec, int(x), **op_kwargs), epsilon, dim)
        for x in indices
    ]
    wvvw = float(np.mean(wvvw_vals))
    if epsilon:
        scaled = np.array(
            [
                gx * (_damped_magnitude(gx, epsilon, dim) / abs(gx))
                if abs(gx) > 1e-300
                else _damped_magnitude(gx, epsilon, dim)
                for gx in sampled
            ]
        )
    else:
        scaled = sampled
    ratio = _safe_ratio(abs(scaled.mean()), wvvw)
    return OtocRecord(
        spec=spec,
        g=g,
        f_exact=f.real,
        f_stochastic=f_stochastic,
        c=2.0 * (1.0 - f.real),
        wvvw=wvvw,
        ratio=ratio,
        n_samples=len(indices),
        max_im_g=max_im,
    )
