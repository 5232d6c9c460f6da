"""Construction and application of layered chain-sampler circuits.

One layer consists of four columns acting on an n-qubit chain:

    1. a rotation on every qubit        (2n angles)
    2. CZ on pairs (1,2), (3,4), ...
    3. a rotation on interior qubits    (2(n-2) angles)
    4. CZ on pairs (2,3), (4,5), ...

so a layer consumes 2(2n-2) angles and a circuit of L layers embeds a real
vector of dimension m = 2(2n-2)L. Angles are consumed top-to-bottom within
a column, theta before phi. Each component is 4*pi-periodic because angles
enter the gate matrices halved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import statevector as sv
from .statevector import StateVector
from .validation import as_rng, check_qubit_count

#: supported distributions for pseudorandom parameter vectors
ENSEMBLES = ("continuous", "clifford_half_pi", "eighth_pi")


class Rotation(NamedTuple):
    """Native rotation u(theta, phi) on one qubit."""

    qubit: int
    theta: float
    phi: float


class RotationDagger(NamedTuple):
    """Exact inverse of a Rotation, kept as its own record to avoid angle re-encoding."""

    qubit: int
    theta: float
    phi: float


class ControlledZ(NamedTuple):
    qubit_a: int
    qubit_b: int


Gate = Union[Rotation, RotationDagger, ControlledZ]


@dataclass(frozen=True)
class SamplerSpec:
    """A fully determined sampler circuit: size, depth and parameter vector."""

    n_qubits: int
    n_layers: int
    params: np.ndarray

    def __post_init__(self):
        n = check_qubit_count(self.n_qubits)
        if n < 2:
            raise ValueError("a chain sampler needs at least 2 qubits")
        if self.n_layers < 0:
            raise ValueError(f"layer count must be >= 0, got {self.n_layers}")
        params = np.asarray(self.params, dtype=float).ravel()
        expected = param_count(n, self.n_layers)
        if params.size != expected:
            raise ValueError(
                f"parameter vector has length {params.size}, "
                f"expected {expected} for n={n}, L={self.n_layers}"
            )
        object.__setattr__(self, "params", params)

    def to_dict(self) -> dict:
        return {"n": self.n_qubits, "L": self.n_layers, "x": self.params.tolist()}

    @classmethod
    def from_dict(cls, data) -> "SamplerSpec":
        return cls(int(data["n"]), int(data["L"]), np.asarray(data["x"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text) -> "SamplerSpec":
        return cls.from_dict(json.loads(text))


def param_count(n_qubits, n_layers) -> int:
    """Dimension m = 2(2n-2)L of the embedded vector."""
    if n_qubits < 2:
        raise ValueError(f"a chain sampler needs at least 2 qubits, got {n_qubits}")
    if n_layers < 0:
        raise ValueError(f"layer count must be >= 0, got {n_layers}")
    return 2 * (2 * n_qubits - 2) * n_layers


def build_layer(n_qubits, layer_params) -> list:
    """Gate sequence of a single layer from its 2(2n-2) angles."""
    layer_params = np.asarray(layer_params, dtype=float).ravel()
    per_layer = 2 * (2 * n_qubits - 2)
    if layer_params.size != per_layer:
        raise ValueError(
            f"layer needs {per_layer} angles for n={n_qubits}, got {layer_params.size}"
        )
    gates: list = []
    k = 0
    for q in range(1, n_qubits + 1):
        gates.append(Rotation(q, layer_params[k], layer_params[k + 1]))
        k += 2
    for q in range(1, n_qubits, 2):
        gates.append(ControlledZ(q, q + 1))
    for q in range(2, n_qubits):
        gates.append(Rotation(q, layer_params[k], layer_params[k + 1]))
        k += 2
    for q in range(2, n_qubits, 2):
        gates.append(ControlledZ(q, q + 1))
    return gates


def build_circuit(spec: SamplerSpec) -> list:
    """Concatenated layers; layer i consumes the i-th contiguous parameter slice."""
    per_layer = 2 * (2 * spec.n_qubits - 2)
    gates: list = []
    for layer in range(spec.n_layers):
        chunk = spec.params[layer * per_layer : (layer + 1) * per_layer]
        gates.extend(build_layer(spec.n_qubits, chunk))
    return gates


def inverse_gates(gates) -> list:
    """Exact inverse sequence: reversed order, rotations replaced by their daggers."""
    out: list = []
    for gate in reversed(gates):
        if isinstance(gate, Rotation):
            out.append(RotationDagger(*gate))
        elif isinstance(gate, RotationDagger):
            out.append(Rotation(*gate))
        else:
            out.append(gate)
    return out


def apply_gates(amps, n, gates) -> None:
    """Run a gate sequence over an amplitude array (trailing batch axes allowed)."""
    for gate in gates:
        if isinstance(gate, Rotation):
            sv.apply_gate(amps, n, gate.qubit, sv.u_matrix(gate.theta, gate.phi))
        elif isinstance(gate, RotationDagger):
            sv.apply_gate(amps, n, gate.qubit, sv.u_matrix(gate.theta, gate.phi).conj().T)
        elif isinstance(gate, ControlledZ):
            sv.apply_cz(amps, n, gate.qubit_a, gate.qubit_b)
        else:
            raise TypeError(f"unknown gate record {gate!r}")


def _check_state(state: StateVector, spec: SamplerSpec) -> None:
    if state.n != spec.n_qubits:
        raise ValueError(f"state has {state.n} qubits, spec needs {spec.n_qubits}")


def apply_sampler(state: StateVector, spec: SamplerSpec) -> StateVector:
    """Apply the sampler circuit to a state, in place."""
    _check_state(state, spec)
    apply_gates(state.amps, state.n, build_circuit(spec))
    return state


def apply_inverse_sampler(state: StateVector, spec: SamplerSpec) -> StateVector:
    """Apply the exact inverse circuit, in place."""
    _check_state(state, spec)
    apply_gates(state.amps, state.n, inverse_gates(build_circuit(spec)))
    return state


def circuit_unitary(spec: SamplerSpec) -> np.ndarray:
    """Dense 2^n x 2^n unitary of the circuit (column y is the image of |y>)."""
    dim = 1 << spec.n_qubits
    matrix = np.eye(dim, dtype=complex)
    apply_gates(matrix, spec.n_qubits, build_circuit(spec))
    return matrix


def random_params(n_qubits, n_layers, ensemble="continuous", seed=None) -> np.ndarray:
    """Pseudorandom parameter vector from one of the supported ensembles.

    continuous        uniform reals in [-2*pi, 2*pi]
    clifford_half_pi  random multiples of pi/2 in [-2*pi, 2*pi]
    eighth_pi         random multiples of pi/4 in [-2*pi, 2*pi]
    """
    rng = as_rng(seed)
    m = param_count(n_qubits, n_layers)
    if ensemble == "continuous":
        return rng.uniform(-2.0 * np.pi, 2.0 * np.pi, m)
    if ensemble == "clifford_half_pi":
        return rng.integers(-4, 5, m) * (np.pi / 2.0)
    if ensemble == "eighth_pi":
        return rng.integers(-8, 9, m) * (np.pi / 4.0)
    raise ValueError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")


def random_spec(n_qubits, n_layers, ensemble="continuous", seed=None) -> SamplerSpec:
    """Convenience: SamplerSpec with a freshly drawn parameter vector."""
    return SamplerSpec(n_qubits, n_layers, random_params(n_qubits, n_layers, ensemble, seed))


def sampler_state(spec: SamplerSpec) -> StateVector:
    """The circuit applied to the all-zeros state."""
    return apply_sampler(StateVector.zero(spec.n_qubits), spec)
