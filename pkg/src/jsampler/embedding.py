"""Scikit-learn compatible feature map backed by the chain sampler circuit.

Each input row is a real parameter vector that the circuit embeds into an
n-qubit state; the transform returns, per row, either the exact outcome
probabilities, the complex amplitudes, or shot-sampled outcome frequencies.
This makes the embedding usable inside ordinary sklearn pipelines.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .circuit import SamplerSpec, param_count, sampler_state
from .statevector import DEFAULT_SHOTS, sample_counts

_OUTPUTS = ("probabilities", "amplitudes", "frequencies")


class JosephsonEmbedding(TransformerMixin, BaseEstimator):
    """Embed real vectors into n-qubit measurement statistics.

    Parameters
    ----------
    n_qubits : chain length (>= 2).
    n_layers : circuit depth; each row must have 2(2*n_qubits-2)*n_layers entries.
    output : "probabilities" (default), "amplitudes" or "frequencies".
    shots : samples per row when output="frequencies".
    random_state : seed for the frequency sampling.
    """

    def __init__(self, n_qubits=4, n_layers=1, output="probabilities",
                 shots=DEFAULT_SHOTS, random_state=None):
        self.n_qubits = n_qubits
        self.n_layers = n_layers
        self.output = output
        self.shots = shots
        self.random_state = random_state

    def _expected_width(self) -> int:
        return param_count(self.n_qubits, self.n_layers)

    def fit(self, X, y=None):
        if self.output not in _OUTPUTS:
            raise ValueError(f"output must be one of {_OUTPUTS}, got {self.output!r}")
        X = check_array(X, dtype=float)
        expected = self._expected_width()
        if X.shape[1] != expected:
            raise ValueError(
                f"each row must have {expected} angles for "
                f"n_qubits={self.n_qubits}, n_layers={self.n_layers}; got {X.shape[1]}"
            )
        self.n_features_in_ = X.shape[1]
        self.output_dim_ = 1 << self.n_qubits
        return self

    def transform(self, X):
        check_is_fitted(self, "output_dim_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        rng = np.random.default_rng(self.random_state)
        dtype = complex if self.output == "amplitudes" else float
        result = np.empty((X.shape[0], self.output_dim_), dtype=dtype)
        for i, row in enumerate(X):
            state = sampler_state(SamplerSpec(self.n_qubits, self.n_layers, row))
            if self.output == "amplitudes":
                result[i] = state.amps
            elif self.output == "probabilities":
                result[i] = state.probabilities()
            else:
                result[i] = sample_counts(state.probabilities(), self.shots, rng)
        return result

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "output_dim_")
        width = self.n_qubits
        prefix = "amp" if self.output == "amplitudes" else "p"
        return np.asarray(
            [f"{prefix}_{i:0{width}b}" for i in range(self.output_dim_)], dtype=object
        )
