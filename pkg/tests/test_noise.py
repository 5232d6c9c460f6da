import numpy as np
import pytest

from jsampler import (
    ReadoutModel,
    apply_readout_error,
    depolarize_dist,
    depolarized_state_fidelity,
    haar_random_state,
    information_fidelity,
    state_fidelity_exact,
)


def test_depolarize_examples():
    p = np.array([0.2, 0.8])
    assert np.allclose(depolarize_dist(p, 0.0), p)
    assert np.allclose(depolarize_dist(p, 1.0), [0.5, 0.5])
    assert np.allclose(depolarize_dist([1.0, 0.0], 0.2), [0.9, 0.1])


def test_depolarize_epsilon_bounds():
    for eps in (-0.1, 1.1):
        with pytest.raises(ValueError):
            depolarize_dist([1.0, 0.0], eps)


def test_depolarize_preserves_normalization():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        p = rng.dirichlet(np.ones(1 << n))
        eps = rng.uniform(0, 1)
        mixed = depolarize_dist(p, eps)
        assert mixed.min() >= 0
        assert mixed.sum() == pytest.approx(1.0, abs=1e-12)


def test_depolarized_state_fidelity_values():
    assert depolarized_state_fidelity(0.0, 5) == 1.0
    assert depolarized_state_fidelity(1.0, 12) == pytest.approx(2.0**-12)
    assert depolarized_state_fidelity(0.1, 2) == pytest.approx(0.925)


def test_depolarized_fidelity_matches_state_overlap_formula():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        eps = rng.uniform(0, 1)
        state = haar_random_state(n, rng)
        assert state_fidelity_exact(state, state, eps) == pytest.approx(
            depolarized_state_fidelity(eps, n), abs=1e-12
        )


def test_information_fidelity_reads_off_epsilon():
    rng = np.random.default_rng(2)
    for _ in range(25):
        n = int(rng.integers(1, 7))
        p = haar_random_state(n, rng).probabilities()
        eps = rng.uniform(0, 1)
        assert information_fidelity(depolarize_dist(p, eps), p) == pytest.approx(
            1.0 - eps, abs=1e-9
        )


def test_readout_examples():
    identity = ReadoutModel.uniform(2, 0.0)
    p = np.array([0.4, 0.3, 0.2, 0.1])
    assert np.allclose(apply_readout_error(p, identity), p)

    one = ReadoutModel.uniform(1, 0.05, 0.0)
    assert np.allclose(apply_readout_error([1.0, 0.0], one), [0.95, 0.05])

    two = ReadoutModel.uniform(2, 0.1)
    leaked = apply_readout_error([1.0, 0.0, 0.0, 0.0], two)
    assert np.allclose(leaked, [0.81, 0.09, 0.09, 0.01])


def test_readout_matrix_is_column_stochastic():
    model = ReadoutModel([[0.03, 0.11], [0.2, 0.0], [0.5, 0.49]])
    for q in (1, 2, 3):
        assert np.allclose(model.confusion_matrix(q).sum(axis=0), [1.0, 1.0])


def test_readout_preserves_normalization():
    rng = np.random.default_rng(3)
    model = ReadoutModel(rng.uniform(0, 0.5, (4, 2)))
    for _ in range(20):
        p = rng.dirichlet(np.ones(16))
        out = apply_readout_error(p, model)
        assert out.min() >= 0 and out.sum() == pytest.approx(1.0, abs=1e-12)


def test_readout_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_readout_error([0.5, 0.5], ReadoutModel.uniform(2))


def test_readout_validation():
    with pytest.raises(ValueError):
        ReadoutModel([[0.6, 0.1]])
    with pytest.raises(ValueError):
        ReadoutModel([[0.1, -0.01]])


def test_readout_json_roundtrip():
    model = ReadoutModel([[0.03, 0.02], [0.04, 0.05]])
    back = ReadoutModel.from_json(model.to_json())
    assert np.allclose(back.flips, model.flips)
    assert set(model.to_dict()) == {"flips"}
