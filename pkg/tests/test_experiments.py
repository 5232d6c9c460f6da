import json

import numpy as np
import pytest

import jsampler.cli as cli
from jsampler import (
    ConfigError,
    SamplerSpec,
    circuit_seed,
    config_from_dict,
    haar_q,
    page_entropy,
    random_params,
    run_entanglement_sweep,
    run_fidelity_sweep,
    run_haar_oracle,
    run_otoc_sweep,
    run_pt_histogram,
    run_sampling_experiment,
    sampler_state,
)
from jsampler.experiments import (
    entanglement_record,
    fidelity_record,
    load_config,
    rows_to_csv,
    write_rows,
)
from jsampler.validation import ConsistencyError


def make_config(**overrides):
    data = {"experiment": "fidelity", "n_list": [3], "L_list": [0, 2], "s": 2}
    data.update(overrides)
    return config_from_dict(data)


def test_config_defaults():
    config = config_from_dict({"experiment": "fidelity"})
    assert config.s == 4 and config.r == 8 and config.shots == 8000
    assert config.ensemble == "continuous" and config.nu == 8
    assert config.epsilon == 0.0 and config.master_seed == 0


@pytest.mark.parametrize(
    "field,value,fragment",
    [
        ("experiment", "spectroscopy", "experiment"),
        ("n_list", [], "n_list"),
        ("n_list", [1], "n_list"),
        ("n_list", [2.5], "n_list"),
        ("L_list", "abc", "L_list"),
        ("ensemble", "gaussian", "ensemble"),
        ("s", 0, "s"),
        ("shots", -5, "shots"),
        ("epsilon", 1.4, "epsilon"),
        ("master_seed", -1, "master_seed"),
        ("mode", "bayesian", "mode"),
        ("otoc_mode", "imag", "otoc_mode"),
        ("readout", {"q1": 0.1}, "readout"),
    ],
)
def test_config_field_errors(field, value, fragment):
    data = {"experiment": "fidelity", field: value}
    with pytest.raises(ConfigError, match=fragment):
        config_from_dict(data)


def test_config_per_experiment_size_caps():
    with pytest.raises(ConfigError, match="n_list"):
        config_from_dict({"experiment": "fidelity", "n_list": [11]})
    with pytest.raises(ConfigError, match="n_list"):
        config_from_dict({"experiment": "otoc", "n_list": [13]})
    with pytest.raises(ConfigError, match="n_list"):
        config_from_dict({"experiment": "haar-oracle", "n_list": [9]})
    assert config_from_dict({"experiment": "sampling", "n_list": [14]}).n_list == (14,)


def test_config_rejects_unknown_fields():
    with pytest.raises(ConfigError, match="unknown"):
        config_from_dict({"experiment": "fidelity", "layers": [1]})


def test_config_readout_flips_must_match_n():
    data = {
        "experiment": "sampling",
        "n_list": [3],
        "readout": {"flips": [[0.01, 0.01], [0.01, 0.01]]},
    }
    with pytest.raises(ConfigError, match="readout"):
        config_from_dict(data)


def test_seed_derivation_is_stable_and_decoupled():
    a = circuit_seed(7, 4, 3, 0)
    assert a == circuit_seed(7, 4, 3, 0)
    assert a != circuit_seed(7, 4, 3, 1)
    assert a != circuit_seed(7, 4, 2, 0)
    assert a != circuit_seed(8, 4, 3, 0)
    assert a != circuit_seed(7, 4, 3, 0, stream=1)


def test_fidelity_sweep_noiseless():
    rows = run_fidelity_sweep(make_config(n_list=[2, 3], L_list=[0, 1, 2]))
    assert len(rows) == 6  # |n_list| * |L_list|
    for row in rows:
        assert row["f_exact_mean"] == pytest.approx(1.0, abs=1e-12)
        assert row["f_dfe_mean"] == pytest.approx(1.0, abs=1e-12)
        assert row["f_in_mean"] == pytest.approx(1.0, abs=1e-9)


def test_fidelity_sweep_depolarized_matches_closed_forms():
    rows = run_fidelity_sweep(make_config(epsilon=0.2, n_list=[4], L_list=[1, 3]))
    for row in rows:
        assert row["f_in_mean"] == pytest.approx(0.8, abs=1e-9)
        assert row["f_in_sem"] == pytest.approx(0.0, abs=1e-9)
        assert row["f_exact_mean"] == pytest.approx(1 - 0.2 * (1 - 1 / 16), abs=1e-12)


def test_rows_carry_seeds_that_regenerate_circuits():
    config = make_config(n_list=[3], L_list=[2], s=3)
    row = run_fidelity_sweep(config)[0]
    seeds = [int(s) for s in row["seeds"].split(";")]
    assert seeds == [circuit_seed(0, 3, 2, i) for i in range(3)]
    params = random_params(3, 2, "continuous", seeds[0])
    assert sampler_state(SamplerSpec(3, 2, params)).norm() == pytest.approx(1.0)


def test_sampling_experiment_ideal_prep():
    config = config_from_dict(
        {"experiment": "sampling", "n_list": [4], "L_list": [0], "s": 2, "shots": 4000}
    )
    summary, dists = run_sampling_experiment(config)
    assert len(summary) == 2
    assert len(dists) == 2 * 16
    for row in summary:
        assert row["shannon"] == pytest.approx(0.0, abs=1e-9)
        assert row["mean_index"] == 0.0
        assert row["l1"] == pytest.approx(0.0, abs=1e-12)
        assert row["one_minus_f"] == 0.0
    ideal = [r["p_ideal"] for r in dists if r["seed"] == summary[0]["seed"]]
    assert ideal[0] == 1.0 and sum(ideal) == pytest.approx(1.0)


def test_sampling_experiment_readout_leakage_matches_tensor_model():
    config = config_from_dict(
        {
            "experiment": "sampling",
            "n_list": [2],
            "L_list": [0],
            "s": 1,
            "shots": 200_000,
            "readout": {"p01": 0.1, "p10": 0.1},
        }
    )
    _, dists = run_sampling_experiment(config)
    measured = np.array([r["p_meas"] for r in dists])
    assert np.abs(measured - [0.81, 0.09, 0.09, 0.01]).max() < 0.01


def test_entanglement_sweep_rows():
    config = config_from_dict(
        {"experiment": "entanglement", "n_list": [4], "L_list": [0, 4], "s": 2}
    )
    rows = run_entanglement_sweep(config)
    assert len(rows) == 2
    zero = rows[0]
    assert zero["q_mean"] == pytest.approx(0.0, abs=1e-9)
    assert zero["s2_mean"] == pytest.approx(0.0, abs=1e-9)
    assert zero["se_mean"] == pytest.approx(0.0, abs=1e-9)
    assert zero["haar_q"] == pytest.approx(haar_q(4))
    assert zero["page_se"] == pytest.approx(page_entropy(2, 8))
    deep = rows[1]
    assert deep["q_mean"] > 0.5


def test_entanglement_single_instance_mode():
    config = config_from_dict(
        {"experiment": "entanglement", "n_list": [3], "L_list": [1, 2, 3], "s": 1}
    )
    rows = run_entanglement_sweep(config)
    assert len(rows) == 3
    assert all(";" not in row["seeds"] for row in rows)


def test_entanglement_tomographic_mode():
    config = config_from_dict(
        {
            "experiment": "entanglement",
            "n_list": [3],
            "L_list": [2],
            "s": 1,
            "mode": "tomographic",
            "shots": 50_000,
        }
    )
    exact = run_entanglement_sweep(
        config_from_dict({"experiment": "entanglement", "n_list": [3], "L_list": [2], "s": 1})
    )[0]
    noisy = run_entanglement_sweep(config)[0]
    assert noisy["mode"] == "tomographic"
    assert noisy["q_mean"] == pytest.approx(exact["q_mean"], abs=0.05)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_otoc_sweep_clifford_ratio_is_one():
    config = config_from_dict(
        {
            "experiment": "otoc",
            "n_list": [3, 4],
            "L_list": [1, 4],
            "s": 2,
            "ensemble": "clifford_half_pi",
        }
    )
    rows = run_otoc_sweep(config)
    assert len(rows) == 8
    for row in rows:
        assert row["ratio"] == pytest.approx(1.0, abs=1e-9)
        assert abs(row["F_exact"]) == pytest.approx(1.0, abs=1e-9)
        assert row["wvvw"] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_otoc_sweep_full_enumeration_recovers_exact_trace():
    config = config_from_dict(
        {
            "experiment": "otoc",
            "n_list": [3],
            "L_list": [3],
            "s": 2,
            "nu": 8,
            "otoc_mode": "real_part",
        }
    )
    for row in run_otoc_sweep(config):
        assert row["nu"] == 8
        assert row["F_stochastic"] == pytest.approx(row["F_exact"], abs=1e-10)


def test_pt_histogram_tables():
    config = config_from_dict(
        {"experiment": "pt-hist", "n_list": [4], "L_list": [2], "s": 3, "bins": 6}
    )
    hist, summary = run_pt_histogram(config)
    assert len(hist) == 6
    assert {row["bin_lo"] < row["bin_hi"] for row in hist} == {True}
    assert all(len(row["seeds"].split(";")) == 3 for row in hist)
    assert len(summary) == 1
    assert summary[0]["pt_entropy"] == pytest.approx(4 - 1 + np.euler_gamma)
    assert summary[0]["one_over_n"] == pytest.approx(1 / 16)


def test_haar_oracle_rows():
    config = config_from_dict({"experiment": "haar-oracle", "n_list": [3], "count": 400})
    rows = run_haar_oracle(config)
    assert len(rows) == 1
    row = rows[0]
    assert row["count"] == 400
    assert row["seed"] == circuit_seed(0, 3, 0, 0, stream=5)
    assert row["q_mean"] == pytest.approx(haar_q(3), abs=3 * row["q_sem"] + 0.005)
    assert row["page_se"] == pytest.approx(page_entropy(2, 4))


def test_sweeps_are_deterministic_and_thread_invariant():
    config = make_config(n_list=[2, 3], L_list=[1, 2], epsilon=0.1)
    rows_a = run_fidelity_sweep(config, threads=1)
    rows_b = run_fidelity_sweep(config, threads=1)
    assert rows_to_csv(rows_a) == rows_to_csv(rows_b)
    rows_c = run_fidelity_sweep(config, threads=2)
    assert rows_to_csv(rows_a) == rows_to_csv(rows_c)


def test_fidelity_record_wire_format():
    spec = SamplerSpec(3, 2, random_params(3, 2, "continuous", 17))
    record = fidelity_record(spec, seed=17, epsilon=0.25, dfe_seed=0)
    assert list(record) == [
        "n", "L", "seed", "F_exact", "F_dfe", "F_dfe_err", "F_in",
        "l1", "shannon", "mean_index",
    ]
    assert record["n"] == 3 and record["L"] == 2 and record["seed"] == 17
    assert record["F_exact"] == pytest.approx(1 - 0.25 * (1 - 1 / 8), abs=1e-12)
    assert record["F_in"] == pytest.approx(0.75, abs=1e-9)
    assert json.dumps(record)


def test_entanglement_record_wire_format():
    spec = SamplerSpec(3, 2, random_params(3, 2, "continuous", 23))
    record = entanglement_record(spec, seed=23)
    assert list(record) == ["n", "L", "seed", "gammas", "Q", "S2", "Se", "haar_Q", "page_Se"]
    assert len(record["gammas"]) == 3
    assert record["haar_Q"] == pytest.approx(haar_q(3))
    assert record["page_Se"] == pytest.approx(page_entropy(2, 4))
    shot_based = entanglement_record(spec, seed=23, shots=100_000, tomography_seed=1)
    assert shot_based["Q"] == pytest.approx(record["Q"], abs=0.05)
    assert json.dumps(record)


def test_write_rows_formats(tmp_path):
    rows = [{"a": 1, "b": 0.5}, {"a": 2, "b": 1.25}]
    csv_path = tmp_path / "out.csv"
    write_rows(rows, csv_path, "csv")
    assert csv_path.read_text() == "a,b\n1,0.5\n2,1.25\n"
    json_path = tmp_path / "out.json"
    write_rows(rows, json_path, "json")
    assert json.loads(json_path.read_text()) == rows
    with pytest.raises(ConfigError):
        write_rows(rows, tmp_path / "out.xml", "xml")


def write_config(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_cli_fidelity_end_to_end(tmp_path):
    path = write_config(
        tmp_path,
        {"experiment": "fidelity", "n_list": [2], "L_list": [0, 1], "s": 2},
    )
    out = tmp_path / "results"
    code = cli.main(["fidelity", "--config", path, "--out", str(out)])
    assert code == 0
    assert (out / "fidelity.csv").exists()
    assert (out / "fidelity_config.json").exists()
    sidecar = json.loads((out / "fidelity_config.json").read_text())
    assert sidecar["experiment"] == "fidelity" and sidecar["master_seed"] == 0

    header = (out / "fidelity.csv").read_text().splitlines()[0]
    assert header.startswith("n,L,ensemble,epsilon,seeds")


def test_cli_seed_override_changes_rows(tmp_path):
    path = write_config(
        tmp_path, {"experiment": "fidelity", "n_list": [3], "L_list": [2], "s": 2, "epsilon": 0.1}
    )
    cli.main(["fidelity", "--config", path, "--out", str(tmp_path / "a")])
    cli.main(["fidelity", "--config", path, "--out", str(tmp_path / "b"), "--seed", "99"])
    a = (tmp_path / "a" / "fidelity.csv").read_text()
    b = (tmp_path / "b" / "fidelity.csv").read_text()
    assert a != b
    sidecar = json.loads((tmp_path / "b" / "fidelity_config.json").read_text())
    assert sidecar["master_seed"] == 99


def test_cli_json_format_and_threads(tmp_path):
    path = write_config(
        tmp_path, {"experiment": "sampling", "n_list": [2], "L_list": [0], "s": 1, "shots": 50}
    )
    code = cli.main(
        ["sampling", "--config", path, "--out", str(tmp_path), "--format", "json", "--threads", "2"]
    )
    assert code == 0
    summary = json.loads((tmp_path / "sampling_summary.json").read_text())
    dists = json.loads((tmp_path / "sampling_distributions.json").read_text())
    assert len(summary) == 1 and len(dists) == 4


def test_cli_config_errors_exit_2(tmp_path, capsys):
    bad = write_config(tmp_path, {"experiment": "fidelity", "s": 0})
    assert cli.main(["fidelity", "--config", bad]) == 2
    assert "config error" in capsys.readouterr().err

    missing = str(tmp_path / "nope.json")
    assert cli.main(["fidelity", "--config", missing]) == 2

    mismatched = write_config(tmp_path, {"experiment": "otoc"})
    assert cli.main(["fidelity", "--config", mismatched]) == 2

    good = write_config(tmp_path, {"experiment": "fidelity"})
    assert cli.main(["fidelity", "--config", good, "--seed", "-4"]) == 2
    assert cli.main(["fidelity", "--config", good, "--threads", "0"]) == 2


def test_cli_consistency_errors_exit_3(tmp_path, monkeypatch, capsys):
    path = write_config(tmp_path, {"experiment": "otoc", "n_list": [2], "L_list": [1], "s": 1})

    def explode(config, threads=1):
        raise ConsistencyError("synthetic failure")

    monkeypatch.setitem(cli._RUNNERS, "otoc", ("otoc", explode))
    assert cli.main(["otoc", "--config", path, "--out", str(tmp_path)]) == 3
    assert "consistency" in capsys.readouterr().err


def test_cli_haar_oracle_and_entanglement_outputs(tmp_path):
    path = write_config(tmp_path, {"experiment": "haar-oracle", "n_list": [2], "count": 50})
    assert cli.main(["haar-oracle", "--config", path, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "haar_oracle.csv").exists()

    path = write_config(
        tmp_path, {"experiment": "pt-hist", "n_list": [3], "L_list": [1], "s": 2}
    )
    assert cli.main(["pt-hist", "--config", path, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "pt_hist_bins.csv").exists()
    assert (tmp_path / "pt_hist_summary.csv").exists()


def test_load_config_round_trip(tmp_path):
    path = write_config(tmp_path, {"experiment": "fidelity", "n_list": [2, 4]})
    config = load_config(path)
    assert config.n_list == (2, 4)
    with pytest.raises(ConfigError, match="JSON"):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        load_config(bad)
