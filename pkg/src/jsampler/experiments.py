"""Reproducible experiment sweeps over circuit size, depth, noise and seeds.

Every sweep point derives its circuit seeds from (master_seed, n, L, index),
so adding sizes or depths to a config never reshuffles the other rows, and
any output row can be regenerated from the seed it carries. Sweep points are
independent and may run in a process pool; rows are always emitted in
deterministic (n, L, index) order regardless of worker count.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import chaos, entanglement, fidelity, noise
from .circuit import ENSEMBLES, SamplerSpec, random_params, sampler_state
from .statevector import sample_counts
from .validation import MAX_QUBITS

EXPERIMENTS = ("fidelity", "sampling", "entanglement", "otoc", "pt-hist", "haar-oracle")


class ConfigError(ValueError):
    """A config field failed validation; the message names the field."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_list: tuple = (4,)
    l_list: tuple = (0, 1, 2, 3, 4)
    ensemble: str = "continuous"
    s: int = 4
    shots: int = 8000
    r: int = 8
    nu: int = 8
    epsilon: float = 0.0
    readout: noise.ReadoutModel | None = None
    master_seed: int = 0
    mode: str = "exact"
    otoc_mode: str = "abs"
    bins: int = 24
    count: int = 2000

    def to_dict(self) -> dict:
        data = {
            "experiment": self.experiment,
            "n_list": list(self.n_list),
            "L_list": list(self.l_list),
            "ensemble": self.ensemble,
            "s": self.s,
            "shots": self.shots,
            "r": self.r,
            "nu": self.nu,
            "epsilon": self.epsilon,
            "readout": None if self.readout is None else self.readout.to_dict(),
            "master_seed": self.master_seed,
            "mode": self.mode,
            "otoc_mode": self.otoc_mode,
            "bins": self.bins,
            "count": self.count,
        }
        return data


def _int_list(value, name, lo, hi) -> tuple:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{name}: expected a non-empty list")
    out = []
    for item in value:
        if not isinstance(item, int) or isinstance(item, bool):
            raise ConfigError(f"{name}: entries must be integers, got {item!r}")
        if not lo <= item <= hi:
            raise ConfigError(f"{name}: {item} outside [{lo}, {hi}]")
        out.append(item)
    return tuple(out)


def _int_field(value, name, lo, hi=None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if value < lo or (hi is not None and value > hi):
        bound = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
        raise ConfigError(f"{name}: must be {bound}, got {value}")
    return value


def _parse_readout(value):
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError("readout: expected an object or null")
    try:
        if "flips" in value:
            return noise.ReadoutModel.from_dict(value)
        if "p01" in value:
            return float(value["p01"]), float(value.get("p10", value["p01"]))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"readout: {exc}") from exc
    raise ConfigError("readout: expected keys 'flips' or 'p01'/'p10'")


def config_from_dict(data) -> ExperimentConfig:
    """Build a validated config from a parsed JSON object."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    known = {
        "experiment", "n_list", "L_list", "ensemble", "s", "shots", "r", "nu",
        "epsilon", "readout", "master_seed", "mode", "otoc_mode", "bins", "count",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"config: unknown fields {sorted(unknown)}")
    experiment = data.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: must be one of {EXPERIMENTS}, got {experiment!r}")
    ensemble = data.get("ensemble", "continuous")
    if ensemble not in ENSEMBLES:
        raise ConfigError(f"ensemble: must be one of {ENSEMBLES}, got {ensemble!r}")
    epsilon = data.get("epsilon", 0.0)
    if not isinstance(epsilon, (int, float)) or isinstance(epsilon, bool) or not 0 <= epsilon <= 1:
        raise ConfigError(f"epsilon: must be a number in [0, 1], got {epsilon!r}")
    mode = data.get("mode", "exact")
    if mode not in ("exact", "tomographic"):
        raise ConfigError(f"mode: must be 'exact' or 'tomographic', got {mode!r}")
    otoc_mode = data.get("otoc_mode", "abs")
    if otoc_mode not in ("abs", "real_part"):
        raise ConfigError(f"otoc_mode: must be 'abs' or 'real_part', got {otoc_mode!r}")
    readout = _parse_readout(data.get("readout"))
    # per-experiment ceilings: Pauli enumeration (4^n), full OTOC traces and
    # the Haar oracle grow too fast for the generic n cap
    n_cap = {"fidelity": 10, "otoc": 12, "haar-oracle": 8}.get(experiment, MAX_QUBITS)
    n_list = _int_list(data.get("n_list", [4]), "n_list", 2, n_cap)
    if isinstance(readout, noise.ReadoutModel):
        for n in n_list:
            if readout.n_qubits != n:
                raise ConfigError(
                    f"readout: explicit flips cover {readout.n_qubits} qubits "
                    f"but n_list contains {n}"
                )
    return ExperimentConfig(
        experiment=experiment,
        n_list=n_list,
        l_list=_int_list(data.get("L_list", [0, 1, 2, 3, 4]), "L_list", 0, 64),
        ensemble=ensemble,
        s=_int_field(data.get("s", 4), "s", 1),
        shots=_int_field(data.get("shots", 8000), "shots", 1),
        r=_int_field(data.get("r", 8), "r", 1),
        nu=_int_field(data.get("nu", 8), "nu", 1),
        epsilon=float(epsilon),
        readout=readout,
        master_seed=_int_field(data.get("master_seed", 0), "master_seed", 0),
        mode=mode,
        otoc_mode=otoc_mode,
        bins=_int_field(data.get("bins", 24), "bins", 2),
        count=_int_field(data.get("count", 2000), "count", 1),
    )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def circuit_seed(master_seed, n, n_layers, index, stream=0) -> int:
    """Deterministic per-circuit seed; stream separates independent RNG uses."""
    ss = np.random.SeedSequence([int(master_seed), int(n), int(n_layers), int(index), int(stream)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _readout_for(config: ExperimentConfig, n):
    if config.readout is None:
        return None
    if isinstance(config.readout, noise.ReadoutModel):
        return config.readout
    p01, p10 = config.readout
    return noise.ReadoutModel.uniform(n, p01, p10)


def _point_specs(config: ExperimentConfig, n, n_layers):
    seeds = [circuit_seed(config.master_seed, n, n_layers, i) for i in range(config.s)]
    specs = [
        SamplerSpec(n, n_layers, random_params(n, n_layers, config.ensemble, seed))
        for seed in seeds
    ]
    return seeds, specs


def _mean_sem(values) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def _join_seeds(seeds) -> str:
    return ";".join(str(s) for s in seeds)


def fidelity_record(spec: SamplerSpec, seed, epsilon=0.0, n_paulis=8, dfe_seed=None) -> dict:
    """Per-circuit fidelity record in the documented JSON row format."""
    state = sampler_state(spec)
    p_ideal = state.probabilities()
    p_meas = noise.depolarize_dist(p_ideal, epsilon)
    estimate = fidelity.dfe_estimate(state, epsilon=epsilon, n_paulis=n_paulis, seed=dfe_seed)
    summary = fidelity.dist_summary(p_meas)
    return {
        "n": spec.n_qubits,
        "L": spec.n_layers,
        "seed": seed,
        "F_exact": fidelity.state_fidelity_exact(state, state, epsilon),
        "F_dfe": estimate.value,
        "F_dfe_err": estimate.std_error,
        "F_in": fidelity.information_fidelity(p_meas, p_ideal),
        "l1": fidelity.l1_error(p_meas, p_ideal),
        "shannon": summary.shannon,
        "mean_index": summary.mean_index,
    }


def entanglement_record(spec: SamplerSpec, seed, shots=None, tomography_seed=None) -> dict:
    """Per-circuit entanglement record; shot-based tomography when shots is given."""
    state = sampler_state(spec)
    if shots is None:
        report = entanglement.entanglement_report(state)
    else:
        report = entanglement.entanglement_report_tomographic(state, shots, tomography_seed)
    return {
        "n": spec.n_qubits,
        "L": spec.n_layers,
        "seed": seed,
        "gammas": report.gammas.tolist(),
        "Q": report.q,
        "S2": report.s2,
        "Se": report.se,
        "haar_Q": entanglement.haar_q(spec.n_qubits),
        "page_Se": entanglement.page_entropy(2, 1 << (spec.n_qubits - 1)),
    }


# -- sweep point workers (module-level so a process pool can pickle them) -----


def _fidelity_point(args):
    config, n, n_layers = args
    seeds, specs = _point_specs(config, n, n_layers)
    f_exact, f_dfe, f_in = [], [], []
    for i, spec in enumerate(specs):
        ideal = sampler_state(spec)
        p_ideal = ideal.probabilities()
        f_exact.append(fidelity.state_fidelity_exact(ideal, ideal, config.epsilon))
        estimate = fidelity.dfe_estimate(
            ideal,
            epsilon=config.epsilon,
            n_paulis=config.r,
            seed=circuit_seed(config.master_seed, n, n_layers, i, stream=1),
        )
        f_dfe.append(estimate.value)
        f_in.append(
            fidelity.information_fidelity(
                noise.depolarize_dist(p_ideal, config.epsilon), p_ideal
            )
        )
    row = {
        "n": n,
        "L": n_layers,
        "ensemble": config.ensemble,
        "epsilon": config.epsilon,
        "seeds": _join_seeds(seeds),
    }
    for name, values in (("f_exact", f_exact), ("f_dfe", f_dfe), ("f_in", f_in)):
        mean, sem = _mean_sem(values)
        row[f"{name}_mean"] = mean
        row[f"{name}_sem"] = sem
    return [row]


def _sampling_point(args):
    config, n, n_layers = args
    seeds, specs = _point_specs(config, n, n_layers)
    readout = _readout_for(config, n)
    summary_rows, dist_rows = [], []
    for i, (seed, spec) in enumerate(zip(seeds, specs)):
        p_ideal = sampler_state(spec).probabilities()
        p_noisy = noise.depolarize_dist(p_ideal, config.epsilon)
        if readout is not None:
            p_noisy = noise.apply_readout_error(p_noisy, readout)
        p_meas = sample_counts(
            p_noisy, config.shots,
            circuit_seed(config.master_seed, n, n_layers, i, stream=2),
        )
        summary = fidelity.dist_summary(p_meas)
        summary_rows.append(
            {
                "n": n,
                "L": n_layers,
                "seed": seed,
                "ave": summary.ave,
                "std": summary.std,
                "shannon": summary.shannon,
                "mean_index": summary.mean_index,
                "l1": fidelity.l1_error(p_meas, p_ideal),
                "one_minus_f": 1.0 - noise.depolarized_state_fidelity(config.epsilon, n),
                "one_minus_f_in": 1.0 - fidelity.information_fidelity(p_meas, p_ideal),
            }
        )
        for x in range(p_ideal.size):
            dist_rows.append(
                {
                    "n": n,
                    "L": n_layers,
                    "seed": seed,
                    "x": x,
                    "p_ideal": float(p_ideal[x]),
                    "p_meas": float(p_meas[x]),
                }
            )
    return summary_rows, dist_rows


def _entanglement_point(args):
    config, n, n_layers = args
    seeds, specs = _point_specs(config, n, n_layers)
    q, s2, se = [], [], []
    for i, spec in enumerate(specs):
        state = sampler_state(spec)
        if config.mode == "tomographic":
            report = entanglement.entanglement_report_tomographic(
                state, config.shots,
                circuit_seed(config.master_seed, n, n_layers, i, stream=3),
            )
        else:
            report = entanglement.entanglement_report(state)
        q.append(report.q)
        s2.append(report.s2)
        se.append(report.se)
    row = {
        "n": n,
        "L": n_layers,
        "ensemble": config.ensemble,
        "mode": config.mode,
        "seeds": _join_seeds(seeds),
    }
    for name, values in (("q", q), ("s2", s2), ("se", se)):
        mean, sem = _mean_sem(values)
        row[f"{name}_mean"] = mean
        row[f"{name}_sem"] = sem
    row["haar_q"] = entanglement.haar_q(n)
    row["page_se"] = entanglement.page_entropy(2, 1 << (n - 1))
    return [row]


def _otoc_point(args):
    config, n, n_layers = args
    seeds, specs = _point_specs(config, n, n_layers)
    rows = []
    for i, (seed, spec) in enumerate(zip(seeds, specs)):
        record = chaos.otoc_record(
            spec,
            n_samples=min(config.nu, 1 << n),
            seed=circuit_seed(config.master_seed, n, n_layers, i, stream=4),
            mode=config.otoc_mode,
            epsilon=config.epsilon,
        )
        rows.append(
            {
                "n": n,
                "L": n_layers,
                "ensemble": config.ensemble,
                "seed": seed,
                "F_exact": record.f_exact,
                "F_stochastic": record.f_stochastic,
                "nu": record.n_samples,
                "wvvw": record.wvvw,
                "ratio": record.ratio,
                "max_im_G": record.max_im_g,
            }
        )
    return rows


def _pt_point(args):
    config, n, n_layers = args
    seeds, specs = _point_specs(config, n, n_layers)
    dists = [sampler_state(spec).probabilities() for spec in specs]
    hist = chaos.pt_histogram(dists, bins=config.bins)
    hist_rows = [
        {
            "n": n,
            "L": n_layers,
            "seeds": _join_seeds(seeds),
            "bin_lo": float(hist.edges[b]),
            "bin_hi": float(hist.edges[b + 1]),
            "observed": float(hist.observed[b]),
            "reference": float(hist.reference[b]),
        }
        for b in range(hist.observed.size)
    ]
    entropies = [fidelity.shannon_entropy(d) for d in dists]
    mean, sem = _mean_sem(entropies)
    summary = {
        "n": n,
        "L": n_layers,
        "ensemble": config.ensemble,
        "seeds": _join_seeds(seeds),
        "shannon_mean": mean,
        "shannon_sem": sem,
        "pt_entropy": chaos.pt_entropy(n),
        "one_over_n": hist.one_over_n,
    }
    return hist_rows, [summary]


def _haar_point(args):
    config, n, _ = args
    seed = circuit_seed(config.master_seed, n, 0, 0, stream=5)
    sample = entanglement.haar_reference_sample(n, config.count, seed)
    row = {"n": n, "count": config.count, "seed": seed}
    for name, values in (("q", sample.q), ("s2", sample.s2), ("se", sample.se)):
        mean, sem = _mean_sem(values)
        row[f"{name}_mean"] = mean
        row[f"{name}_sem"] = sem
    row["haar_q"] = entanglement.haar_q(n)
    row["page_se"] = entanglement.page_entropy(2, 1 << (n - 1))
    return [row]


def _map_points(worker, points, threads):
    if threads > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, points))
    return [worker(point) for point in points]


def _points(config: ExperimentConfig):
    return [(config, n, n_layers) for n in config.n_list for n_layers in config.l_list]


def run_fidelity_sweep(config: ExperimentConfig, threads=1) -> list:
    """One aggregated row per (n, L): exact, estimated and information fidelity."""
    results = _map_points(_fidelity_point, _points(config), threads)
    return [row for rows in results for row in rows]


def run_sampling_experiment(config: ExperimentConfig, threads=1) -> tuple:
    """Per-circuit distribution summaries plus a per-basis-state dump."""
    results = _map_points(_sampling_point, _points(config), threads)
    summary = [row for rows, _ in results for row in rows]
    dists = [row for _, rows in results for row in rows]
    return summary, dists


def run_entanglement_sweep(config: ExperimentConfig, threads=1) -> list:
    """One row per (n, L): Q, S2, Se with Haar and Page reference columns."""
    results = _map_points(_entanglement_point, _points(config), threads)
    return [row for rows in results for row in rows]


def run_otoc_sweep(config: ExperimentConfig, threads=1) -> list:
    """Per-circuit OTOC diagnostics."""
    results = _map_points(_otoc_point, _points(config), threads)
    return [row for rows in results for row in rows]


def run_pt_histogram(config: ExperimentConfig, threads=1) -> tuple:
    """Binned Porter-Thomas histograms plus per-point entropy summaries."""
    results = _map_points(_pt_point, _points(config), threads)
    hist = [row for rows, _ in results for row in rows]
    summary = [row for _, rows in results for row in rows]
    return hist, summary


def run_haar_oracle(config: ExperimentConfig, threads=1) -> list:
    """Monte-Carlo Haar reference values per qubit count."""
    points = [(config, n, 0) for n in config.n_list]
    results = _map_points(_haar_point, points, threads)
    return [row for rows in results for row in rows]


# -- output ------------------------------------------------------------------


def rows_to_csv(rows) -> str:
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def write_rows(rows, path, fmt="csv") -> None:
    path = Path(path)
    if fmt == "csv":
        path.write_text(rows_to_csv(rows))
    elif fmt == "json":
        path.write_text(json.dumps(rows, indent=2) + "\n")
    else:
        raise ConfigError(f"format: must be 'csv' or 'json', got {fmt!r}")


def write_config_sidecar(config: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")
