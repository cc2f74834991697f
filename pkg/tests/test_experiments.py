import json

import numpy as np
import pytest

from udncluster import (
    ConfigError,
    ExperimentConfig,
    FadingBatch,
    PhysicalParams,
    PlacementSpec,
    RefinementConfig,
    build_network,
    network_report,
    run_compare,
    run_lemma1_diagnostic,
    run_sweep,
)
from udncluster.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from udncluster.experiments import (
    config_hash,
    read_assignment_csv,
    read_nodes_csv,
    run_enumerate,
)


def small_config(**overrides) -> ExperimentConfig:
    base = dict(
        placement=PlacementSpec(seed=3, side_length=30.0, explicit_counts=(16, 8)),
        physical=PhysicalParams(),
        L=4,
        methods=("cgn", "bs_clustering", "cellular"),
        refinement=RefinementConfig(delta=0.2, max_iterations=40, seed=1),
        mc_samples_refine=40,
        mc_samples_report=60,
        repetitions=2,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_config_defaults_match_reference_settings():
    config = ExperimentConfig()
    assert config.L == 40
    assert config.physical.transmit_power == 1.0
    assert config.physical.noise_power == 0.09
    assert config.physical.path_loss_alpha == 4.0
    assert config.physical.distance_threshold == 5.0
    assert config.refinement.delta == 0.2
    assert config.placement.user_density == 0.04
    assert config.placement.bs_density == 0.02


def test_config_roundtrip_through_dict():
    config = small_config(sweep=(20.0, 30.0))
    again = ExperimentConfig.from_dict(config.to_dict())
    assert again == config
    assert config_hash(again) == config_hash(config)


def test_config_hash_tracks_changes():
    a = small_config()
    b = small_config(L=5)
    assert config_hash(a) != config_hash(b)


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        small_config(methods=("voronoi",))
    with pytest.raises(ConfigError):
        small_config(repetitions=0)
    with pytest.raises(ConfigError):
        small_config(mc_samples_report=0)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"L": "forty"})


def test_compare_smoke_single_method(tmp_path):
    config = small_config(methods=("cellular",), repetitions=1)
    summary = run_compare(config, tmp_path)
    rep_dir = tmp_path / "rep000"
    assert (rep_dir / "nodes.csv").exists()
    assert (rep_dir / "assignment-cellular.csv").exists()
    assert (rep_dir / "clusters-cellular.csv").exists()
    records = json.loads((rep_dir / "metrics.json").read_text())
    assert len(records) == 1
    record = records[0]
    for key in ("method", "seed", "L", "c_min", "c_max", "c_avg", "c_var",
                "iterations", "converged", "config_hash"):
        assert key in record
    assert record["c_min"] >= 0.0
    assert summary["methods"]["cellular"]["c_min_mean"] >= 0.0


def test_compare_outputs_roundtrip(tmp_path):
    config = small_config(repetitions=1)
    run_compare(config, tmp_path)
    rep_dir = tmp_path / "rep000"
    records = {r["method"]: r for r in json.loads((rep_dir / "metrics.json").read_text())}
    network = read_nodes_csv(rep_dir / "nodes.csv", config.physical)
    for method, record in records.items():
        partition = read_assignment_csv(rep_dir / f"assignment-{method}.csv", record["L"])
        batch = FadingBatch(num_samples=record["mc_samples"], seed=record["fading_seed"])
        report = network_report(network, partition, batch)
        assert report.c_min == pytest.approx(record["c_min"], abs=1e-12)
        assert report.c_avg == pytest.approx(record["c_avg"], abs=1e-12)
        assert report.c_var == pytest.approx(record["c_var"], abs=1e-12)


def test_compare_is_byte_deterministic(tmp_path):
    config = small_config(repetitions=1)
    run_compare(config, tmp_path / "a")
    run_compare(config, tmp_path / "b")
    for name in ("rep000/metrics.json", "rep000/nodes.csv", "summary.json",
                 "rep000/assignment-cgn.csv", "rep000/clusters-cgn.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_row_contract(tmp_path):
    config = small_config(sweep=(20.0, 30.0), repetitions=1, methods=("cellular", "bs_clustering"))
    rows = run_sweep(config, tmp_path)
    assert len(rows) == 2 * 2  # |sweep| x |methods|
    text = (tmp_path / "sweep.csv").read_text().splitlines()
    assert text[0] == "a,method,c_min_mean,c_min_std,c_avg_mean,c_avg_std,c_var_mean,c_var_std,reps"
    assert len(text) == 1 + len(rows)


def test_sweep_network_size_scales_with_area():
    config = ExperimentConfig(
        placement=PlacementSpec(seed=5, side_length=10.0, user_density=0.04, bs_density=0.02),
        repetitions=1,
    )
    for a in (50.0, 100.0):
        net = build_network(config.with_placement(side_length=a), 0)
        assert net.num_users == round(0.04 * a * a)
        assert net.num_bs == round(0.02 * a * a)


def test_sweep_cellular_zero_cmin_with_userless_bs(tmp_path):
    # more base stations than users guarantees a userless cluster
    config = small_config(
        placement=PlacementSpec(seed=9, side_length=25.0, explicit_counts=(3, 6)),
        methods=("cellular",),
        sweep=(25.0,),
        repetitions=2,
    )
    rows = run_sweep(config, tmp_path)
    assert all(row["c_min_mean"] == 0.0 for row in rows)


def test_lemma1_diagnostic_rows_and_validation(tmp_path):
    config = small_config()
    rows = run_lemma1_diagnostic(config, [2], [5, 20], out_dir=tmp_path, num_samples=4)
    assert [r["k_outside"] for r in rows] == [5, 20]
    assert (tmp_path / "lemma1.csv").read_text().startswith("k_outside,m_l,mean_ratio,samples\n")
    with pytest.raises(ConfigError):
        run_lemma1_diagnostic(config, [2], [5], out_dir=tmp_path, num_samples=0)
    with pytest.raises(ConfigError):
        run_lemma1_diagnostic(config, [1], [5], out_dir=tmp_path, num_samples=2)
    with pytest.raises(ConfigError):
        run_lemma1_diagnostic(config, [2], [0], out_dir=tmp_path, num_samples=2)


def test_enumerate_runner(tmp_path):
    config = small_config(
        placement=PlacementSpec(seed=2, side_length=20.0, explicit_counts=(3, 3)),
        L=2,
        mc_samples_report=50,
    )
    payload = run_enumerate(config, tmp_path)
    assert payload["c_min"] >= 0.0
    assert (tmp_path / "assignment-exhaustive.csv").exists()
    assert json.loads((tmp_path / "exhaustive.json").read_text())["L"] == 2


# ---------------------------------------------------------------------------
# CLI

def write_config(tmp_path, **overrides):
    config = small_config(**overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config.to_dict()))
    return path


def test_cli_generate_and_compare(tmp_path):
    cfg = write_config(tmp_path, repetitions=1)
    out = tmp_path / "out"
    assert main(["generate", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    assert (out / "nodes.csv").exists()
    assert main(["compare", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    assert (out / "summary.json").exists()


def test_cli_seed_override_changes_network(tmp_path):
    cfg = write_config(tmp_path, repetitions=1)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["generate", "--config", str(cfg), "--seed", "1", "--out", str(out_a)]) == EXIT_OK
    assert main(["generate", "--config", str(cfg), "--seed", "2", "--out", str(out_b)]) == EXIT_OK
    assert (out_a / "nodes.csv").read_bytes() != (out_b / "nodes.csv").read_bytes()


def test_cli_lemma1(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "lem"
    code = main(["lemma1", "--config", str(cfg), "--out", str(out),
                 "--cluster-sizes", "2", "--outside-counts", "5", "10", "--samples", "3"])
    assert code == EXIT_OK
    assert (out / "lemma1.csv").exists()


def test_cli_enumerate(tmp_path):
    cfg = write_config(
        tmp_path,
        placement=PlacementSpec(seed=2, side_length=20.0, explicit_counts=(3, 2)),
        L=2,
        mc_samples_report=30,
    )
    out = tmp_path / "enum"
    assert main(["enumerate", "--config", str(cfg), "--out", str(out)]) == EXIT_OK


def test_cli_config_errors_exit_2(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["compare", "--config", str(missing)]) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["compare", "--config", str(bad)]) == EXIT_CONFIG
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"methods": ["nope"]}))
    assert main(["compare", "--config", str(wrong)]) == EXIT_CONFIG
    # sweep without a sweep list is a config error too
    ok = write_config(tmp_path)
    assert main(["sweep", "--config", str(ok)]) == EXIT_CONFIG


def test_cli_numerical_failures_exit_3(tmp_path, monkeypatch):
    from udncluster.capacity import NumericalError

    def boom(config):
        raise NumericalError("synthetic failure")

    monkeypatch.setattr("udncluster.cli.run_compare", boom)
    cfg = write_config(tmp_path)
    assert main(["compare", "--config", str(cfg)]) == EXIT_NUMERICAL
