"""Reproducible experiment harness.

One :class:`ExperimentConfig` describes a run end to end: placement, radio
parameters, which decomposition methods to compare, refinement settings,
Monte Carlo sample counts and repetition count. Every repetition derives its
placement and fading seeds from the master seed through named substreams, so
a config plus a seed pins every byte of the output.

Outputs per repetition directory:

* ``nodes.csv``                 node_id,kind,x,y
* ``assignment-<method>.csv``   node_id,cluster_id
* ``clusters-<method>.csv``     cluster_id,n_bs,n_users,centroid_x,centroid_y,capacity,capacity_stderr
* ``metrics.json``              list of per-method records (method, seed, L,
                                c_min, c_max, c_avg, c_var, iterations,
                                converged, config_hash, ...)

``run_sweep`` aggregates repetitions per side length into ``sweep.csv`` and
``run_lemma1_diagnostic`` writes ``lemma1.csv``.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .capacity import NetworkReport, lemma1_offdiagonal_ratio, network_report
from .channel import FadingBatch
from .clustering import (
    RefinementConfig,
    RefinementTrace,
    bs_clustering_partition,
    cellular_partition,
    cgn_partition,
    exhaustive_maxmin,
)
from .model import Network, NodeKind, Partition, PhysicalParams, cluster_views
from .placement import PlacementSpec, generate_network, substream_seed

METHODS = ("cgn", "bs_clustering", "cellular")


class ConfigError(ValueError):
    """The experiment configuration is inconsistent or unusable."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a comparison run needs. Defaults follow the reference
    simulation settings (L=40, P=1 W, N0=0.09 W, alpha=4, d0=5 m, delta=0.2)
    with densities 0.04 users/m^2 and 0.02 BSs/m^2."""

    placement: PlacementSpec = field(default_factory=PlacementSpec)
    physical: PhysicalParams = field(default_factory=PhysicalParams)
    L: int = 40
    methods: tuple[str, ...] = METHODS
    refinement: RefinementConfig = field(default_factory=RefinementConfig)
    mc_samples_refine: int = 200
    mc_samples_report: int = 1000
    sweep: tuple[float, ...] | None = None
    repetitions: int = 1
    output_dir: str = "results"
    bs_per_cluster: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.sweep is not None:
            object.__setattr__(self, "sweep", tuple(float(a) for a in self.sweep))
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ConfigError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")
        if not self.methods:
            raise ConfigError("at least one method is required")
        if self.L < 1:
            raise ConfigError("L must be positive")
        if self.mc_samples_refine < 1 or self.mc_samples_report < 1:
            raise ConfigError("Monte Carlo sample counts must be positive")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be positive")
        if self.bs_per_cluster is not None and self.bs_per_cluster < 1:
            raise ConfigError("bs_per_cluster must be positive when given")

    def clusters_for(self, network: Network) -> int:
        """Cluster count for one network: fixed L, or scaled so each cluster
        holds about ``bs_per_cluster`` base stations."""
        if self.bs_per_cluster is None:
            return self.L
        return max(2, round(network.num_bs / self.bs_per_cluster))

    def with_placement(self, **kwargs) -> "ExperimentConfig":
        return dataclasses.replace(self, placement=dataclasses.replace(self.placement, **kwargs))

    def to_dict(self) -> dict:
        def plain(obj):
            if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
                return {k: plain(v) for k, v in dataclasses.asdict(obj).items()}
            if isinstance(obj, (tuple, list)):
                return [plain(v) for v in obj]
            return obj

        out = {f.name: plain(getattr(self, f.name)) for f in dataclasses.fields(self)}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        try:
            if "placement" in data and isinstance(data["placement"], dict):
                placement = dict(data["placement"])
                if placement.get("explicit_counts") is not None:
                    placement["explicit_counts"] = tuple(placement["explicit_counts"])
                data["placement"] = PlacementSpec(**placement)
            if "physical" in data and isinstance(data["physical"], dict):
                data["physical"] = PhysicalParams(**data["physical"])
            if "refinement" in data and isinstance(data["refinement"], dict):
                data["refinement"] = RefinementConfig(**data["refinement"])
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad experiment config: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)


def config_hash(config: ExperimentConfig) -> str:
    payload = config.to_dict()
    payload.pop("output_dir", None)  # where results land is not part of the experiment
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


# ---------------------------------------------------------------------------
# per-repetition plumbing

def rep_seeds(config: ExperimentConfig, rep: int) -> dict[str, int]:
    master = config.placement.seed
    return {
        "placement": substream_seed(master, "placement", rep),
        "refine_fading": substream_seed(master, "fading/refine", rep),
        "report_fading": substream_seed(master, "fading/report", rep),
        "cgn_init": substream_seed(master, "init/cgn", rep),
        "bs_clustering": substream_seed(master, "init/bs-clustering", rep),
    }


def build_network(config: ExperimentConfig, rep: int) -> Network:
    seeds = rep_seeds(config, rep)
    spec = dataclasses.replace(config.placement, seed=seeds["placement"])
    return generate_network(spec, config.physical)


@dataclass(frozen=True)
class MethodResult:
    method: str
    partition: Partition
    report: NetworkReport
    iterations: int
    converged: bool
    trace: RefinementTrace | None = None


def run_method(method: str, network: Network, config: ExperimentConfig, rep: int,
               report_batch: FadingBatch | None = None) -> MethodResult:
    seeds = rep_seeds(config, rep)
    num_clusters = config.clusters_for(network)
    trace = None
    if method == "cellular":
        partition = cellular_partition(network)
        iterations, converged = 0, True
    elif method == "bs_clustering":
        partition = bs_clustering_partition(network, num_clusters, seeds["bs_clustering"])
        iterations, converged = 0, True
    elif method == "cgn":
        refine_cfg = dataclasses.replace(config.refinement, seed=seeds["cgn_init"])
        refine_batch = FadingBatch(num_samples=config.mc_samples_refine, seed=seeds["refine_fading"])
        partition, trace = cgn_partition(network, num_clusters, refine_batch, refine_cfg)
        iterations, converged = trace.num_iterations, trace.converged
    else:
        raise ConfigError(f"unknown method {method!r}")
    if report_batch is None:
        report_batch = FadingBatch(num_samples=config.mc_samples_report, seed=seeds["report_fading"])
    report = network_report(network, partition, report_batch)
    return MethodResult(method=method, partition=partition, report=report,
                        iterations=iterations, converged=converged, trace=trace)


def compare_methods(network: Network, config: ExperimentConfig, rep: int) -> dict[str, MethodResult]:
    # one report batch per repetition: common random numbers across methods,
    # and the per-BS fading rows are generated once instead of per method
    seeds = rep_seeds(config, rep)
    report_batch = FadingBatch(num_samples=config.mc_samples_report, seed=seeds["report_fading"])
    return {method: run_method(method, network, config, rep, report_batch) for method in config.methods}


# ---------------------------------------------------------------------------
# file output

def _fmt(x: float) -> str:
    return repr(float(x))


def write_nodes_csv(path: Path, network: Network) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("node_id,kind,x,y\n")
        for node in network.nodes:
            kind = "bs" if node.kind is NodeKind.BASE_STATION else "user"
            fh.write(f"{node.id},{kind},{_fmt(node.position.x)},{_fmt(node.position.y)}\n")


def read_nodes_csv(path: Path, params: PhysicalParams | None = None) -> Network:
    bs_xy, user_xy = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            target = bs_xy if row["kind"] == "bs" else user_xy
            target.append((float(row["x"]), float(row["y"])))
    return Network.from_positions(np.array(bs_xy), np.array(user_xy), params or PhysicalParams())


def write_assignment_csv(path: Path, partition: Partition) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("node_id,cluster_id\n")
        for node_id, cid in enumerate(partition.idx):
            fh.write(f"{node_id},{int(cid)}\n")


def read_assignment_csv(path: Path, num_clusters: int) -> Partition:
    mapping: dict[int, int] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            mapping[int(row["node_id"])] = int(row["cluster_id"])
    return Partition.from_mapping(num_clusters, mapping)


def write_clusters_csv(path: Path, network: Network, result: MethodResult) -> None:
    views = cluster_views(network, result.partition)
    with open(path, "w", newline="") as fh:
        fh.write("cluster_id,n_bs,n_users,centroid_x,centroid_y,capacity,capacity_stderr\n")
        for view, est in zip(views, result.report.per_cluster):
            if view.centroid is not None:
                cx, cy = _fmt(view.centroid.x), _fmt(view.centroid.y)
            else:
                cx = cy = ""  # empty cluster: centroid is flagged, not faked
            fh.write(f"{view.cluster_id},{view.n_bs},{view.n_users},{cx},{cy},"
                     f"{_fmt(est.mean)},{_fmt(est.std_error)}\n")


def metrics_record(config: ExperimentConfig, network: Network, result: MethodResult,
                   rep: int) -> dict:
    seeds = rep_seeds(config, rep)
    return {
        "method": result.method,
        "seed": seeds["placement"],
        "L": result.partition.num_clusters,
        "c_min": float(result.report.c_min),
        "c_max": float(result.report.c_max),
        "c_avg": float(result.report.c_avg),
        "c_var": float(result.report.c_var),
        "iterations": result.iterations,
        "converged": bool(result.converged),
        "config_hash": config_hash(config),
        "version": __version__,
        "rep": rep,
        "fading_seed": seeds["report_fading"],
        "mc_samples": config.mc_samples_report,
    }


def write_metrics_json(path: Path, records: list[dict]) -> None:
    with open(path, "w") as fh:
        json.dump(records, fh, sort_keys=True, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# runners

def run_compare(config: ExperimentConfig, out_dir: str | Path | None = None) -> dict:
    """Generate one network per repetition, run every requested method and
    serialize nodes, assignments, cluster tables and metrics. Returns the
    cross-repetition aggregate (mean and std of c_min/c_avg/c_var per method)."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    per_method: dict[str, list[dict]] = {mth: [] for mth in config.methods}
    for rep in range(config.repetitions):
        rep_dir = out / f"rep{rep:03d}"
        rep_dir.mkdir(parents=True, exist_ok=True)
        network = build_network(config, rep)
        write_nodes_csv(rep_dir / "nodes.csv", network)
        records = []
        for method, result in compare_methods(network, config, rep).items():
            write_assignment_csv(rep_dir / f"assignment-{method}.csv", result.partition)
            write_clusters_csv(rep_dir / f"clusters-{method}.csv", network, result)
            record = metrics_record(config, network, result, rep)
            records.append(record)
            per_method[method].append(record)
        write_metrics_json(rep_dir / "metrics.json", records)

    summary = {"config_hash": config_hash(config), "repetitions": config.repetitions,
               "version": __version__, "methods": {}}
    for method, records in per_method.items():
        stats = {}
        for metric in ("c_min", "c_avg", "c_var"):
            values = np.array([r[metric] for r in records])
            stats[f"{metric}_mean"] = float(values.mean())
            stats[f"{metric}_std"] = float(values.std())
        summary["methods"][method] = stats
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return summary


def run_sweep(config: ExperimentConfig, out_dir: str | Path | None = None) -> list[dict]:
    """One aggregated row per (side length, method), written to sweep.csv."""
    if not config.sweep:
        raise ConfigError("sweep requires a nonempty list of side lengths")
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for a in config.sweep:
        sub = config.with_placement(side_length=float(a))
        collected: dict[str, dict[str, list[float]]] = {
            mth: {"c_min": [], "c_avg": [], "c_var": []} for mth in config.methods
        }
        for rep in range(config.repetitions):
            network = build_network(sub, rep)
            for method, result in compare_methods(network, sub, rep).items():
                collected[method]["c_min"].append(result.report.c_min)
                collected[method]["c_avg"].append(result.report.c_avg)
                collected[method]["c_var"].append(result.report.c_var)
        for method in config.methods:
            row = {"a": float(a), "method": method, "reps": config.repetitions}
            for metric in ("c_min", "c_avg", "c_var"):
                values = np.array(collected[method][metric])
                row[f"{metric}_mean"] = float(values.mean())
                row[f"{metric}_std"] = float(values.std())
            rows.append(row)
    with open(out / "sweep.csv", "w", newline="") as fh:
        fh.write("a,method,c_min_mean,c_min_std,c_avg_mean,c_avg_std,c_var_mean,c_var_std,reps\n")
        for row in rows:
            fh.write(f"{_fmt(row['a'])},{row['method']},"
                     f"{_fmt(row['c_min_mean'])},{_fmt(row['c_min_std'])},"
                     f"{_fmt(row['c_avg_mean'])},{_fmt(row['c_avg_std'])},"
                     f"{_fmt(row['c_var_mean'])},{_fmt(row['c_var_std'])},{row['reps']}\n")
    return rows


def run_lemma1_diagnostic(
    config: ExperimentConfig,
    cluster_sizes: Sequence[int],
    outside_user_counts: Sequence[int],
    out_dir: str | Path | None = None,
    num_samples: int = 20,
) -> list[dict]:
    """Mean off-diagonal ratio of the sampled interference Gram matrix for a
    fixed cluster of base stations against a growing outside user population.

    For each (cluster size M_l, outside count) pair a fresh uniform network is
    drawn with exactly M_l base stations, all forming the observed cluster,
    and the given number of users outside it. Rows go to ``lemma1.csv``.
    """
    if num_samples < 1:
        raise ConfigError("lemma1 diagnostic needs at least one fading sample")
    if any(m < 2 for m in cluster_sizes):
        raise ConfigError("the off-diagonal ratio needs clusters of at least two base stations")
    if any(n < 1 for n in outside_user_counts):
        raise ConfigError("outside user counts must be positive")
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    master = config.placement.seed
    rows = []
    for m_l in cluster_sizes:
        for case_idx, k_outside in enumerate(outside_user_counts):
            spec = dataclasses.replace(
                config.placement,
                explicit_counts=(int(k_outside), int(m_l)),
                seed=substream_seed(master, f"lemma1/m{m_l}", case_idx),
            )
            network = generate_network(spec, config.physical)
            # cluster 0: all base stations; cluster 1: every user (outside)
            labels = np.concatenate([np.zeros(m_l, dtype=np.int64),
                                     np.ones(k_outside, dtype=np.int64)])
            view = cluster_views(network, Partition(num_clusters=2, idx=labels))[0]
            batch = FadingBatch(num_samples=num_samples,
                                seed=substream_seed(master, f"lemma1/fading/m{m_l}", case_idx))
            ratios = [lemma1_offdiagonal_ratio(network, view, batch, s) for s in range(num_samples)]
            rows.append({"k_outside": int(k_outside), "m_l": int(m_l),
                         "mean_ratio": float(np.mean(ratios)), "samples": num_samples})
    with open(out / "lemma1.csv", "w", newline="") as fh:
        fh.write("k_outside,m_l,mean_ratio,samples\n")
        for row in rows:
            fh.write(f"{row['k_outside']},{row['m_l']},{_fmt(row['mean_ratio'])},{row['samples']}\n")
    return rows


def run_enumerate(config: ExperimentConfig, out_dir: str | Path | None = None,
                  max_assignments: int = 1_000_000) -> dict:
    """Toy-scale brute force: exact max-min partition of repetition 0's network."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    network = build_network(config, 0)
    seeds = rep_seeds(config, 0)
    batch = FadingBatch(num_samples=config.mc_samples_report, seed=seeds["report_fading"])
    num_clusters = config.clusters_for(network)
    partition, c_min = exhaustive_maxmin(network, num_clusters, batch, max_assignments=max_assignments)
    write_nodes_csv(out / "nodes.csv", network)
    write_assignment_csv(out / "assignment-exhaustive.csv", partition)
    payload = {"c_min": float(c_min), "L": num_clusters, "seed": seeds["placement"],
               "config_hash": config_hash(config), "version": __version__}
    with open(out / "exhaustive.json", "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return payload
