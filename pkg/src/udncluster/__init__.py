"""Capacity-driven clustering of ultra-dense wireless networks."""

__version__ = "0.1.0"

from .capacity import (
    CapacityEstimate,
    CapacityEvaluator,
    NetworkReport,
    NumericalError,
    cluster_capacity_asymptotic,
    cluster_capacity_exact,
    interference_diagonal,
    lemma1_offdiagonal_ratio,
    network_report,
)
from .channel import ChannelMatrices, FadingBatch, large_scale_fading, link_gains, sample_channel
from .clustering import (
    RefinementConfig,
    RefinementTrace,
    bs_clustering_partition,
    cellular_partition,
    cgn_partition,
    cgn_refine,
    enumerate_partitions,
    exhaustive_maxmin,
    initial_partition,
    kmeans_pp,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    MethodResult,
    build_network,
    compare_methods,
    run_compare,
    run_enumerate,
    run_lemma1_diagnostic,
    run_sweep,
)
from .model import (
    ClusterView,
    Network,
    NetworkNode,
    NodeKind,
    Partition,
    PhysicalParams,
    Position,
    cluster_views,
    euclidean_distance,
    point_to_set_distance,
    validate_partition,
)
from .placement import PlacementSpec, generate_network, substream_rng, substream_seed
