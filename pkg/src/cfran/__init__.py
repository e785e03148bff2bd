"""cfran: uplink spectral-efficiency simulation of cell-free massive MIMO
deployments mapped onto the O-RAN node hierarchy (O-RU / O-DU / Near-RT RIC).

The package compares five deployment options that differ in the size of
the inter-working antenna set used for combining (O-RU, O-DU, or global)
and in the presence of an inter-O-DU coordination interface for edge
users. See README.md for the full tour.
"""

from .channel import (
    ChannelRealization,
    PathLossParams,
    calibrate_noise_power,
    export_realization,
    generate_realization,
    import_realization,
    path_loss_db,
    setup_seed,
)
from .clustering import (
    DEPLOYMENT_OPTIONS,
    CATEGORY_EDGE,
    CATEGORY_LOCAL,
    DeploymentOption,
    HybridClusters,
    UserAssignment,
    categorize_users,
    get_option,
    hybrid_cluster_steps,
    serving_antenna_set,
    serving_odus,
)
from .config import ConfigError, SimConfig, parse_config
from .evaluation import (
    LoadReport,
    ResultSet,
    empirical_cdf,
    improvement_table,
    outage_quantile,
    run_campaign,
    signaling_load,
    uplink_se,
    write_results_csv,
    write_summary_json,
)
from .map_engine import (
    BlockPartition,
    FusionReport,
    MapMatrix,
    assemble_dl_transmit,
    block_partition,
    combiner_sinr,
    fuse_estimates,
    joint_sinr,
    map_matrices,
    mmse_combiner,
    uplink_sinr,
)
from .topology import ODU, ORU, Topology, antenna_index_set, build_topology

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization",
    "PathLossParams",
    "calibrate_noise_power",
    "export_realization",
    "generate_realization",
    "import_realization",
    "path_loss_db",
    "setup_seed",
    "DEPLOYMENT_OPTIONS",
    "CATEGORY_EDGE",
    "CATEGORY_LOCAL",
    "DeploymentOption",
    "HybridClusters",
    "UserAssignment",
    "categorize_users",
    "get_option",
    "hybrid_cluster_steps",
    "serving_antenna_set",
    "serving_odus",
    "ConfigError",
    "SimConfig",
    "parse_config",
    "LoadReport",
    "ResultSet",
    "empirical_cdf",
    "improvement_table",
    "outage_quantile",
    "run_campaign",
    "signaling_load",
    "uplink_se",
    "write_results_csv",
    "write_summary_json",
    "BlockPartition",
    "FusionReport",
    "MapMatrix",
    "assemble_dl_transmit",
    "block_partition",
    "combiner_sinr",
    "fuse_estimates",
    "joint_sinr",
    "map_matrices",
    "mmse_combiner",
    "uplink_sinr",
    "ODU",
    "ORU",
    "Topology",
    "antenna_index_set",
    "build_topology",
    "__version__",
]
