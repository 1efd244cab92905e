"""mmwmac: a slotted simulator and analytic toolkit for short-range
millimeter-wave MAC protocols under directional antennas and blockage."""

__version__ = "0.1.0"

from .geometry import (
    Deployment,
    DeploymentConfig,
    DirectedLink,
    Obstacle,
    Point2D,
    count_blockers,
    deployment_from_json,
    deployment_to_json,
    sample_deployment,
    segments_intersect,
)
from .radio import (
    AntennaPattern,
    ChannelParams,
    RadioConfig,
    antenna_gain,
    default_link_length_max,
    received_power_dbm,
    resolve_link_length,
    sinr_db,
    snr_db,
)
from .conflict import (
    CollisionDomainHistogram,
    CollisionProbabilityEstimate,
    collision_domain_histogram,
    estimate_collision_probability,
    strong_interferers,
)
from .mac import (
    AlohaConfig,
    MacMetrics,
    OptimalPResult,
    SlotConfig,
    TrafficConfig,
    find_optimal_p,
    run_slotted_aloha,
    run_tdma,
    throughput_curve,
)
from .csma import (
    BackoffConfig,
    ContentionStats,
    CsmaTimings,
    ProtocolVariant,
    ReceptionKind,
    ReceptionOutcome,
    channel_utilization,
    classify_reception,
    run_contention_experiment,
)
from .harness import (
    ExperimentKind,
    ExperimentSpec,
    SummaryRecord,
    run_experiment,
    summarize,
)
from .presets import PRESETS, get_preset
