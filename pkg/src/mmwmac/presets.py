"""Named experiment presets for each figure-class result.

Defaults follow the common simulation setup: 10x10 m arena, obstacle density
0.25 (0.11 for the collision-domain study), 2.5 mW transmit power, path-loss
exponent 3, 10 dB decode SNR, 25 us slots, 10 kB packets, 300 Mb/s CBR,
1 s emulation time.
"""

from __future__ import annotations

from dataclasses import replace

from .harness import ExperimentKind, ExperimentSpec

PRESETS: dict[str, ExperimentSpec] = {
    # Collision probability vs beamwidth and link density (worst-case
    # activation, p = 1). The 20x20 arena keeps the half-arena torus cap
    # above the noise-limited link range, so link lengths stay calibrated.
    "transitional-collision": ExperimentSpec(
        kind=ExperimentKind.COLLISION_PROBABILITY,
        beamwidths_deg=(5.0, 15.0, 25.0, 45.0, 90.0, 360.0),
        densities=(0.02, 0.1, 0.25, 1.0),
        transmit_probability=1.0,
        replications=10_000,
        arena_width=20.0,
        arena_height=20.0,
        output_path="out/transitional_collision",
    ),
    # Optimal slotted-ALOHA transmission probability over the same axes.
    "optimal-p": ExperimentSpec(
        kind=ExperimentKind.OPTIMAL_P,
        beamwidths_deg=(5.0, 15.0, 25.0, 45.0, 90.0, 360.0),
        densities=(0.02, 0.1, 0.25, 1.0),
        p_grid=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
        replications=1_000,
        output_path="out/optimal_p",
    ),
    # Per-link throughput of ALOHA at its optimal p against TDMA.
    "aloha-vs-tdma": ExperimentSpec(
        kind=ExperimentKind.ALOHA_VS_TDMA_THROUGHPUT,
        beamwidths_deg=(10.0, 30.0),
        densities=(0.02, 0.1, 0.25, 1.0),
        replications=100,
        mac_replications_per_point=20,
        output_path="out/aloha_vs_tdma",
    ),
    # Network throughput vs delay as the density sweeps 0.02-2 links/m^2.
    "throughput-delay": ExperimentSpec(
        kind=ExperimentKind.THROUGHPUT_DELAY_CURVE,
        beamwidths_deg=(10.0,),
        densities=(0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0),
        replications=100,
        mac_replications_per_point=20,
        output_path="out/throughput_delay",
    ),
    # Collision-domain size distributions; obstacle density 0.11 here.
    "collision-domains": ExperimentSpec(
        kind=ExperimentKind.COLLISION_DOMAINS,
        beamwidths_deg=(5.0, 30.0, 360.0),
        densities=(0.11, 1.0, 10.0),
        obstacle_density=0.11,
        replications=100,
        output_path="out/collision_domains",
    ),
    # Winner backoff, standard RTS/CTS vs collision notification.
    "cn-backoff": ExperimentSpec(
        kind=ExperimentKind.CN_BACKOFF,
        n_devices=20,
        blockage_probs=(0.0, 0.005, 0.01, 0.02, 0.05, 0.1),
        replications=10_000,
        output_path="out/cn_backoff",
    ),
    # RTS/CTS handshake overhead for short payloads.
    "utilization-table": ExperimentSpec(
        kind=ExperimentKind.UTILIZATION_TABLE,
        payload_sizes=(1_000, 10_000),
        output_path="out/utilization_table",
    ),
}


def get_preset(name: str, **overrides) -> ExperimentSpec:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    spec = PRESETS[name]
    return replace(spec, **overrides) if overrides else spec
