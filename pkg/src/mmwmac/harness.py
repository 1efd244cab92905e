"""Experiment orchestration: parameter grids, CSV datasets, JSON sidecars,
and grouped statistical summaries.

Every experiment writes one CSV (header row included) plus a JSON sidecar
holding the fully resolved configuration, so a run can be reproduced from
the sidecar alone. Reruns of the same spec are byte-identical.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .conflict import (
    collision_domain_histogram,
    estimate_collision_probability,
)
from .csma import (
    BackoffConfig,
    CsmaTimings,
    ProtocolVariant,
    channel_utilization,
    run_contention_experiment,
)
from .geometry import DeploymentConfig
from .mac import (
    AlohaConfig,
    SlotConfig,
    TrafficConfig,
    find_optimal_p,
    run_aloha_on_config,
    run_tdma_on_config,
)
from .radio import ChannelParams, RadioConfig
from .seeding import derive_seed


class ExperimentKind(enum.Enum):
    COLLISION_PROBABILITY = "collision-probability"
    OPTIMAL_P = "optimal-p"
    ALOHA_VS_TDMA_THROUGHPUT = "aloha-vs-tdma"
    THROUGHPUT_DELAY_CURVE = "throughput-delay"
    COLLISION_DOMAINS = "collision-domains"
    CN_BACKOFF = "cn-backoff"
    UTILIZATION_TABLE = "utilization-table"


_SCHEMAS = {
    ExperimentKind.COLLISION_PROBABILITY: [
        "beamwidth_deg", "density", "size_or_p", "value",
        "ci_low", "ci_high", "replications", "seed",
    ],
    ExperimentKind.COLLISION_DOMAINS: [
        "beamwidth_deg", "density", "size_or_p", "value",
        "ci_low", "ci_high", "replications", "seed",
    ],
    ExperimentKind.OPTIMAL_P: [
        "protocol", "density", "beamwidth_deg", "p", "per_link_tput",
        "net_tput", "mean_delay_s", "delivered", "collided", "seed",
    ],
    ExperimentKind.ALOHA_VS_TDMA_THROUGHPUT: [
        "protocol", "density", "beamwidth_deg", "p", "per_link_tput",
        "net_tput", "mean_delay_s", "delivered", "collided", "seed",
    ],
    ExperimentKind.THROUGHPUT_DELAY_CURVE: [
        "protocol", "density", "beamwidth_deg", "p", "per_link_tput",
        "net_tput", "mean_delay_s", "delivered", "collided", "seed",
    ],
    ExperimentKind.CN_BACKOFF: [
        "variant", "n_devices", "blockage_prob", "mean_backoff_us",
        "ci_low", "ci_high", "replications", "seed",
    ],
    ExperimentKind.UTILIZATION_TABLE: [
        "payload_bytes", "total_delay_us", "utilization",
    ],
}


@dataclass(frozen=True)
class ExperimentSpec:
    kind: ExperimentKind
    densities: tuple[float, ...] = (0.25,)
    beamwidths_deg: tuple[float, ...] = (25.0,)
    p_grid: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    blockage_probs: tuple[float, ...] = (0.0, 0.005, 0.01, 0.02, 0.05, 0.1)
    payload_sizes: tuple[int, ...] = (1_000, 10_000)
    transmit_probability: float = 1.0
    n_devices: int = 20
    obstacle_density: float = 0.25
    arena_width: float = 10.0
    arena_height: float = 10.0
    link_length_max: Optional[float] = None
    duration_s: float = 1.0
    mac_replications_per_point: Optional[int] = None  # defaults to replications
    replications: int = 1000
    master_seed: int = 0
    output_path: str = "out"
    rounded_timings: bool = True

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        for name in ("densities", "beamwidths_deg", "p_grid", "blockage_probs",
                     "payload_sizes"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    def deployment_config(self, density: float, seed: int = 0) -> DeploymentConfig:
        return DeploymentConfig(
            arena_width=self.arena_width,
            arena_height=self.arena_height,
            link_density=density,
            obstacle_density=self.obstacle_density,
            link_length_max=self.link_length_max,
            seed=seed,
        )


@dataclass(frozen=True)
class SummaryRecord:
    group: tuple
    mean: float
    std: float
    ci_low: float
    ci_high: float
    n: int

    def __post_init__(self):
        if not (self.ci_low <= self.mean <= self.ci_high):
            raise ValueError("ci must bracket the mean")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(path: str, header: Sequence[str], rows: list[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _sidecar(spec: ExperimentSpec, channel: ChannelParams, radio: RadioConfig,
             slot: SlotConfig, traffic: TrafficConfig, backoff: BackoffConfig,
             timings: CsmaTimings) -> dict:
    doc = dataclasses.asdict(spec)
    doc["kind"] = spec.kind.value
    doc["resolved"] = {
        "channel": dataclasses.asdict(channel),
        "radio": dataclasses.asdict(radio),
        "slot": dataclasses.asdict(slot),
        "traffic": dataclasses.asdict(traffic),
        "backoff": dataclasses.asdict(backoff),
        "csma_timings": dataclasses.asdict(timings),
    }
    doc["code_version"] = __version__
    return doc


def run_experiment(
    spec: ExperimentSpec,
    channel: ChannelParams = ChannelParams(),
    radio: RadioConfig = RadioConfig(),
    slot: SlotConfig = SlotConfig(),
    traffic: TrafficConfig = TrafficConfig(),
    backoff: BackoffConfig = BackoffConfig(),
) -> tuple[str, str]:
    """Execute the spec's parameter grid and write <out>.csv plus
    <out>.config.json. Returns the two paths."""
    out_dir = os.path.dirname(spec.output_path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    csv_path = spec.output_path + ".csv"
    json_path = spec.output_path + ".config.json"

    timings = CsmaTimings.rounded() if spec.rounded_timings else CsmaTimings()
    rows = _dispatch(spec, channel, radio, slot, traffic, backoff, timings)

    _write_rows(csv_path, _SCHEMAS[spec.kind], rows)
    with open(json_path, "w") as fh:
        json.dump(_sidecar(spec, channel, radio, slot, traffic, backoff, timings),
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def _dispatch(spec, channel, radio, slot, traffic, backoff, timings) -> list:
    kind = spec.kind
    if kind is ExperimentKind.UTILIZATION_TABLE:
        rows = []
        for payload in spec.payload_sizes:
            res = channel_utilization(payload, timings)
            rows.append((payload, res.total_delay_s * 1e6, res.utilization))
        return rows

    if kind is ExperimentKind.CN_BACKOFF:
        rows = []
        for q in spec.blockage_probs:
            for variant in (ProtocolVariant.STANDARD_RTS_CTS,
                            ProtocolVariant.WITH_COLLISION_NOTIFICATION):
                seed = derive_seed(spec.master_seed, "cn", q)
                stats = run_contention_experiment(
                    spec.n_devices, q, variant, spec.replications,
                    backoff_cfg=backoff, seed=seed,
                )
                rows.append((
                    variant.value, spec.n_devices, q,
                    stats.mean_winner_backoff_s * 1e6,
                    stats.ci_low_s * 1e6, stats.ci_high_s * 1e6,
                    spec.replications, seed,
                ))
        return rows

    if kind is ExperimentKind.COLLISION_PROBABILITY:
        rows = []
        for theta_deg in spec.beamwidths_deg:
            for density in spec.densities:
                seed = derive_seed(spec.master_seed, "collision", theta_deg, density)
                cfg = spec.deployment_config(density, seed=seed)
                est = estimate_collision_probability(
                    cfg, math.radians(theta_deg), spec.transmit_probability,
                    spec.replications, channel, radio,
                )
                rows.append((
                    theta_deg, density, spec.transmit_probability,
                    est.probability, est.ci_low, est.ci_high,
                    spec.replications, seed,
                ))
        return rows

    if kind is ExperimentKind.COLLISION_DOMAINS:
        rows = []
        for theta_deg in spec.beamwidths_deg:
            for density in spec.densities:
                seed = derive_seed(spec.master_seed, "domains", theta_deg, density)
                cfg = spec.deployment_config(density, seed=seed)
                hist = collision_domain_histogram(
                    cfg, math.radians(theta_deg), spec.replications, channel, radio,
                )
                for size, prob in hist.sizes.items():
                    rows.append((theta_deg, density, size, prob, prob, prob,
                                 spec.replications, seed))
        return rows

    if kind is ExperimentKind.OPTIMAL_P:
        rows = []
        for theta_deg in spec.beamwidths_deg:
            for density in spec.densities:
                seed = derive_seed(spec.master_seed, "optp", theta_deg, density)
                cfg = spec.deployment_config(density, seed=seed)
                result = find_optimal_p(
                    cfg, math.radians(theta_deg), spec.p_grid,
                    spec.replications, channel, radio,
                )
                mean_links = density * spec.arena_width * spec.arena_height
                for p, tput in result.curve:
                    rows.append((
                        "slotted_aloha_saturated", density, theta_deg, p,
                        tput, tput * mean_links, math.nan, 0, 0, seed,
                    ))
        return rows

    if kind in (ExperimentKind.ALOHA_VS_TDMA_THROUGHPUT,
                ExperimentKind.THROUGHPUT_DELAY_CURVE):
        n_mac = spec.mac_replications_per_point or spec.replications
        rows = []
        for theta_deg in spec.beamwidths_deg:
            theta = math.radians(theta_deg)
            for density in spec.densities:
                base = spec.deployment_config(density)
                popt = find_optimal_p(
                    replace(base, seed=derive_seed(spec.master_seed, "popt",
                                                   theta_deg, density)),
                    theta, spec.p_grid, min(spec.replications, 200), channel, radio,
                )
                for rep in range(n_mac):
                    seed = derive_seed(spec.master_seed, "mac", theta_deg,
                                       density, rep)
                    aloha = run_aloha_on_config(
                        base, theta, slot, traffic,
                        AlohaConfig(popt.p_star), spec.duration_s, seed,
                        channel, radio,
                    )
                    tdma = run_tdma_on_config(
                        base, theta, slot, traffic, spec.duration_s, seed,
                        channel, radio,
                    )
                    rows.append(("slotted_aloha", density, theta_deg, popt.p_star,
                                 aloha.per_link_throughput, aloha.network_throughput,
                                 aloha.mean_delay_s, aloha.delivered,
                                 aloha.collided, seed))
                    rows.append(("tdma", density, theta_deg, 1.0,
                                 tdma.per_link_throughput, tdma.network_throughput,
                                 tdma.mean_delay_s, tdma.delivered,
                                 tdma.collided, seed))
        return rows

    raise ValueError(f"unknown experiment kind: {kind}")


def load_dataset(csv_path: str) -> tuple[list[str], list[dict]]:
    """Parse an emitted CSV back into (header, rows) with numeric coercion."""
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{csv_path}: missing header row")
        rows = []
        for raw in reader:
            row = {}
            for k, v in raw.items():
                try:
                    row[k] = int(v)
                except ValueError:
                    try:
                        row[k] = float(v)
                    except ValueError:
                        row[k] = v
            rows.append(row)
        return list(reader.fieldnames), rows


def summarize(
    csv_path: str,
    grouping: Sequence[str],
    value: str,
) -> list[SummaryRecord]:
    """Grouped mean/std with 95% normal-approximation confidence intervals."""
    header, rows = load_dataset(csv_path)
    for col in list(grouping) + [value]:
        if col not in header:
            raise ValueError(f"column {col!r} not in dataset schema {header}")
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        key = tuple(row[g] for g in grouping)
        groups.setdefault(key, []).append(float(row[value]))

    z = 1.959963984540054
    records = []
    for key in sorted(groups, key=repr):
        vals = np.array(groups[key], dtype=float)
        mean = float(vals.mean())
        std = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
        half = z * std / math.sqrt(len(vals))
        records.append(SummaryRecord(
            group=key, mean=mean, std=std,
            ci_low=mean - half, ci_high=mean + half, n=len(vals),
        ))
    return records
