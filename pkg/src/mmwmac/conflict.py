"""Static interference analysis: strong-interferer sets, collision-domain
size distributions, and Monte-Carlo collision probability.

A link "covers" when its interference-free SNR (own blockage included)
meets the decode threshold. A strong interferer of link i is another link
whose lone transmission drops i's SINR below that threshold. Coverage-failed
links are excluded from both statistics and reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import (
    Deployment,
    DeploymentArrays,
    DeploymentConfig,
    sample_deployment_arrays,
    torus_displacement,
)
from .radio import (
    AntennaPattern,
    ChannelParams,
    RadioConfig,
    antenna_gain,
    dbm_to_mw,
    resolve_link_length,
    rx_power_matrix_mw,
)
from .geometry import count_blockers_paths
from .seeding import derive_seed, derive_rng


@dataclass
class CollisionDomainHistogram:
    """Empirical distribution of 1 + number of individually-fatal interferers."""

    sizes: dict[int, float]
    n_samples: int
    coverage_failed_fraction: float

    def __post_init__(self):
        if self.sizes:
            total = sum(self.sizes.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError("probabilities must sum to 1")
            if min(self.sizes) < 1:
                raise ValueError("smallest domain size is 1")

    def probability(self, size: int) -> float:
        return self.sizes.get(size, 0.0)

    def mean(self) -> float:
        return sum(k * v for k, v in self.sizes.items())

    def cdf(self, size: int) -> float:
        return sum(v for k, v in self.sizes.items() if k <= size)


@dataclass
class CollisionProbabilityEstimate:
    probability: float
    ci_low: float
    ci_high: float
    n_samples: int
    coverage_failed_fraction: float


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _interference_floor_mw(channel: ChannelParams) -> float:
    # The weakest covering signal is T*N, so any individually-fatal
    # interferer must deliver at least N*(T-1)/T of unblocked power.
    noise = channel.noise_mw
    t = channel.decode_snr_linear
    return max(0.0, noise * (t - 1.0) / t) * 0.999


def strong_interferer_sets(
    deployment: Deployment | DeploymentArrays,
    channel: ChannelParams,
    radio: RadioConfig,
) -> tuple[list[set[int]], np.ndarray]:
    """Per-link strong-interferer sets plus the coverage mask.

    Returns (sets, covered) where covered[i] is False for links whose own
    SNR is below the decode threshold; those links get an empty set.
    """
    L = (len(deployment.links) if isinstance(deployment, Deployment)
         else deployment.n_links)
    if L == 0:
        return [], np.zeros(0, dtype=bool)
    p_mw = rx_power_matrix_mw(
        deployment, channel, radio,
        interference_floor_mw=_interference_floor_mw(channel),
    )
    noise = channel.noise_mw
    t = channel.decode_snr_linear
    signal = p_mw.diagonal().copy()
    covered = signal / noise >= t

    # j is fatal for i iff S_i / (N + I_ij) < T  <=>  I_ij > S_i / T - N
    margin = signal[:, None] / t - noise
    fatal = p_mw > margin
    np.fill_diagonal(fatal, False)
    fatal &= covered[:, None]

    sets = [set(np.nonzero(fatal[i])[0].tolist()) if covered[i] else set() for i in range(L)]
    return sets, covered


def strong_interferers(
    link_index: int,
    deployment: Deployment,
    channel: ChannelParams,
    radio: RadioConfig,
) -> tuple[set[int], bool]:
    """Strong interferers of one link; returns (indices, coverage_ok)."""
    if not 0 <= link_index < len(deployment.links):
        raise IndexError(f"invalid link index {link_index}")
    sets, covered = strong_interferer_sets(deployment, channel, radio)
    return sets[link_index], bool(covered[link_index])


def collision_domain_histogram(
    cfg: DeploymentConfig,
    beamwidth: float,
    replications: int,
    channel: ChannelParams = ChannelParams(),
    radio: RadioConfig = RadioConfig(),
) -> CollisionDomainHistogram:
    """Pool 1 + |strong interferers| over all covering links of many
    independent deployments. Deterministic given cfg.seed."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    cfg = replace(cfg, beamwidth=beamwidth, link_length_max=None)
    cfg = resolve_link_length(cfg, channel, radio)

    counts: dict[int, int] = {}
    n_links_total = 0
    n_failed = 0
    for rep in range(replications):
        rep_cfg = replace(cfg, seed=derive_seed(cfg.seed, "domains", rep))
        arr = sample_deployment_arrays(rep_cfg)
        sets, covered = strong_interferer_sets(arr, channel, radio)
        n_links_total += len(sets)
        n_failed += int((~covered).sum())
        for i, s in enumerate(sets):
            if covered[i]:
                size = 1 + len(s)
                counts[size] = counts.get(size, 0) + 1

    n = sum(counts.values())
    sizes = {k: v / n for k, v in sorted(counts.items())} if n else {}
    failed_frac = n_failed / n_links_total if n_links_total else 0.0
    return CollisionDomainHistogram(
        sizes=sizes, n_samples=n, coverage_failed_fraction=failed_frac
    )


def _reference_link_sinr_ok(
    arr: DeploymentArrays,
    ref: int,
    active: np.ndarray,
    channel: ChannelParams,
    radio: RadioConfig,
) -> tuple[bool, bool]:
    """(covered, decodes) for one reference link under the given active mask."""
    arena = arr.arena
    pattern = AntennaPattern(beamwidth=arr.beamwidth)
    noise = channel.noise_mw
    t = channel.decode_snr_linear

    rx = arr.rx[ref]
    disp = torus_displacement(arr.tx, rx[None, :], arena)
    dist = np.linalg.norm(disp, axis=-1)
    dist[ref] = max(dist[ref], 1e-12)
    ang = np.arctan2(disp[:, 1], disp[:, 0])
    g_tx = antenna_gain(pattern, ang - arr.tx_boresight)
    g_rx = antenna_gain(pattern, ang + math.pi - arr.rx_boresight[ref])
    p_mw = dbm_to_mw(
        radio.tx_power_dbm - channel.reference_loss_db
        - 10.0 * channel.pathloss_exponent * np.log10(dist)
    ) * g_tx * g_rx

    floor = _interference_floor_mw(channel)
    need = p_mw > 0.0
    need &= (np.arange(len(p_mw)) == ref) | (p_mw >= floor)
    idx = np.nonzero(need)[0]
    if idx.size and arr.n_obstacles:
        blockers = count_blockers_paths(
            arr.tx[idx], disp[idx], arr.obs_p0, arr.obs_p1, arena
        )
        p_mw[idx] *= np.power(10.0, -channel.penetration_loss_db * blockers / 10.0)

    signal = p_mw[ref]
    covered = signal / noise >= t
    if not covered:
        return False, False
    mask = active.copy()
    mask[ref] = False
    interference = float(p_mw[mask].sum())
    return True, signal / (noise + interference) >= t


def estimate_collision_probability(
    cfg: DeploymentConfig,
    beamwidth: float,
    transmit_probability: float,
    replications: int,
    channel: ChannelParams = ChannelParams(),
    radio: RadioConfig = RadioConfig(),
) -> CollisionProbabilityEstimate:
    """Fraction of covering reference links whose SINR falls below the decode
    threshold when every other link transmits independently with the given
    probability. One uniformly-chosen reference link per replication; 95%
    Wilson interval attached."""
    if not 0.0 <= transmit_probability <= 1.0:
        raise ValueError("transmit_probability must be in [0, 1]")
    if replications < 1:
        raise ValueError("replications must be >= 1")
    cfg = replace(cfg, beamwidth=beamwidth, link_length_max=None)
    cfg = resolve_link_length(cfg, channel, radio)

    n_eval = 0
    n_collision = 0
    n_ref = 0
    n_failed = 0
    for rep in range(replications):
        seed = derive_seed(cfg.seed, "collision", rep)
        arr = sample_deployment_arrays(replace(cfg, seed=seed))
        L = arr.n_links
        if L == 0:
            continue
        rng = derive_rng(cfg.seed, "collision-activation", rep)
        ref = int(rng.integers(L))
        active = rng.random(L) < transmit_probability
        n_ref += 1
        covered, ok = _reference_link_sinr_ok(arr, ref, active, channel, radio)
        if not covered:
            n_failed += 1
            continue
        n_eval += 1
        if not ok:
            n_collision += 1

    p = n_collision / n_eval if n_eval else 0.0
    lo, hi = wilson_interval(n_collision, n_eval)
    return CollisionProbabilityEstimate(
        probability=p,
        ci_low=lo,
        ci_high=hi,
        n_samples=n_eval,
        coverage_failed_fraction=n_failed / n_ref if n_ref else 0.0,
    )
