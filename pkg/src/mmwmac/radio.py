"""Sectored-antenna link budget: gains, path loss, received power, SNR/SINR.

All functions are pure and operate on linear milliwatts internally; public
values are in dB/dBm as named. A zero antenna gain maps to -inf dBm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

import numpy as np

from .geometry import (
    Deployment,
    DeploymentArrays,
    DeploymentConfig,
    Point2D,
    count_blockers_paths,
    torus_displacement,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AntennaPattern:
    """Ideal sector pattern: constant mainlobe over the beamwidth, constant
    sidelobe elsewhere, normalized so total radiated power is conserved."""

    beamwidth: float           # radians
    sidelobe_gain: float = 0.0  # linear

    def __post_init__(self):
        if not 0.0 < self.beamwidth <= TWO_PI:
            raise ValueError("beamwidth must be in (0, 2*pi]")
        if not 0.0 <= self.sidelobe_gain <= 1.0:
            raise ValueError("sidelobe_gain must be in [0, 1]")

    @property
    def mainlobe_gain(self) -> float:
        # power conservation: g_m * theta + g_s * (2*pi - theta) = 2*pi
        return (TWO_PI - self.sidelobe_gain * (TWO_PI - self.beamwidth)) / self.beamwidth


@dataclass(frozen=True)
class ChannelParams:
    carrier_frequency: float = 60e9
    pathloss_exponent: float = 3.0
    reference_loss_db: float = 68.0     # free-space loss at 1 m, 60 GHz
    penetration_loss_db: float = 30.0   # per obstacle crossing
    noise_power_dbm: float = -74.7      # thermal floor over 2.16 GHz + 6 dB NF
    decode_snr_db: float = 10.0
    detection_snr_db: float = 10.0      # energy-detector threshold over noise

    def __post_init__(self):
        if self.pathloss_exponent <= 0:
            raise ValueError("pathloss_exponent must be positive")
        if not math.isfinite(self.decode_snr_db):
            raise ValueError("decode_snr_db must be finite")

    @property
    def noise_mw(self) -> float:
        return dbm_to_mw(self.noise_power_dbm)

    @property
    def decode_snr_linear(self) -> float:
        return 10.0 ** (self.decode_snr_db / 10.0)


@dataclass(frozen=True)
class RadioConfig:
    tx_power_dbm: float = 10.0 * math.log10(2.5)  # 2.5 mW

    def __post_init__(self):
        if not math.isfinite(self.tx_power_dbm):
            raise ValueError("tx_power_dbm must be finite")


def dbm_to_mw(dbm):
    return np.power(10.0, np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    mw = np.asarray(mw, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(mw)


def wrap_angle(a):
    """Normalize angle(s) to [-pi, pi)."""
    return np.mod(np.asarray(a, dtype=float) + math.pi, TWO_PI) - math.pi


def antenna_gain(pattern: AntennaPattern, off_boresight) -> np.ndarray | float:
    """Sector gain at the given off-boresight angle(s)."""
    off = np.abs(wrap_angle(off_boresight))
    gain = np.where(off <= pattern.beamwidth / 2.0 + 1e-15,
                    pattern.mainlobe_gain, pattern.sidelobe_gain)
    if np.ndim(off_boresight) == 0:
        return float(gain)
    return gain


def path_loss_db(distance, channel: ChannelParams) -> np.ndarray:
    d = np.asarray(distance, dtype=float)
    return channel.reference_loss_db + 10.0 * channel.pathloss_exponent * np.log10(d)


def received_power_dbm(
    tx_pos,
    rx_pos,
    tx_pattern: AntennaPattern,
    tx_boresight: float,
    rx_pattern: AntennaPattern,
    rx_boresight: float,
    obstacles,
    channel: ChannelParams,
    radio: RadioConfig,
    arena: Optional[tuple[float, float]] = None,
) -> float:
    """Link budget for one tx -> rx path; -inf when either gain is zero.

    With `arena` given, distance and angles follow the torus geodesic and
    obstacle copies in neighbouring tiles are considered.
    """
    def _pt(p):
        return np.array([p.x, p.y]) if isinstance(p, Point2D) else np.asarray(p, dtype=float)

    a, b = _pt(tx_pos), _pt(rx_pos)
    disp = torus_displacement(a, b, arena) if arena is not None else b - a
    d = float(np.linalg.norm(disp))
    if d == 0.0:
        raise ValueError("tx and rx must be distinct")

    ang = math.atan2(disp[1], disp[0])
    g_tx = antenna_gain(tx_pattern, ang - tx_boresight)
    g_rx = antenna_gain(rx_pattern, ang + math.pi - rx_boresight)
    if g_tx == 0.0 or g_rx == 0.0:
        return -math.inf

    if obstacles:
        p0 = np.array([[o.p0.x, o.p0.y] for o in obstacles])
        p1 = np.array([[o.p1.x, o.p1.y] for o in obstacles])
        k = int(count_blockers_paths(a[None, :], disp[None, :], p0, p1, arena)[0])
    else:
        k = 0

    return (
        radio.tx_power_dbm
        + 10.0 * math.log10(g_tx)
        + 10.0 * math.log10(g_rx)
        - float(path_loss_db(d, channel))
        - channel.penetration_loss_db * k
    )


def rx_power_matrix_mw(
    deployment: Deployment | DeploymentArrays,
    channel: ChannelParams,
    radio: RadioConfig,
    pattern: Optional[AntennaPattern] = None,
    interference_floor_mw: float = 0.0,
) -> np.ndarray:
    """(L, L) matrix P[i, j] = power at link i's receiver from link j's
    transmitter, in linear mW (0 where a gain is zero).

    Accepts a Deployment or its dense DeploymentArrays view.
    `interference_floor_mw` skips the (expensive) blockage test for
    off-diagonal pairs whose unblocked power is already below the floor;
    their entries keep the unblocked value, which is conservative, as
    blockage only reduces power further.
    """
    arr = deployment.arrays if isinstance(deployment, Deployment) else deployment
    arena = arr.arena
    L = arr.n_links
    if L == 0:
        return np.zeros((0, 0))
    if pattern is None:
        pattern = AntennaPattern(beamwidth=arr.beamwidth)

    disp = torus_displacement(arr.tx[None, :, :], arr.rx[:, None, :], arena)  # (L,L,2)
    dist = np.linalg.norm(disp, axis=-1)
    np.fill_diagonal(dist, np.maximum(dist.diagonal(), 1e-12))

    ang = np.arctan2(disp[..., 1], disp[..., 0])
    g_tx = antenna_gain(pattern, ang - arr.tx_boresight[None, :])
    g_rx = antenna_gain(pattern, ang + math.pi - arr.rx_boresight[:, None])

    p_dbm = (
        radio.tx_power_dbm
        - channel.reference_loss_db
        - 10.0 * channel.pathloss_exponent * np.log10(dist)
    )
    p_mw = dbm_to_mw(p_dbm) * g_tx * g_rx

    # Blockage only where it can matter: the diagonal (own signal) always,
    # off-diagonal pairs only if their unblocked power clears the floor.
    diag = np.eye(L, dtype=bool)
    need = (p_mw > 0.0) & (diag | (p_mw >= interference_floor_mw))
    ii, jj = np.nonzero(need)
    if ii.size and arr.n_obstacles:
        starts = arr.tx[jj]
        disps = disp[ii, jj]
        blockers = _count_blockers_chunked(starts, disps, arr.obs_p0, arr.obs_p1, arena)
        atten = np.power(10.0, -channel.penetration_loss_db * blockers / 10.0)
        p_mw[ii, jj] *= atten
    return p_mw


def _count_blockers_chunked(starts, disps, obs_p0, obs_p1, arena, chunk=200_000):
    n = starts.shape[0]
    out = np.empty(n, dtype=np.int64)
    step = max(1, chunk // max(1, obs_p0.shape[0] * 9))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        out[lo:hi] = count_blockers_paths(starts[lo:hi], disps[lo:hi], obs_p0, obs_p1, arena)
    return out


def snr_db(link_index: int, deployment: Deployment, channel: ChannelParams,
           radio: RadioConfig) -> float:
    """Interference-free SNR of one link, including its own blockage."""
    link = deployment.links[link_index]
    pattern = AntennaPattern(beamwidth=link.beamwidth)
    p = received_power_dbm(
        link.tx, link.rx, pattern, link.tx_boresight, pattern, link.rx_boresight,
        deployment.obstacles, channel, radio, arena=deployment.arena,
    )
    return p - channel.noise_power_dbm


def sinr_db(
    link_index: int,
    active_transmitters: Iterable[int],
    deployment: Deployment,
    channel: ChannelParams,
    radio: RadioConfig,
) -> float:
    """SINR of a link given the set of concurrently active link indices.

    The link's own transmitter is excluded from the interference sum; with an
    empty active set this equals the SNR exactly.
    """
    link = deployment.links[link_index]
    pattern = AntennaPattern(beamwidth=link.beamwidth)
    signal_dbm = received_power_dbm(
        link.tx, link.rx, pattern, link.tx_boresight, pattern, link.rx_boresight,
        deployment.obstacles, channel, radio, arena=deployment.arena,
    )
    signal = float(dbm_to_mw(signal_dbm)) if signal_dbm > -math.inf else 0.0

    interference = 0.0
    for j in active_transmitters:
        if j == link_index:
            continue
        other = deployment.links[j]
        p = received_power_dbm(
            other.tx, link.rx, pattern, other.tx_boresight, pattern, link.rx_boresight,
            deployment.obstacles, channel, radio, arena=deployment.arena,
        )
        if p > -math.inf:
            interference += float(dbm_to_mw(p))

    if signal == 0.0:
        return -math.inf
    return 10.0 * math.log10(signal / (channel.noise_mw + interference))


def max_aligned_range(
    pattern: AntennaPattern, channel: ChannelParams, radio: RadioConfig
) -> float:
    """Largest unblocked boresight-aligned distance still meeting the decode SNR."""
    budget_db = (
        radio.tx_power_dbm
        + 20.0 * math.log10(pattern.mainlobe_gain)
        - channel.reference_loss_db
        - channel.noise_power_dbm
        - channel.decode_snr_db
    )
    return 10.0 ** (budget_db / (10.0 * channel.pathloss_exponent))


def default_link_length_max(
    beamwidth: float,
    channel: ChannelParams,
    radio: RadioConfig,
    arena_width: float = 10.0,
    arena_height: float = 10.0,
    sidelobe_gain: float = 0.0,
) -> float:
    """Calibrated maximum link length: every unblocked, interference-free link
    at this distance or less closes at the decode SNR. Capped at half the
    smaller arena dimension so torus geodesics stay consistent."""
    pattern = AntennaPattern(beamwidth=beamwidth, sidelobe_gain=sidelobe_gain)
    return min(
        max_aligned_range(pattern, channel, radio),
        0.5 * min(arena_width, arena_height),
    )


def resolve_link_length(
    cfg: DeploymentConfig, channel: ChannelParams, radio: RadioConfig
) -> DeploymentConfig:
    """Fill in cfg.link_length_max from the radio calibration if unset."""
    if cfg.link_length_max is not None:
        return cfg
    d_max = default_link_length_max(
        cfg.beamwidth, channel, radio, cfg.arena_width, cfg.arena_height
    )
    return replace(cfg, link_length_max=d_max)
