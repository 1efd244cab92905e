"""Random deployments of directed links and segment obstacles on a 2-D torus.

Positions live in a rectangular arena with wraparound distances, so every
link sees statistically identical surroundings regardless of where it was
sampled. Obstacles are thin line segments; blockage queries count how many
obstacle segments cross a propagation path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from functools import cached_property
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class Obstacle:
    """Thin segment obstacle; each crossing costs `penetration_loss_db`."""

    p0: Point2D
    p1: Point2D
    penetration_loss_db: float = 30.0

    def __post_init__(self):
        if self.penetration_loss_db < 0:
            raise ValueError("penetration_loss_db must be >= 0")
        if self.p0 == self.p1:
            raise ValueError("obstacle segment must have positive length")


@dataclass(frozen=True)
class DirectedLink:
    """Aligned transmitter-receiver pair sharing a common beamwidth."""

    tx: Point2D
    rx: Point2D
    tx_boresight: float  # radians, points at the receiver
    rx_boresight: float  # radians, points at the transmitter
    beamwidth: float     # radians

    def __post_init__(self):
        if self.tx == self.rx:
            raise ValueError("tx and rx must be distinct")
        if not 0.0 < self.beamwidth <= 2.0 * np.pi:
            raise ValueError("beamwidth must be in (0, 2*pi]")


@dataclass(frozen=True)
class DeploymentConfig:
    arena_width: float = 10.0
    arena_height: float = 10.0
    link_density: float = 1.0       # links per m^2
    obstacle_density: float = 0.25  # obstacles per m^2
    beamwidth: float = 2.0 * np.pi  # radians, shared by all links
    link_length_max: Optional[float] = None  # resolved by the radio module
    obstacle_loss_db: float = 30.0
    seed: int = 0

    def __post_init__(self):
        if self.arena_width <= 0 or self.arena_height <= 0:
            raise ValueError("arena dimensions must be positive")
        if self.link_density < 0 or self.obstacle_density < 0:
            raise ValueError("densities must be >= 0")
        if not 0.0 < self.beamwidth <= 2.0 * np.pi:
            raise ValueError("beamwidth must be in (0, 2*pi]")
        if self.link_length_max is not None and self.link_length_max <= 0:
            raise ValueError("link_length_max must be positive")

    @property
    def area(self) -> float:
        return self.arena_width * self.arena_height


class DeploymentArrays:
    """Dense view of a deployment for vectorized link-budget math.

    Stands alone: carries the arena and the shared beamwidth so the hot
    Monte-Carlo paths never need to materialize per-link objects.
    """

    def __init__(self, tx, rx, tx_boresight, rx_boresight,
                 obs_p0, obs_p1, obs_loss_db,
                 arena: tuple[float, float], beamwidth: float):
        self.tx = np.asarray(tx, dtype=float).reshape(-1, 2)
        self.rx = np.asarray(rx, dtype=float).reshape(-1, 2)
        self.tx_boresight = np.asarray(tx_boresight, dtype=float)
        self.rx_boresight = np.asarray(rx_boresight, dtype=float)
        self.obs_p0 = np.asarray(obs_p0, dtype=float).reshape(-1, 2)
        self.obs_p1 = np.asarray(obs_p1, dtype=float).reshape(-1, 2)
        self.obs_loss_db = np.asarray(obs_loss_db, dtype=float)
        self.n_links = self.tx.shape[0]
        self.n_obstacles = self.obs_p0.shape[0]
        self.arena = (float(arena[0]), float(arena[1]))
        self.beamwidth = float(beamwidth)

    @classmethod
    def from_deployment(cls, deployment: "Deployment") -> "DeploymentArrays":
        links = deployment.links
        obs = deployment.obstacles
        return cls(
            tx=[[l.tx.x, l.tx.y] for l in links],
            rx=[[l.rx.x, l.rx.y] for l in links],
            tx_boresight=[l.tx_boresight for l in links],
            rx_boresight=[l.rx_boresight for l in links],
            obs_p0=[[o.p0.x, o.p0.y] for o in obs],
            obs_p1=[[o.p1.x, o.p1.y] for o in obs],
            obs_loss_db=[o.penetration_loss_db for o in obs],
            arena=deployment.arena,
            beamwidth=links[0].beamwidth if links else deployment.config.beamwidth,
        )


@dataclass(eq=True)
class Deployment:
    links: list[DirectedLink]
    obstacles: list[Obstacle]
    config: DeploymentConfig

    @cached_property
    def arrays(self) -> DeploymentArrays:
        return DeploymentArrays.from_deployment(self)

    @property
    def arena(self) -> tuple[float, float]:
        return (self.config.arena_width, self.config.arena_height)


def wrap_position(p: np.ndarray, arena: tuple[float, float]) -> np.ndarray:
    return np.mod(p, np.asarray(arena, dtype=float))


def torus_displacement(a: np.ndarray, b: np.ndarray, arena: tuple[float, float]) -> np.ndarray:
    """Shortest displacement vector from a to b on the torus."""
    dims = np.asarray(arena, dtype=float)
    return np.mod(b - a + dims / 2.0, dims) - dims / 2.0


def torus_distance(a: np.ndarray, b: np.ndarray, arena: tuple[float, float]) -> np.ndarray:
    return np.linalg.norm(torus_displacement(a, b, arena), axis=-1)


def _cross2(ux, uy, vx, vy):
    return ux * vy - uy * vx


def segments_intersect_many(a0, a1, b0, b1) -> np.ndarray:
    """Closed-segment intersection test, broadcast over leading axes.

    Endpoint touching counts as intersecting. Collinear overlap counts.
    """
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    b0 = np.asarray(b0, dtype=float)
    b1 = np.asarray(b1, dtype=float)

    rx, ry = (a1 - a0)[..., 0], (a1 - a0)[..., 1]
    sx, sy = (b1 - b0)[..., 0], (b1 - b0)[..., 1]

    d1 = _cross2(rx, ry, b0[..., 0] - a0[..., 0], b0[..., 1] - a0[..., 1])
    d2 = _cross2(rx, ry, b1[..., 0] - a0[..., 0], b1[..., 1] - a0[..., 1])
    d3 = _cross2(sx, sy, a0[..., 0] - b0[..., 0], a0[..., 1] - b0[..., 1])
    d4 = _cross2(sx, sy, a1[..., 0] - b0[..., 0], a1[..., 1] - b0[..., 1])

    straddle = (d1 * d2 <= 0.0) & (d3 * d4 <= 0.0)
    collinear = (d1 == 0.0) & (d2 == 0.0) & (d3 == 0.0) & (d4 == 0.0)

    # Collinear case: 1-D bounding-box overlap on both axes.
    alo = np.minimum(a0, a1)
    ahi = np.maximum(a0, a1)
    blo = np.minimum(b0, b1)
    bhi = np.maximum(b0, b1)
    overlap = np.all((np.maximum(alo, blo) <= np.minimum(ahi, bhi)), axis=-1)

    return np.where(collinear, overlap, straddle)


def segments_intersect(a: tuple, b: tuple) -> bool:
    """True iff closed segments a and b share at least one point.

    Each segment is a pair of (x, y) points (Point2D or tuples).
    """
    def _pt(p):
        return np.array([p.x, p.y]) if isinstance(p, Point2D) else np.asarray(p, dtype=float)

    a0, a1 = _pt(a[0]), _pt(a[1])
    b0, b1 = _pt(b[0]), _pt(b[1])
    if np.array_equal(a0, a1) or np.array_equal(b0, b1):
        raise ValueError("segments must have positive length")
    return bool(segments_intersect_many(a0, a1, b0, b1))


_TILE_OFFSETS = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)


def count_blockers_paths(
    starts: np.ndarray,
    disps: np.ndarray,
    obs_p0: np.ndarray,
    obs_p1: np.ndarray,
    arena: Optional[tuple[float, float]] = None,
) -> np.ndarray:
    """Obstacle crossings for each path, vectorized over P paths x K obstacles.

    Paths run from `starts` to `starts + disps`. With an arena given, obstacle
    copies in the 8 neighbouring tiles are also tested, so paths written as a
    wrapped displacement from an in-arena start are handled correctly.
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    disps = np.atleast_2d(np.asarray(disps, dtype=float))
    n_paths = starts.shape[0]
    if obs_p0.shape[0] == 0:
        return np.zeros(n_paths, dtype=np.int64)

    if arena is not None:
        shift = _TILE_OFFSETS * np.asarray(arena, dtype=float)   # (9, 2)
        p0 = (obs_p0[None, :, :] + shift[:, None, :]).reshape(-1, 2)
        p1 = (obs_p1[None, :, :] + shift[:, None, :]).reshape(-1, 2)
    else:
        p0, p1 = obs_p0, obs_p1

    a0 = starts[:, None, :]
    a1 = (starts + disps)[:, None, :]
    hits = segments_intersect_many(a0, a1, p0[None, :, :], p1[None, :, :])
    if arena is not None:
        # A path can only cross one tiled copy of a given obstacle, but be
        # safe against corner duplicates by clipping per obstacle.
        hits = hits.reshape(n_paths, 9, -1).any(axis=1)
    return hits.sum(axis=1).astype(np.int64)


def count_blockers(
    path: tuple,
    obstacles: Sequence[Obstacle],
    arena: Optional[tuple[float, float]] = None,
) -> int:
    """Number of obstacles whose segment crosses the given path."""
    def _pt(p):
        return np.array([p.x, p.y]) if isinstance(p, Point2D) else np.asarray(p, dtype=float)

    a0, a1 = _pt(path[0]), _pt(path[1])
    if np.array_equal(a0, a1):
        raise ValueError("path must have positive length")
    if not obstacles:
        return 0
    p0 = np.array([[o.p0.x, o.p0.y] for o in obstacles])
    p1 = np.array([[o.p1.x, o.p1.y] for o in obstacles])
    return int(count_blockers_paths(a0[None, :], (a1 - a0)[None, :], p0, p1, arena)[0])


def sample_deployment_arrays(cfg: DeploymentConfig) -> DeploymentArrays:
    """Draw a deployment directly as dense arrays (no per-link objects).

    Identical (cfg, seed) gives draws identical to sample_deployment; this is
    the fast path for Monte-Carlo loops.
    """
    if cfg.link_length_max is None:
        raise ValueError(
            "link_length_max is unresolved; use radio.resolve_link_length() "
            "or set it explicitly"
        )
    rng = np.random.default_rng(cfg.seed)
    w, h = cfg.arena_width, cfg.arena_height

    n_links = rng.poisson(cfg.link_density * cfg.area)
    tx = rng.uniform((0.0, 0.0), (w, h), size=(n_links, 2))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=n_links)
    # uniform on (0, d_max]: flip U[0,1) to (0,1]
    dist = (1.0 - rng.uniform(0.0, 1.0, size=n_links)) * cfg.link_length_max
    u = np.stack([np.cos(angle), np.sin(angle)], axis=1)
    rx = wrap_position(tx + dist[:, None] * u, (w, h))
    rx_boresight = np.arctan2(-u[:, 1], -u[:, 0])

    n_obs = rng.poisson(cfg.obstacle_density * cfg.area)
    mid = rng.uniform((0.0, 0.0), (w, h), size=(n_obs, 2))
    orient = rng.uniform(0.0, np.pi, size=n_obs)
    length = 1.0 - rng.uniform(0.0, 1.0, size=n_obs)  # (0, 1]
    half = 0.5 * length[:, None] * np.stack([np.cos(orient), np.sin(orient)], axis=1)

    return DeploymentArrays(
        tx=tx,
        rx=rx,
        tx_boresight=angle,
        rx_boresight=rx_boresight,
        obs_p0=mid - half,
        obs_p1=mid + half,
        obs_loss_db=np.full(n_obs, cfg.obstacle_loss_db),
        arena=(w, h),
        beamwidth=cfg.beamwidth,
    )


def sample_deployment(cfg: DeploymentConfig) -> Deployment:
    """Draw a Poisson number of aligned links and obstacles.

    Transmitters are i.i.d. uniform over the arena; each receiver sits at a
    uniform angle and a distance uniform on (0, link_length_max], wrapped on
    the torus. Obstacle midpoints are uniform, orientation uniform on
    [0, pi), length uniform on (0, 1]. Identical (cfg, seed) gives an
    identical deployment.
    """
    arr = sample_deployment_arrays(cfg)
    links = [
        DirectedLink(
            tx=Point2D(arr.tx[i, 0], arr.tx[i, 1]),
            rx=Point2D(arr.rx[i, 0], arr.rx[i, 1]),
            tx_boresight=float(arr.tx_boresight[i]),
            rx_boresight=float(arr.rx_boresight[i]),
            beamwidth=cfg.beamwidth,
        )
        for i in range(arr.n_links)
    ]
    obstacles = [
        Obstacle(
            p0=Point2D(arr.obs_p0[i, 0], arr.obs_p0[i, 1]),
            p1=Point2D(arr.obs_p1[i, 0], arr.obs_p1[i, 1]),
            penetration_loss_db=cfg.obstacle_loss_db,
        )
        for i in range(arr.n_obstacles)
    ]
    return Deployment(links=links, obstacles=obstacles, config=cfg)


def deployment_to_json(dep: Deployment) -> str:
    """Serialize a deployment (links, obstacles, config, seed) to JSON."""
    doc = {
        "config": asdict(dep.config),
        "seed": dep.config.seed,
        "links": [
            {
                "tx": [l.tx.x, l.tx.y],
                "rx": [l.rx.x, l.rx.y],
                "tx_boresight": l.tx_boresight,
                "rx_boresight": l.rx_boresight,
                "beamwidth": l.beamwidth,
            }
            for l in dep.links
        ],
        "obstacles": [
            {
                "p0": [o.p0.x, o.p0.y],
                "p1": [o.p1.x, o.p1.y],
                "penetration_loss_db": o.penetration_loss_db,
            }
            for o in dep.obstacles
        ],
    }
    return json.dumps(doc, indent=2)


def deployment_from_json(text: str) -> Deployment:
    doc = json.loads(text)
    cfg = DeploymentConfig(**doc["config"])
    links = [
        DirectedLink(
            tx=Point2D(*l["tx"]),
            rx=Point2D(*l["rx"]),
            tx_boresight=l["tx_boresight"],
            rx_boresight=l["rx_boresight"],
            beamwidth=l["beamwidth"],
        )
        for l in doc["links"]
    ]
    obstacles = [
        Obstacle(
            p0=Point2D(*o["p0"]),
            p1=Point2D(*o["p1"]),
            penetration_loss_db=o["penetration_loss_db"],
        )
        for o in doc["obstacles"]
    ]
    return Deployment(links=links, obstacles=obstacles, config=cfg)
