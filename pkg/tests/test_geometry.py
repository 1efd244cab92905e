import math

import numpy as np
import pytest
from scipy import stats

from mmwmac import (
    DeploymentConfig,
    count_blockers,
    deployment_from_json,
    deployment_to_json,
    sample_deployment,
    segments_intersect,
)
from mmwmac.geometry import (
    count_blockers_paths,
    sample_deployment_arrays,
    torus_displacement,
    torus_distance,
    wrap_position,
)

from _util import make_obstacle


class TestSegmentIntersection:
    def test_plain_crossing(self):
        assert segments_intersect(((0, 0), (2, 2)), ((0, 2), (2, 0)))

    def test_disjoint(self):
        assert not segments_intersect(((0, 0), (1, 0)), ((0, 1), (1, 1)))

    def test_endpoint_touch_counts(self):
        assert segments_intersect(((0, 0), (1, 1)), ((1, 1), (2, 0)))

    def test_t_junction(self):
        assert segments_intersect(((0, 0), (2, 0)), ((1, -1), (1, 0)))

    def test_collinear_overlap(self):
        assert segments_intersect(((0, 0), (2, 0)), ((1, 0), (3, 0)))

    def test_collinear_disjoint(self):
        assert not segments_intersect(((0, 0), (1, 0)), ((2, 0), (3, 0)))

    def test_parallel(self):
        assert not segments_intersect(((0, 0), (1, 1)), ((0, 1), (1, 2)))

    def test_almost_touching(self):
        assert not segments_intersect(((0, 0), (1, 0)), ((0.5, 1e-9), (0.5, 1)))

    def test_symmetry(self):
        a, b = ((0.3, 0.1), (1.7, 2.2)), ((0.0, 2.0), (2.0, 0.0))
        assert segments_intersect(a, b) == segments_intersect(b, a)

    def test_degenerate_raises(self):
        with pytest.raises(ValueError):
            segments_intersect(((1, 1), (1, 1)), ((0, 0), (2, 2)))


class TestTorus:
    def test_wrap_position(self):
        p = wrap_position(np.array([11.0, -1.0]), (10.0, 10.0))
        assert np.allclose(p, [1.0, 9.0])

    def test_short_way_around(self):
        d = torus_distance(np.array([0.5, 5.0]), np.array([9.5, 5.0]), (10.0, 10.0))
        assert d == pytest.approx(1.0)

    def test_symmetric(self):
        rng = np.random.default_rng(1)
        a, b = rng.uniform(0, 10, 2), rng.uniform(0, 10, 2)
        ab = torus_distance(a, b, (10.0, 10.0))
        ba = torus_distance(b, a, (10.0, 10.0))
        assert ab == pytest.approx(ba)

    def test_distance_cap(self):
        rng = np.random.default_rng(2)
        a = rng.uniform(0, 10, (100, 2))
        b = rng.uniform(0, 10, (100, 2))
        d = torus_distance(a, b, (10.0, 10.0))
        assert np.all(d <= math.hypot(5.0, 5.0) + 1e-12)

    def test_displacement_antisymmetric(self):
        a, b = np.array([1.0, 2.0]), np.array([9.0, 8.0])
        ab = torus_displacement(a, b, (10.0, 10.0))
        ba = torus_displacement(b, a, (10.0, 10.0))
        assert np.allclose(ab, -ba)


class TestBlockage:
    def test_single_crossing(self):
        obs = [make_obstacle((1, -1), (1, 1))]
        assert count_blockers(((0, 0), (2, 0)), obs) == 1

    def test_miss(self):
        obs = [make_obstacle((5, 5), (6, 6))]
        assert count_blockers(((0, 0), (2, 0)), obs) == 0

    def test_path_direction_irrelevant(self):
        obs = [make_obstacle((1, -1), (1, 1)), make_obstacle((0.5, -2), (0.7, 3))]
        fwd = count_blockers(((0, 0), (2, 0)), obs)
        rev = count_blockers(((2, 0), (0, 0)), obs)
        assert fwd == rev == 2

    def test_wrapped_path(self):
        # Path from x=9.5 going +1 in x crosses the seam; the obstacle sits
        # at x=0.2 on the other side.
        obs_p0 = np.array([[0.2, -1.0]])
        obs_p1 = np.array([[0.2, 1.0]])
        hits = count_blockers_paths(
            np.array([[9.5, 0.0]]), np.array([[1.0, 0.0]]),
            obs_p0, obs_p1, arena=(10.0, 10.0),
        )
        assert hits[0] == 1

    def test_torus_translation_invariance(self):
        rng = np.random.default_rng(3)
        arena = (10.0, 10.0)
        start = rng.uniform(0, 10, (20, 2))
        disp = rng.uniform(-4, 4, (20, 2))
        p0 = rng.uniform(0, 10, (30, 2))
        p1 = p0 + rng.uniform(-1, 1, (30, 2))
        base = count_blockers_paths(start, disp, p0, p1, arena)
        for shift in ([3.7, 0.0], [0.0, 8.1], [6.2, 2.9]):
            s = np.asarray(shift)
            # Obstacles move as rigid segments: wrap the midpoint, keep the
            # endpoints' offsets, exactly as the sampler lays them out.
            mid = 0.5 * (p0 + p1)
            new_mid = wrap_position(mid + s, arena)
            moved = count_blockers_paths(
                wrap_position(start + s, arena), disp,
                new_mid + (p0 - mid), new_mid + (p1 - mid),
                arena,
            )
            assert np.array_equal(base, moved)


class TestSampling:
    CFG = DeploymentConfig(link_length_max=5.0, seed=11)

    def test_deterministic(self):
        assert sample_deployment(self.CFG) == sample_deployment(self.CFG)

    def test_seed_changes_draw(self):
        other = DeploymentConfig(link_length_max=5.0, seed=12)
        assert sample_deployment(self.CFG) != sample_deployment(other)

    def test_unresolved_length_raises(self):
        with pytest.raises(ValueError):
            sample_deployment(DeploymentConfig(seed=0))

    def test_positions_inside_arena(self):
        dep = sample_deployment(self.CFG)
        for l in dep.links:
            for p in (l.tx, l.rx):
                assert 0.0 <= p.x <= 10.0 and 0.0 <= p.y <= 10.0

    def test_link_lengths_in_range(self):
        dep = sample_deployment(self.CFG)
        arr = dep.arrays
        d = torus_distance(arr.tx, arr.rx, dep.arena)
        assert np.all(d > 0.0) and np.all(d <= 5.0 + 1e-12)

    def test_obstacle_lengths_in_unit_interval(self):
        dep = sample_deployment(self.CFG)
        for o in dep.obstacles:
            length = math.hypot(o.p1.x - o.p0.x, o.p1.y - o.p0.y)
            assert 0.0 < length <= 1.0 + 1e-12

    def test_boresights_face_each_other(self):
        dep = sample_deployment(self.CFG)
        arr = dep.arrays
        disp = torus_displacement(arr.tx, arr.rx, dep.arena)
        ang = np.arctan2(disp[:, 1], disp[:, 0])
        assert np.allclose(np.cos(arr.tx_boresight), np.cos(ang), atol=1e-9)
        assert np.allclose(np.cos(arr.rx_boresight), np.cos(ang + np.pi), atol=1e-9)

    def test_poisson_link_counts(self):
        # Mean count over replications should sit inside a 4-sigma CLT band
        # around density * area.
        lam = 0.5 * 100.0
        counts = [
            len(sample_deployment(
                DeploymentConfig(link_density=0.5, link_length_max=5.0, seed=s)
            ).links)
            for s in range(300)
        ]
        mean = np.mean(counts)
        band = 4.0 * math.sqrt(lam / 300)
        assert abs(mean - lam) < band

    def test_poisson_count_dispersion(self):
        # Chi-square on binned counts against the Poisson pmf.
        lam = 25.0
        counts = [
            len(sample_deployment(
                DeploymentConfig(link_density=0.25, link_length_max=5.0, seed=s)
            ).links)
            for s in range(400)
        ]
        edges = [0, 20, 23, 25, 27, 30, 10_000]
        observed = np.histogram(counts, bins=edges)[0]
        cdf = stats.poisson(lam).cdf
        probs = np.diff([0.0] + [cdf(e - 1) for e in edges[1:-1]] + [1.0])
        expected = probs * len(counts)
        chi2 = float(((observed - expected) ** 2 / expected).sum())
        assert chi2 < stats.chi2(len(edges) - 2).ppf(0.999)

    def test_array_sampler_matches_object_sampler(self):
        dep = sample_deployment(self.CFG)
        arr = sample_deployment_arrays(self.CFG)
        assert np.array_equal(dep.arrays.tx, arr.tx)
        assert np.array_equal(dep.arrays.rx, arr.rx)
        assert np.array_equal(dep.arrays.tx_boresight, arr.tx_boresight)
        assert np.array_equal(dep.arrays.obs_p0, arr.obs_p0)
        assert np.array_equal(dep.arrays.obs_p1, arr.obs_p1)
        assert dep.arrays.arena == arr.arena
        assert dep.arrays.beamwidth == arr.beamwidth


def test_json_round_trip():
    cfg = DeploymentConfig(link_length_max=5.0, seed=77)
    dep = sample_deployment(cfg)
    assert deployment_from_json(deployment_to_json(dep)) == dep
