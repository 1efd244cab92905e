import math

import numpy as np
import pytest

from mmwmac import (
    AlohaConfig,
    DeploymentConfig,
    SlotConfig,
    TrafficConfig,
    find_optimal_p,
    run_slotted_aloha,
    run_tdma,
    throughput_curve,
)

from _util import make_deployment, make_link, make_obstacle, two_mutually_fatal_links

SLOT = SlotConfig()
CBR_DEFAULT = TrafficConfig()                       # 0.09375 packet/slot
SATURATED = TrafficConfig(cbr_rate=SLOT.capacity_bps)  # 1 packet/slot


def isolated_links(n, spacing=2.0, beamwidth=math.radians(10)):
    """n parallel narrow-beam links that cannot hear each other."""
    return make_deployment([
        make_link((1.0, 0.5 + i * spacing % 9.5), (1.6, 0.5 + i * spacing % 9.5),
                  beamwidth)
        for i in range(n)
    ])


class TestSlotConfig:
    def test_capacity(self):
        assert SLOT.capacity_bps == pytest.approx(3.2e9)

    def test_default_load_fraction(self):
        assert CBR_DEFAULT.cbr_rate / SLOT.capacity_bps == pytest.approx(0.09375)

    def test_validation(self):
        with pytest.raises(ValueError):
            SlotConfig(slot_duration=0.0)
        with pytest.raises(ValueError):
            AlohaConfig(transmit_probability=1.5)
        with pytest.raises(ValueError):
            TrafficConfig(cbr_rate=-1.0)


class TestSlottedAloha:
    def test_p_zero_delivers_nothing(self):
        dep = isolated_links(2)
        m = run_slotted_aloha(dep, SLOT, CBR_DEFAULT, AlohaConfig(0.0), 0.05, seed=1)
        assert m.delivered == 0
        assert m.network_throughput == 0.0
        assert math.isnan(m.mean_delay_s)
        assert m.queued == m.arrivals

    def test_isolated_link_delivers_everything(self):
        dep = isolated_links(1)
        m = run_slotted_aloha(dep, SLOT, CBR_DEFAULT, AlohaConfig(1.0), 0.5, seed=1)
        assert m.queued == 0
        assert m.collided == 0 and m.blocked == 0
        assert m.network_throughput == pytest.approx(0.09375, abs=0.001)
        # active every backlogged slot, so every packet leaves on arrival
        assert m.mean_delay_s == pytest.approx(SLOT.slot_duration)

    def test_packet_conservation(self):
        dep = two_mutually_fatal_links()
        m = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(0.4), 0.2, seed=7)
        assert m.delivered + m.queued == m.arrivals
        assert m.delivered >= 0 and m.queued >= 0
        assert m.per_link_throughput == pytest.approx(m.network_throughput / 2)

    def test_bit_for_bit_determinism(self):
        dep = two_mutually_fatal_links()
        a = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(0.5), 0.1, seed=3)
        b = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(0.5), 0.1, seed=3)
        assert a == b

    def test_seed_matters(self):
        dep = two_mutually_fatal_links()
        a = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(0.5), 0.1, seed=3)
        b = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(0.5), 0.1, seed=4)
        assert a != b

    def test_two_link_contention_oracle(self):
        # Two saturated, mutually fatal links transmitting with probability p
        # each succeed per slot with probability exactly p*(1-p).
        dep = two_mutually_fatal_links()
        p = 0.3
        n_slots = 40_000
        m = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(p),
                              n_slots * SLOT.slot_duration, seed=11)
        expect = p * (1 - p)
        sd = math.sqrt(expect * (1 - expect) / (2 * n_slots))
        assert abs(m.per_link_throughput - expect) < 4 * sd
        assert m.blocked == 0
        assert m.collided > 0

    def test_blocked_link_counts_as_blocked(self):
        dep = make_deployment(
            [make_link((5, 5), (6, 5))],
            obstacles=[make_obstacle((5.5, 4), (5.5, 6))],
        )
        m = run_slotted_aloha(dep, SLOT, SATURATED, AlohaConfig(1.0), 0.05, seed=2)
        assert m.delivered == 0
        assert m.collided == 0
        assert m.blocked == int(0.05 / SLOT.slot_duration)

    def test_empty_deployment(self):
        m = run_slotted_aloha(make_deployment([]), SLOT, CBR_DEFAULT,
                              AlohaConfig(1.0), 0.05, seed=0)
        assert m.delivered == m.arrivals == 0

    def test_duration_validation(self):
        with pytest.raises(ValueError):
            run_slotted_aloha(isolated_links(1), SLOT, CBR_DEFAULT,
                              AlohaConfig(1.0), 0.0, seed=0)


class TestTdma:
    def test_single_link_keeps_up(self):
        dep = isolated_links(1)
        m = run_tdma(dep, SLOT, CBR_DEFAULT, 1.0, seed=5)
        assert m.collided == 0
        assert m.queued == 0
        assert m.network_throughput == pytest.approx(0.09375, abs=0.001)
        # sole owner of every slot: service is immediate
        assert m.mean_delay_s == pytest.approx(SLOT.slot_duration)

    def test_never_collides(self):
        # even mutually fatal links are safe one at a time
        dep = two_mutually_fatal_links()
        m = run_tdma(dep, SLOT, SATURATED, 0.5, seed=5)
        assert m.collided == 0
        assert m.queued > 0  # saturated: each link owns only half the slots

    def test_saturated_fair_share(self):
        dep = two_mutually_fatal_links()
        m = run_tdma(dep, SLOT, SATURATED, 0.5, seed=5)
        assert m.network_throughput == pytest.approx(1.0, abs=1e-3)
        assert m.per_link_throughput == pytest.approx(0.5, abs=1e-3)

    def test_blocked_link_delivers_nothing(self):
        dep = make_deployment(
            [make_link((5, 5), (6, 5))],
            obstacles=[make_obstacle((5.5, 4), (5.5, 6))],
        )
        m = run_tdma(dep, SLOT, SATURATED, 0.05, seed=2)
        assert m.delivered == 0 and m.blocked > 0

    def test_deterministic(self):
        dep = isolated_links(3)
        assert run_tdma(dep, SLOT, CBR_DEFAULT, 0.2, seed=9) \
            == run_tdma(dep, SLOT, CBR_DEFAULT, 0.2, seed=9)

    def test_empty_deployment(self):
        m = run_tdma(make_deployment([]), SLOT, CBR_DEFAULT, 0.05, seed=0)
        assert m.delivered == 0


class TestOptimalP:
    GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

    def test_curve_covers_grid(self):
        cfg = DeploymentConfig(link_density=0.25, obstacle_density=0.25, seed=1)
        res = find_optimal_p(cfg, math.radians(30), self.GRID, 30)
        assert tuple(p for p, _ in res.curve) == self.GRID
        assert res.p_star in self.GRID
        assert res.throughput == max(v for _, v in res.curve)

    def test_tie_breaks_toward_larger_p(self):
        # density 0 gives an empty network and an all-zero curve
        cfg = DeploymentConfig(link_density=0.0, obstacle_density=0.0, seed=1)
        res = find_optimal_p(cfg, math.pi, self.GRID, 5)
        assert res.p_star == 1.0
        assert res.throughput == 0.0

    def test_sparse_narrow_prefers_always_transmit(self):
        cfg = DeploymentConfig(link_density=0.02, obstacle_density=0.25, seed=2)
        res = find_optimal_p(cfg, math.radians(5), self.GRID, 40)
        assert res.p_star == 1.0

    def test_dense_omni_backs_off(self):
        cfg = DeploymentConfig(link_density=1.0, obstacle_density=0.25, seed=2)
        res = find_optimal_p(cfg, 2 * math.pi, self.GRID, 15)
        assert res.p_star < 1.0

    def test_two_conflicting_links_peak_at_half(self):
        # Saturated p(1-p) oracle: the curve on two mutually fatal links
        # must peak at p = 0.5.
        dep = two_mutually_fatal_links()
        vals = throughput_curve(dep, self.GRID, SLOT, SATURATED, 1.0, seed=13)
        best = self.GRID[int(np.argmax(vals))]
        assert best == 0.5
        for p, v in zip(self.GRID, vals):
            expect = p * (1 - p)
            assert v == pytest.approx(expect, abs=4 * math.sqrt(
                expect * (1 - expect) / (2 * 40_000)) + 1e-9)

    def test_deterministic(self):
        cfg = DeploymentConfig(link_density=0.25, obstacle_density=0.25, seed=4)
        a = find_optimal_p(cfg, math.radians(45), self.GRID, 20)
        b = find_optimal_p(cfg, math.radians(45), self.GRID, 20)
        assert a == b

    def test_grid_validation(self):
        cfg = DeploymentConfig(seed=0)
        with pytest.raises(ValueError):
            find_optimal_p(cfg, math.pi, (), 10)
        with pytest.raises(ValueError):
            find_optimal_p(cfg, math.pi, (0.5, 1.2), 10)
