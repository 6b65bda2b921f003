"""Trajectory library, reward, confidence bounds, and the selection rules."""

import math

import numpy as np
import pytest

from windroute import geo
from windroute.errors import NoFeasibleTrajectoryError
from windroute.planner import (
    PlannerConfig,
    RewardEstimate,
    Segment,
    Trajectory,
    TrajectoryLibrary,
    beta_t,
    build_fan_library,
    mean_select,
    reward_confidence,
    trajectory_geometry,
    trajectory_reward,
    ucb_select,
)
from windroute.windmodel import WindVector, predict_ground_speed

START = geo.GeoPoint(35.0, -100.0, 39000.0)
GOAL = geo.GeoPoint(35.0, -90.0, 39000.0)  # roughly due east, ~490 nm
CALM = WindVector(0.0, 0.0)


def _heading_to_goal():
    return geo.initial_bearing_deg(START, GOAL)


class TestLibrary:
    def test_three_arm_single_segment_fan(self):
        lib = build_fan_library(3, 100.0, 60.0, 1)
        changes = [t.segments[0].heading_change_deg for t in lib.trajectories]
        assert changes == [-60.0, 0.0, 60.0]

    def test_middle_of_fifteen_is_straight(self):
        lib = build_fan_library(15)
        mid = lib.trajectories[7]
        assert all(s.heading_change_deg == 0.0 for s in mid.segments)

    def test_segment_lengths_sum_to_arc_length(self):
        lib = build_fan_library(15, 137.0, 60.0, 10)
        for traj in lib.trajectories:
            total = sum(s.length_nm for s in traj.segments)
            assert total == pytest.approx(137.0, abs=1e-9)

    def test_mirror_symmetry(self):
        lib = build_fan_library(9, 100.0, 45.0, 8)
        for left, right in zip(lib.trajectories, reversed(lib.trajectories)):
            for sl, sr in zip(left.segments, right.segments):
                assert sl.heading_change_deg == pytest.approx(
                    -sr.heading_change_deg
                )

    def test_heading_change_is_linear_along_arc(self):
        lib = build_fan_library(3, 100.0, 60.0, 4)
        outer = lib.trajectories[2]  # net +60 over 4 segments
        changes = [s.heading_change_deg for s in outer.segments]
        assert changes == pytest.approx([15.0, 30.0, 45.0, 60.0])

    def test_too_few_arms_rejected(self):
        with pytest.raises(ValueError):
            build_fan_library(1)

    def test_trajectory_invariants(self):
        with pytest.raises(ValueError):
            Trajectory(0, ())
        with pytest.raises(ValueError):
            Trajectory(0, (Segment(0.0, -5.0),))
        with pytest.raises(ValueError):
            TrajectoryLibrary(
                trajectories=(Trajectory(0, (Segment(0.0, 1.0),)),),
                arc_length_nm=1.0,
                fan_halfwidth_deg=60.0,
            )


class TestReward:
    def test_straight_at_goal_calm(self):
        lib = build_fan_library(15)
        straight = lib.trajectories[7]
        r, t_s = trajectory_reward(
            straight, START, _heading_to_goal(), GOAL, [CALM] * 10, 250.0
        )
        assert r == pytest.approx(250.0, rel=0.02)
        assert t_s == pytest.approx(100.0 / 250.0 * 3600.0, rel=1e-6)

    def test_straight_at_goal_tailwind(self):
        lib = build_fan_library(15)
        straight = lib.trajectories[7]
        heading = _heading_to_goal()
        th = math.radians(heading)
        tail = WindVector(50.0 * math.sin(th), 50.0 * math.cos(th))
        r, t_s = trajectory_reward(
            straight, START, heading, GOAL, [tail] * 10, 250.0
        )
        assert r == pytest.approx(300.0, rel=0.02)
        assert t_s == pytest.approx(100.0 / 300.0 * 3600.0, rel=1e-6)

    def test_perpendicular_progress_near_zero(self):
        straight = Trajectory(0, tuple(Segment(0.0, 10.0) for _ in range(10)))
        far_goal = geo.project_nm(START, _heading_to_goal(), 4000.0)
        heading = (geo.initial_bearing_deg(START, far_goal) + 90.0) % 360.0
        r, _ = trajectory_reward(
            straight, START, heading, far_goal, [CALM] * 10, 250.0
        )
        # progress is perpendicular to motion; allow geodesic curvature slack
        assert abs(r) < 0.02 * 250.0

    def test_moving_away_is_negative(self):
        straight = Trajectory(0, tuple(Segment(0.0, 10.0) for _ in range(10)))
        heading = (_heading_to_goal() + 180.0) % 360.0
        r, _ = trajectory_reward(straight, START, heading, GOAL, [CALM] * 10, 250.0)
        assert r == pytest.approx(-250.0, rel=0.02)

    def test_infeasible_segment_raises(self):
        straight = Trajectory(0, (Segment(0.0, 100.0),))
        heading = _heading_to_goal()
        th = math.radians(heading + 90.0)
        cross = WindVector(260.0 * math.sin(th), 260.0 * math.cos(th))
        from windroute.errors import InfeasibleTrackError

        with pytest.raises(InfeasibleTrackError):
            trajectory_reward(straight, START, heading, GOAL, [cross], 250.0)

    def test_time_matches_wind_triangle_per_segment(self):
        lib = build_fan_library(5, 100.0, 40.0, 4)
        traj = lib.trajectories[0]
        heading = _heading_to_goal()
        winds = [WindVector(20.0, -10.0)] * 4
        _, t_s = trajectory_reward(traj, START, heading, GOAL, winds, 250.0)
        g = trajectory_geometry(traj, START, heading)
        expect = sum(
            seg.length_nm / predict_ground_speed(w, track, 250.0)
            for seg, track, w in zip(traj.segments, g.tracks_deg, winds)
        )
        assert t_s == pytest.approx(expect * 3600.0, rel=1e-9)


class TestBetaSchedule:
    def test_hand_value(self):
        assert beta_t(1, 15, 0.1) == pytest.approx(
            2.0 * math.log(15.0 * math.pi**2 / 0.6), abs=1e-9
        )
        assert beta_t(1, 15, 0.1) == pytest.approx(11.02, abs=0.01)

    def test_monotone_in_round(self):
        vals = [beta_t(t, 15, 0.1) for t in range(1, 6)]
        assert vals == sorted(vals)

    def test_round_starts_at_one(self):
        with pytest.raises(ValueError):
            beta_t(0, 15, 0.1)


def _straight_single_segment(length_nm=100.0):
    return Trajectory(0, (Segment(0.0, length_nm),))


class TestRewardConfidence:
    CONFIG = PlannerConfig()

    def test_zero_variance_gives_zero_sd(self):
        traj = _straight_single_segment()
        est = reward_confidence(
            traj,
            START,
            _heading_to_goal(),
            GOAL,
            [CALM],
            [(0.0, 0.0)],
            1,
            self.CONFIG,
            15,
        )
        assert est.feasible
        assert est.sd == 0.0
        assert est.ucb == est.mean

    def test_sd_matches_monte_carlo(self):
        traj = _straight_single_segment()
        heading = _heading_to_goal()
        th = math.radians(heading)
        sd_w = 8.0
        est = reward_confidence(
            traj, START, heading, GOAL, [CALM], [(sd_w, sd_w)], 1, self.CONFIG, 15
        )
        rng = np.random.default_rng(42)
        samples = []
        for _ in range(10_000):
            w = WindVector(rng.normal(0, sd_w), rng.normal(0, sd_w))
            try:
                r, _ = trajectory_reward(traj, START, heading, GOAL, [w], 250.0)
            except Exception:
                continue
            samples.append(r)
        mc_sd = float(np.std(samples))
        assert est.sd == pytest.approx(mc_sd, rel=0.10)

    def test_sd_homogeneous_in_posterior_sd(self):
        traj = _straight_single_segment()
        heading = _heading_to_goal()
        est1 = reward_confidence(
            traj, START, heading, GOAL, [CALM], [(4.0, 4.0)], 1, self.CONFIG, 15
        )
        est2 = reward_confidence(
            traj, START, heading, GOAL, [CALM], [(8.0, 8.0)], 1, self.CONFIG, 15
        )
        assert est2.sd == pytest.approx(2.0 * est1.sd, rel=1e-6)

    def test_infeasible_at_mean_is_flagged(self):
        traj = _straight_single_segment()
        heading = _heading_to_goal()
        th = math.radians(heading + 90.0)
        cross = WindVector(260.0 * math.sin(th), 260.0 * math.cos(th))
        est = reward_confidence(
            traj, START, heading, GOAL, [cross], [(1.0, 1.0)], 1, self.CONFIG, 15
        )
        assert not est.feasible

    def test_beta_override_zero_means_ucb_equals_mean(self):
        traj = _straight_single_segment()
        cfg = PlannerConfig(beta_t_override=0.0)
        est = reward_confidence(
            traj, START, _heading_to_goal(), GOAL, [CALM], [(5.0, 5.0)], 3, cfg, 15
        )
        assert est.ucb == pytest.approx(est.mean)
        assert est.sd > 0.0

    def test_ucb_grows_with_round(self):
        traj = _straight_single_segment()
        ests = [
            reward_confidence(
                traj,
                START,
                _heading_to_goal(),
                GOAL,
                [CALM],
                [(5.0, 5.0)],
                t,
                self.CONFIG,
                15,
            )
            for t in (1, 2, 5)
        ]
        bonuses = [e.ucb - e.mean for e in ests]
        assert bonuses == sorted(bonuses)
        assert all(b > 0 for b in bonuses)


def _estimate(mean, sd=0.0, ucb=None, feasible=True):
    return RewardEstimate(
        mean=mean, sd=sd, ucb=mean if ucb is None else ucb, feasible=feasible
    )


class TestSelection:
    def test_ucb_argmax(self):
        ests = [_estimate(1.0, ucb=2.0), _estimate(5.0, ucb=9.0), _estimate(3.0)]
        assert ucb_select(ests) == 1

    def test_tie_breaks_to_lowest_index(self):
        ests = [_estimate(4.0, ucb=7.0), _estimate(6.0, ucb=7.0)]
        assert ucb_select(ests) == 0
        ests = [_estimate(6.0), _estimate(6.0)]
        assert mean_select(ests) == 0

    def test_infeasible_excluded(self):
        ests = [_estimate(9.0, ucb=99.0, feasible=False), _estimate(1.0)]
        assert ucb_select(ests) == 1

    def test_all_infeasible_raises(self):
        ests = [_estimate(1.0, feasible=False), _estimate(2.0, feasible=False)]
        with pytest.raises(NoFeasibleTrajectoryError):
            ucb_select(ests)
        with pytest.raises(NoFeasibleTrajectoryError):
            mean_select(ests)

    def test_zero_sd_ucb_equals_mean_argmax(self):
        ests = [_estimate(m, sd=0.0) for m in (3.0, 7.0, 5.0)]
        assert ucb_select(ests) == mean_select(ests) == 1
