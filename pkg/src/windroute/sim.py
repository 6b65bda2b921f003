"""Flight simulator and experiment harness.

Policies: "ucb" and "mean" run the receding-horizon planner against a GP
posterior refreshed from in-flight wind observations; "gcr" flies the great
circle blind. All flights are timed against the same ground-truth wind field
through the wind triangle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Protocol

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import geo
from .errors import (
    InfeasibleTrackError,
    NoFeasibleTrajectoryError,
    SimulationError,
    SimulationStuckError,
    SimulationTimeoutError,
)
from .planner import (
    PlannerConfig,
    TrajectoryLibrary,
    build_fan_library,
    mean_select,
    reward_confidence,
    trajectory_geometry,
    ucb_select,
)
from .windmodel import (
    ModelHyperparams,
    StationObservation,
    WindVector,
    gp_regress,
    kernel_matrix,
    predict_ground_speed,
)

POLICIES = ("ucb", "mean", "gcr")

_MAX_TRUTH_SPEED_KT = 250.0


class WindField(Protocol):
    def wind_at(self, p: geo.GeoPoint) -> WindVector: ...


@dataclass(frozen=True)
class UniformWindField:
    wind: WindVector

    def wind_at(self, p: geo.GeoPoint) -> WindVector:
        return self.wind


CALM_FIELD = UniformWindField(WindVector(0.0, 0.0))


@dataclass(frozen=True)
class JetBandField:
    """Gaussian-profile wind band around the great circle axis_start->axis_end.

    blowing_toward_deg is the direction the wind blows TO; peak speed on the
    axis, decaying with cross-track distance.
    """

    axis_start: geo.GeoPoint
    axis_end: geo.GeoPoint
    blowing_toward_deg: float
    peak_kt: float
    halfwidth_nm: float

    def wind_at(self, p: geo.GeoPoint) -> WindVector:
        x = geo.cross_track_distance_nm(self.axis_start, self.axis_end, p)
        speed = self.peak_kt * math.exp(-0.5 * (x / self.halfwidth_nm) ** 2)
        th = math.radians(self.blowing_toward_deg)
        return WindVector(speed * math.sin(th), speed * math.cos(th))


class GpSampleField:
    """Seeded draw from the GP prior, interpolated smoothly between control points.

    Deterministic for a given seed/region/hyperparams. Wind speed is capped at
    250 kt at query time (never reached with sane hyperparameters).
    """

    def __init__(
        self,
        seed: int,
        lat_range: tuple[float, float],
        lon_range: tuple[float, float],
        h: ModelHyperparams,
        alt_ft: float = 39000.0,
        grid: int = 8,
    ):
        rng = np.random.default_rng(seed)
        lats = np.linspace(lat_range[0], lat_range[1], grid)
        lons = np.linspace(lon_range[0], lon_range[1], grid)
        self._control = [
            geo.GeoPoint(float(la), float(lo), alt_ft) for la in lats for lo in lons
        ]
        self._h = h
        k = kernel_matrix(self._control, self._control, h)
        k[np.diag_indices_from(k)] += max(h.jitter, 1e-8 * h.signal_sd_kt**2)
        chol = np.linalg.cholesky(k)
        vals_u = chol @ rng.standard_normal(len(self._control))
        vals_v = chol @ rng.standard_normal(len(self._control))
        self._cho = cho_factor(k, lower=True)
        self._alpha_u = cho_solve(self._cho, vals_u)
        self._alpha_v = cho_solve(self._cho, vals_v)

    def wind_at(self, p: geo.GeoPoint) -> WindVector:
        kq = kernel_matrix([p], self._control, self._h)[0]
        u = float(kq @ self._alpha_u)
        v = float(kq @ self._alpha_v)
        speed = math.hypot(u, v)
        if speed > _MAX_TRUTH_SPEED_KT:
            scale = _MAX_TRUTH_SPEED_KT / speed
            u, v = u * scale, v * scale
        return WindVector(u, v)


@dataclass(frozen=True)
class StationField:
    """GP posterior mean conditioned on station observations (truth option (a))."""

    stations: tuple[StationObservation, ...]
    h: ModelHyperparams

    def wind_at(self, p: geo.GeoPoint) -> WindVector:
        return gp_regress(list(self.stations), [p], self.h).mean[0]


# ---------------------------------------------------------------------------


@dataclass
class SimConfig:
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    hyper: ModelHyperparams = field(default_factory=ModelHyperparams)
    library: TrajectoryLibrary = field(default_factory=lambda: build_fan_library(15))
    seed: int = 0
    gcr_step_nm: float = 10.0
    final_leg_step_nm: float = 5.0
    time_cap_factor: float = 10.0


@dataclass
class FlightLog:
    policy: str
    waypoints: list[tuple[geo.GeoPoint, float]]  # (position, elapsed_s)
    chosen_indices: list[int]
    observations: list[StationObservation]
    total_time_s: float

    def to_waypoint_records(self) -> str:
        lines = ["# elapsed_s\tlat_deg\tlon_deg\talt_ft"]
        for p, t in self.waypoints:
            lines.append(f"{t:.3f}\t{p.lat_deg:.6f}\t{p.lon_deg:.6f}\t{p.alt_ft:.0f}")
        return "\n".join(lines) + "\n"

    def to_geojson(self) -> dict:
        return {
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [
                    [round(p.lon_deg, 6), round(p.lat_deg, 6)] for p, _ in self.waypoints
                ],
            },
            "properties": {
                "policy": self.policy,
                "total_time_s": round(self.total_time_s, 3),
                "n_replans": len(self.chosen_indices),
                "n_observations": len(self.observations),
            },
        }


def _fly_segment(log, pos, track_deg, length_nm, truth, airspeed_kt):
    """Advance one segment through the true wind; returns (new_pos, dt_s)."""
    mid = geo.project_nm(pos, track_deg, length_nm / 2.0)
    wind = truth.wind_at(mid)
    try:
        gs = predict_ground_speed(wind, track_deg, airspeed_kt)
    except InfeasibleTrackError:
        return None, None
    if gs <= 1.0:
        raise SimulationStuckError(
            f"ground speed {gs:.2f} kt on track {track_deg:.1f}; no forward progress"
        )
    dt_s = length_nm / gs * 3600.0
    new_pos = geo.project_nm(pos, track_deg, length_nm)
    return new_pos, dt_s


def _fly_direct(log_waypoints, pos, goal, elapsed, truth, airspeed_kt, step_nm):
    """Great-circle steps all the way to the goal; returns (goal, elapsed)."""
    while True:
        d = geo.great_circle_distance_nm(pos, goal)
        if d <= 1e-9:
            return pos, elapsed
        step = min(step_nm, d)
        track = geo.initial_bearing_deg(pos, goal)
        new_pos, dt = _fly_segment(None, pos, track, step, truth, airspeed_kt)
        if new_pos is None:
            raise SimulationStuckError(
                f"direct leg infeasible: crosswind exceeds airspeed near "
                f"({pos.lat_deg:.2f}, {pos.lon_deg:.2f})"
            )
        pos, elapsed = new_pos, elapsed + dt
        log_waypoints.append((pos, elapsed))


def simulate_flight(
    policy: str,
    start: geo.GeoPoint,
    goal: geo.GeoPoint,
    truth: WindField,
    prior_stations,
    config: SimConfig,
) -> FlightLog:
    """Run one flight from start to goal and log everything."""
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    if start.same_position(goal):
        raise ValueError("start and goal coincide")
    total_d = geo.great_circle_distance_nm(start, goal)
    if total_d <= config.planner.goal_radius_nm:
        raise ValueError("start is already within the goal radius")

    if policy == "gcr":
        return _simulate_gcr(start, goal, truth, config)
    return _simulate_planned(policy, start, goal, truth, prior_stations, config)


def _simulate_gcr(start, goal, truth, config: SimConfig) -> FlightLog:
    a = config.planner.airspeed_kt
    waypoints = [(start, 0.0)]
    pos, elapsed = _fly_direct(
        waypoints, start, goal, 0.0, truth, a, config.gcr_step_nm
    )
    return FlightLog(
        policy="gcr",
        waypoints=waypoints,
        chosen_indices=[],
        observations=[],
        total_time_s=elapsed,
    )


def _simulate_planned(policy, start, goal, truth, prior_stations, config) -> FlightLog:
    pc = config.planner
    if policy == "mean":
        pc = replace(pc, beta_t_override=0.0)
    a = pc.airspeed_kt
    lib = config.library
    hyper = config.hyper
    rng = np.random.default_rng(config.seed)
    select = mean_select if policy == "mean" else ucb_select

    total_d = geo.great_circle_distance_nm(start, goal)
    cap_s = config.time_cap_factor * total_d / a * 3600.0

    obs: list[StationObservation] = list(prior_stations)
    waypoints: list[tuple[geo.GeoPoint, float]] = [(start, 0.0)]
    chosen: list[int] = []
    collected: list[StationObservation] = []

    pos = start
    heading = geo.initial_bearing_deg(start, goal)
    elapsed = 0.0
    since_obs = 0.0
    t_round = 1

    while geo.great_circle_distance_nm(pos, goal) > pc.goal_radius_nm:
        if elapsed > cap_s:
            raise SimulationTimeoutError(
                f"simulated time {elapsed:.0f} s exceeded cap {cap_s:.0f} s"
            )
        geoms = [trajectory_geometry(traj, pos, heading) for traj in lib.trajectories]
        midpoints = [m for g in geoms for m in g.midpoints]
        posterior = gp_regress(obs, midpoints, hyper)
        estimates = []
        off = 0
        for traj in lib.trajectories:
            m = len(traj.segments)
            estimates.append(
                reward_confidence(
                    traj,
                    pos,
                    heading,
                    goal,
                    posterior.mean[off : off + m],
                    posterior.sd[off : off + m],
                    t_round,
                    pc,
                    lib.size,
                )
            )
            off += m
        try:
            idx = select(estimates)
        except NoFeasibleTrajectoryError:
            # fallback: one direct step toward the goal, if it can be flown
            track = geo.initial_bearing_deg(pos, goal)
            step = min(config.gcr_step_nm, geo.great_circle_distance_nm(pos, goal))
            new_pos, dt = _fly_segment(None, pos, track, step, truth, a)
            if new_pos is None:
                raise SimulationStuckError(
                    "no feasible trajectory and the direct fallback step is "
                    "infeasible too"
                )
            pos, elapsed = new_pos, elapsed + dt
            heading = track
            waypoints.append((pos, elapsed))
            t_round += 1
            continue
        chosen.append(idx)
        traj = lib.trajectories[idx]
        n_fly = min(pc.replan_segment_count, len(traj.segments))
        for seg in traj.segments[:n_fly]:
            track = (heading + seg.heading_change_deg) % 360.0
            new_pos, dt = _fly_segment(None, pos, track, seg.length_nm, truth, a)
            if new_pos is None:
                break  # true wind made this segment infeasible; replan now
            pos, elapsed = new_pos, elapsed + dt
            waypoints.append((pos, elapsed))
            since_obs += seg.length_nm
            if since_obs >= pc.observation_spacing_nm:
                since_obs = 0.0
                true_wind = truth.wind_at(pos)
                noise = rng.normal(0.0, pc.observation_noise_sd_kt, size=2)
                ob = StationObservation(
                    pos,
                    WindVector(true_wind.u_kt + noise[0], true_wind.v_kt + noise[1]),
                )
                collected.append(ob)
                obs.append(ob)
            if geo.great_circle_distance_nm(pos, goal) <= pc.goal_radius_nm:
                break
        else:
            heading = (heading + traj.segments[n_fly - 1].heading_change_deg) % 360.0
            t_round += 1
            continue
        # inner loop broke: either goal radius reached or infeasible segment
        heading = track
        t_round += 1

    pos, elapsed = _fly_direct(
        waypoints, pos, goal, elapsed, truth, a, config.final_leg_step_nm
    )
    return FlightLog(
        policy=policy,
        waypoints=waypoints,
        chosen_indices=chosen,
        observations=collected,
        total_time_s=elapsed,
    )


# ---------------------------------------------------------------------------
# Experiment harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolicyStats:
    mean_s: float
    sd_s: float
    n: int
    failures: int


@dataclass
class ExperimentReport:
    # (route, policy) -> stats
    stats: dict[tuple[str, str], PolicyStats]
    rep_seeds: list[int]
    slot_labels: list[str]
    logs: dict[tuple[str, str, int], FlightLog] = field(default_factory=dict)

    def to_csv_text(self) -> str:
        lines = ["policy,route,mean_s,sd_s,n,failures"]
        for (route, policy), s in sorted(self.stats.items()):
            lines.append(
                f"{policy},{route},{s.mean_s:.3f},{s.sd_s:.3f},{s.n},{s.failures}"
            )
        return "\n".join(lines) + "\n"


ScenarioFn = Callable[[str, geo.GeoPoint, geo.GeoPoint, int], tuple]
# scenario(route_name, start, goal, seed) -> (truth_field, prior_stations)


def run_experiment(
    routes: dict[str, tuple[geo.GeoPoint, geo.GeoPoint]],
    scenario: ScenarioFn,
    policies,
    repetitions: int,
    config: SimConfig,
    base_seed: int = 0,
    keep_logs: bool = True,
) -> ExperimentReport:
    """Run simulate_flight over routes x policies x repetitions and aggregate."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    for p in policies:
        if p not in POLICIES:
            raise ValueError(f"unknown policy {p!r}")
    rep_seeds = [base_seed + r for r in range(repetitions)]
    report = ExperimentReport(
        stats={}, rep_seeds=rep_seeds, slot_labels=[f"slot{r}" for r in range(repetitions)]
    )
    for route_name, (start, goal) in routes.items():
        worlds = [scenario(route_name, start, goal, s) for s in rep_seeds]
        for policy in policies:
            times = []
            failures = 0
            for r, (truth, stations) in enumerate(worlds):
                cfg = replace(config, seed=rep_seeds[r])
                try:
                    log = simulate_flight(policy, start, goal, truth, stations, cfg)
                except SimulationError:
                    failures += 1
                    continue
                times.append(log.total_time_s)
                if keep_logs:
                    report.logs[(route_name, policy, r)] = log
            if times:
                arr = np.array(times)
                stats = PolicyStats(
                    mean_s=float(arr.mean()),
                    sd_s=float(arr.std(ddof=0)),
                    n=len(times),
                    failures=failures,
                )
            else:
                stats = PolicyStats(math.nan, math.nan, 0, failures)
            report.stats[(route_name, policy)] = stats
    return report


def flight_logs_geojson(logs) -> dict:
    """FeatureCollection of flight tracks for plotting."""
    return {
        "type": "FeatureCollection",
        "features": [log.to_geojson() for log in logs],
    }


def geojson_text(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
