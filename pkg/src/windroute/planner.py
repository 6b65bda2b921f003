"""UCB replanning primitives: trajectory fan, reward, confidence bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geo
from .errors import InfeasibleTrackError, NoFeasibleTrajectoryError
from .windmodel import WindVector, predict_ground_speed


@dataclass(frozen=True)
class Segment:
    heading_change_deg: float  # relative to the trajectory's start heading
    length_nm: float

    def __post_init__(self):
        if self.length_nm <= 0.0:
            raise ValueError("segment length must be > 0")


@dataclass(frozen=True)
class Trajectory:
    id: int
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("trajectory needs at least one segment")

    @property
    def length_nm(self) -> float:
        return sum(s.length_nm for s in self.segments)

    @property
    def net_heading_change_deg(self) -> float:
        return self.segments[-1].heading_change_deg


@dataclass(frozen=True)
class TrajectoryLibrary:
    trajectories: tuple[Trajectory, ...]
    arc_length_nm: float
    fan_halfwidth_deg: float

    def __post_init__(self):
        if len(self.trajectories) < 2:
            raise ValueError("library needs K >= 2 trajectories")

    @property
    def size(self) -> int:
        return len(self.trajectories)


@dataclass(frozen=True)
class PlannerConfig:
    airspeed_kt: float = 250.0
    goal_radius_nm: float = 25.0
    replan_segment_count: int = 5
    ucb_delta: float = 0.1
    beta_t_override: float | None = None
    observation_spacing_nm: float = 10.0
    observation_noise_sd_kt: float = 2.0

    def __post_init__(self):
        if self.airspeed_kt <= 0 or self.goal_radius_nm <= 0:
            raise ValueError("airspeed and goal radius must be positive")
        if self.replan_segment_count < 1:
            raise ValueError("replan_segment_count must be >= 1")
        if not 0.0 < self.ucb_delta < 1.0:
            raise ValueError("ucb_delta must lie in (0, 1)")
        if self.observation_spacing_nm <= 0 or self.observation_noise_sd_kt <= 0:
            raise ValueError("observation spacing and noise must be positive")
        if self.beta_t_override is not None and self.beta_t_override < 0.0:
            raise ValueError("beta_t_override must be >= 0")


@dataclass(frozen=True)
class RewardEstimate:
    mean: float  # nm of goal progress per hour
    sd: float
    ucb: float
    feasible: bool


def build_fan_library(
    k: int,
    arc_length_nm: float = 100.0,
    fan_halfwidth_deg: float = 60.0,
    segments_per_trajectory: int = 10,
) -> TrajectoryLibrary:
    """Constant-curvature fan of K arcs, final headings even over +-halfwidth.

    Each arc is discretized into equal-length segments whose heading change
    interpolates linearly from 0 to the arc's net heading change (a trajectory
    with zero net change is straight). Odd K puts a straight arc in the middle.
    """
    if k < 2:
        raise ValueError("K must be >= 2")
    if arc_length_nm <= 0 or fan_halfwidth_deg <= 0 or segments_per_trajectory < 1:
        raise ValueError("invalid fan parameters")
    seg_len = arc_length_nm / segments_per_trajectory
    trajectories = []
    for i in range(k):
        net = -fan_halfwidth_deg + 2.0 * fan_halfwidth_deg * i / (k - 1)
        segments = tuple(
            Segment(net * (j + 1) / segments_per_trajectory, seg_len)
            for j in range(segments_per_trajectory)
        )
        trajectories.append(Trajectory(id=i, segments=segments))
    return TrajectoryLibrary(
        trajectories=tuple(trajectories),
        arc_length_nm=arc_length_nm,
        fan_halfwidth_deg=fan_halfwidth_deg,
    )


@dataclass(frozen=True)
class TrajectoryGeometry:
    """Wind-independent geometry of one trajectory rooted at a pose."""

    tracks_deg: tuple[float, ...]
    points: tuple[geo.GeoPoint, ...]  # segment endpoints, len = segments
    midpoints: tuple[geo.GeoPoint, ...]

    @property
    def end(self) -> geo.GeoPoint:
        return self.points[-1]


def trajectory_geometry(
    traj: Trajectory, start: geo.GeoPoint, start_heading_deg: float
) -> TrajectoryGeometry:
    tracks, points, midpoints = [], [], []
    pos = start
    for seg in traj.segments:
        track = (start_heading_deg + seg.heading_change_deg) % 360.0
        midpoints.append(geo.project_nm(pos, track, seg.length_nm / 2.0))
        pos = geo.project_nm(pos, track, seg.length_nm)
        tracks.append(track)
        points.append(pos)
    return TrajectoryGeometry(tuple(tracks), tuple(points), tuple(midpoints))


def _traversal_time_h(geometry, traj, winds, airspeed_kt) -> float:
    t = 0.0
    for seg, track, wind in zip(traj.segments, geometry.tracks_deg, winds):
        t += seg.length_nm / predict_ground_speed(wind, track, airspeed_kt)
    return t


def trajectory_reward(
    traj: Trajectory,
    start: geo.GeoPoint,
    start_heading_deg: float,
    goal: geo.GeoPoint,
    winds,
    airspeed_kt: float,
) -> tuple[float, float]:
    """Goal-progress rate (nm/h) and traversal time (s) under given winds.

    winds is one WindVector per segment. Raises InfeasibleTrackError when any
    segment's crosswind meets or exceeds the airspeed.
    """
    winds = list(winds)
    if len(winds) != len(traj.segments):
        raise ValueError("need exactly one wind per segment")
    geom = trajectory_geometry(traj, start, start_heading_deg)
    time_h = _traversal_time_h(geom, traj, winds, airspeed_kt)
    progress = geo.great_circle_distance_nm(start, goal) - geo.great_circle_distance_nm(
        geom.end, goal
    )
    return progress / time_h, time_h * 3600.0


def beta_t(t: int, k: int, delta: float) -> float:
    """Exploration weight schedule for round t with K arms."""
    if t < 1:
        raise ValueError("round index starts at 1")
    return 2.0 * math.log(k * t**2 * math.pi**2 / (6.0 * delta))


_FD_STEP_KT = 0.5


def reward_confidence(
    traj: Trajectory,
    start: geo.GeoPoint,
    start_heading_deg: float,
    goal: geo.GeoPoint,
    seg_means,
    seg_sds,
    t: int,
    config: PlannerConfig,
    library_size: int,
) -> RewardEstimate:
    """Mean/sd/UCB of the reward under per-segment wind uncertainty.

    seg_means: WindVector per segment (posterior mean at the midpoint);
    seg_sds: (sd_u, sd_v) per segment. The sd is first-order propagation with
    central differences per segment wind component, segments independent.
    """
    seg_means = list(seg_means)
    seg_sds = list(seg_sds)
    if len(seg_means) != len(traj.segments) or len(seg_sds) != len(traj.segments):
        raise ValueError("need one posterior wind per segment")
    geom = trajectory_geometry(traj, start, start_heading_deg)
    a = config.airspeed_kt
    lengths = [s.length_nm for s in traj.segments]
    try:
        gs = [
            predict_ground_speed(w, trk, a)
            for w, trk in zip(seg_means, geom.tracks_deg)
        ]
    except InfeasibleTrackError:
        return RewardEstimate(mean=math.nan, sd=math.nan, ucb=math.nan, feasible=False)
    time_h = sum(l / g for l, g in zip(lengths, gs))
    progress = geo.great_circle_distance_nm(start, goal) - geo.great_circle_distance_nm(
        geom.end, goal
    )
    mean = progress / time_h

    # Only the perturbed segment's ground speed changes, so each central
    # difference is two scalar wind-triangle evaluations.
    var = 0.0
    for i, (w, trk) in enumerate(zip(seg_means, geom.tracks_deg)):
        base_term = lengths[i] / gs[i]
        for comp in ("u", "v"):
            times = []
            for sign in (+1.0, -1.0):
                du = sign * _FD_STEP_KT if comp == "u" else 0.0
                dv = sign * _FD_STEP_KT if comp == "v" else 0.0
                try:
                    g = predict_ground_speed(
                        WindVector(w.u_kt + du, w.v_kt + dv), trk, a
                    )
                except InfeasibleTrackError:
                    times.append(None)
                    continue
                times.append(time_h - base_term + lengths[i] / g)
            if times[0] is not None and times[1] is not None:
                dr = (progress / times[0] - progress / times[1]) / (2.0 * _FD_STEP_KT)
            elif times[0] is not None:
                dr = (progress / times[0] - mean) / _FD_STEP_KT
            elif times[1] is not None:
                dr = (mean - progress / times[1]) / _FD_STEP_KT
            else:
                dr = 0.0
            sd_c = seg_sds[i][0] if comp == "u" else seg_sds[i][1]
            var += (dr * sd_c) ** 2
    sd = math.sqrt(var)
    if config.beta_t_override is not None:
        bt = config.beta_t_override
    else:
        bt = beta_t(t, library_size, config.ucb_delta)
    return RewardEstimate(mean=mean, sd=sd, ucb=mean + math.sqrt(bt) * sd, feasible=True)


def ucb_select(estimates) -> int:
    """Index of the feasible estimate with the highest UCB; ties -> lowest index."""
    best = None
    for i, est in enumerate(estimates):
        if not est.feasible:
            continue
        if best is None or est.ucb > estimates[best].ucb:
            best = i
    if best is None:
        raise NoFeasibleTrajectoryError("every trajectory is infeasible")
    return best


def mean_select(estimates) -> int:
    """Index of the feasible estimate with the highest mean; ties -> lowest index."""
    best = None
    for i, est in enumerate(estimates):
        if not est.feasible:
            continue
        if best is None or est.mean > estimates[best].mean:
            best = i
    if best is None:
        raise NoFeasibleTrajectoryError("every trajectory is infeasible")
    return best
