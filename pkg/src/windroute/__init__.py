"""Wind-field refinement and wind-aware flight routing toolkit."""

from .geo import GeoPoint, great_circle_distance_nm, initial_bearing_deg, project_nm
from .planner import (
    PlannerConfig,
    RewardEstimate,
    Trajectory,
    TrajectoryLibrary,
    build_fan_library,
    reward_confidence,
    trajectory_reward,
    ucb_select,
)
from .sim import FlightLog, SimConfig, run_experiment, simulate_flight
from .windmodel import (
    AircraftReport,
    LaplaceOptions,
    ModelHyperparams,
    StationObservation,
    WindPosterior,
    WindVector,
    gp_regress,
    kernel_eval,
    laplace_fuse,
    loo_ground_speed_rmse,
    neg_log_posterior,
    predict_ground_speed,
)

__all__ = [
    "AircraftReport",
    "FlightLog",
    "GeoPoint",
    "LaplaceOptions",
    "ModelHyperparams",
    "PlannerConfig",
    "RewardEstimate",
    "SimConfig",
    "StationObservation",
    "Trajectory",
    "TrajectoryLibrary",
    "WindPosterior",
    "WindVector",
    "build_fan_library",
    "gp_regress",
    "great_circle_distance_nm",
    "initial_bearing_deg",
    "kernel_eval",
    "laplace_fuse",
    "loo_ground_speed_rmse",
    "neg_log_posterior",
    "predict_ground_speed",
    "project_nm",
    "reward_confidence",
    "run_experiment",
    "simulate_flight",
    "trajectory_reward",
    "ucb_select",
]

__version__ = "0.1.0"
