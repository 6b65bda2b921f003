"""Run configuration: flat INI file with one section per module, flag overrides."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

from . import geo
from .errors import ConfigError
from .planner import PlannerConfig, TrajectoryLibrary, build_fan_library
from .sim import SimConfig
from .windmodel import ModelHyperparams


@dataclass
class LibraryParams:
    size: int = 15
    arc_length_nm: float = 100.0
    fan_halfwidth_deg: float = 60.0
    segments_per_trajectory: int = 10

    def build(self) -> TrajectoryLibrary:
        return build_fan_library(
            self.size,
            self.arc_length_nm,
            self.fan_halfwidth_deg,
            self.segments_per_trajectory,
        )


@dataclass
class TruthParams:
    kind: str = "gp"  # gp | headwind | crosswind | uniform | calm
    wind_u_kt: float = 0.0
    wind_v_kt: float = 0.0
    peak_kt: float = 150.0
    halfwidth_nm: float = 50.0
    n_stations: int = 8
    station_noise_sd_kt: float = 5.0


@dataclass
class RunConfig:
    hyper: ModelHyperparams = field(default_factory=ModelHyperparams)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    library: LibraryParams = field(default_factory=LibraryParams)
    truth: TruthParams = field(default_factory=TruthParams)
    routes: dict[str, tuple[geo.GeoPoint, geo.GeoPoint]] = field(default_factory=dict)
    repetitions: int = 3
    base_seed: int = 0
    gcr_step_nm: float = 10.0
    time_cap_factor: float = 10.0
    policies: tuple[str, ...] = ("ucb", "mean", "gcr")
    alt_ft: float = 39000.0
    out_dir: str = "out"

    def sim_config(self) -> SimConfig:
        return SimConfig(
            planner=self.planner,
            hyper=self.hyper,
            library=self.library.build(),
            seed=self.base_seed,
            gcr_step_nm=self.gcr_step_nm,
            time_cap_factor=self.time_cap_factor,
        )


def _section(parser, name):
    return parser[name] if parser.has_section(name) else {}


def _get(sec, key, cast, default):
    if key not in sec:
        return default
    raw = sec[key]
    if raw.strip() == "":
        return None if default is None else default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value {raw!r} for key {key!r}: {exc}") from exc


def _parse_route(raw: str, alt_ft: float):
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"route must be 'lat1,lon1,lat2,lon2', got {raw!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"non-numeric route coordinate in {raw!r}") from exc
    return (
        geo.GeoPoint(vals[0], vals[1], alt_ft),
        geo.GeoPoint(vals[2], vals[3], alt_ft),
    )


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    """Load an INI run config; missing file or keys fall back to defaults.

    overrides maps "section.key" -> raw string and wins over the file.
    """
    parser = configparser.ConfigParser()
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file {path!r} does not exist")
        try:
            parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config {path!r}: {exc}") from exc
    for dotted, raw in (overrides or {}).items():
        if raw is None:
            continue
        try:
            section, key = dotted.split(".", 1)
        except ValueError:
            raise ConfigError(f"override key {dotted!r} must look like section.key")
        if not parser.has_section(section):
            parser.add_section(section)
        parser[section][key] = str(raw)

    cfg = RunConfig()
    try:
        m = _section(parser, "model")
        cfg.hyper = ModelHyperparams(
            lengthscale_h_nm=_get(m, "lengthscale_h_nm", float, 250.0),
            lengthscale_v_ft=_get(m, "lengthscale_v_ft", float, 4000.0),
            signal_sd_kt=_get(m, "signal_sd_kt", float, 30.0),
            station_noise_sd_kt=_get(m, "station_noise_sd_kt", float, 5.0),
            aircraft_beta=_get(m, "aircraft_beta", float, 0.02),
            jitter=_get(m, "jitter", float, 1e-2),
        )
        p = _section(parser, "planner")
        beta_override = _get(p, "beta_t_override", float, None)
        cfg.planner = PlannerConfig(
            airspeed_kt=_get(p, "airspeed_kt", float, 250.0),
            goal_radius_nm=_get(p, "goal_radius_nm", float, 25.0),
            replan_segment_count=_get(p, "replan_segment_count", int, 5),
            ucb_delta=_get(p, "ucb_delta", float, 0.1),
            beta_t_override=beta_override,
            observation_spacing_nm=_get(p, "observation_spacing_nm", float, 10.0),
            observation_noise_sd_kt=_get(p, "observation_noise_sd_kt", float, 2.0),
        )
        lib = _section(parser, "library")
        cfg.library = LibraryParams(
            size=_get(lib, "size", int, 15),
            arc_length_nm=_get(lib, "arc_length_nm", float, 100.0),
            fan_halfwidth_deg=_get(lib, "fan_halfwidth_deg", float, 60.0),
            segments_per_trajectory=_get(lib, "segments_per_trajectory", int, 10),
        )
        cfg.library.build()  # validate eagerly
        s = _section(parser, "sim")
        cfg.repetitions = _get(s, "repetitions", int, 3)
        cfg.base_seed = _get(s, "base_seed", int, 0)
        cfg.gcr_step_nm = _get(s, "gcr_step_nm", float, 10.0)
        cfg.time_cap_factor = _get(s, "time_cap_factor", float, 10.0)
        cfg.alt_ft = _get(s, "alt_ft", float, 39000.0)
        policies_raw = _get(s, "policies", str, "ucb,mean,gcr")
        cfg.policies = tuple(p.strip() for p in policies_raw.split(",") if p.strip())
        cfg.truth = TruthParams(
            kind=_get(s, "truth", str, "gp"),
            wind_u_kt=_get(s, "wind_u_kt", float, 0.0),
            wind_v_kt=_get(s, "wind_v_kt", float, 0.0),
            peak_kt=_get(s, "peak_kt", float, 150.0),
            halfwidth_nm=_get(s, "halfwidth_nm", float, 50.0),
            n_stations=_get(s, "n_stations", int, 8),
            station_noise_sd_kt=_get(s, "station_noise_sd_kt", float, 5.0),
        )
        paths = _section(parser, "paths")
        cfg.out_dir = _get(paths, "out_dir", str, "out")
        if parser.has_section("routes"):
            for name, raw in parser["routes"].items():
                cfg.routes[name] = _parse_route(raw, cfg.alt_ft)
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc

    if cfg.repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    if cfg.truth.kind not in ("gp", "headwind", "crosswind", "uniform", "calm"):
        raise ConfigError(f"unknown truth kind {cfg.truth.kind!r}")
    for pol in cfg.policies:
        if pol not in ("ucb", "mean", "gcr"):
            raise ConfigError(f"unknown policy {pol!r}")
    return cfg
