"""Seeded synthetic worlds, scenarios, and input-file generation.

Everything here is deterministic in the seed, so benchmark and acceptance runs
are reproducible without any real flight logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geo
from .ingest import (
    DecodedWind,
    WindsAloftBulletin,
    format_fb_bulletin,
    wind_vector_from_met,
)
from .sim import GpSampleField, JetBandField, UniformWindField, WindField
from .windmodel import (
    AircraftReport,
    ModelHyperparams,
    StationObservation,
    WindVector,
)

# A west-coast style desk region, roughly WA/OR/CA at cruise altitude.
DEFAULT_REGION = ((32.0, 48.0), (-125.0, -110.0))
DEFAULT_ALT_FT = 39000.0


@dataclass(frozen=True)
class SyntheticScenario:
    field: WindField
    stations: tuple[StationObservation, ...]
    aircraft: tuple[AircraftReport, ...]
    true_winds_at_aircraft: tuple[WindVector, ...]


def _random_point(rng, lat_range, lon_range, alt_ft) -> geo.GeoPoint:
    return geo.GeoPoint(
        float(rng.uniform(*lat_range)),
        float(rng.uniform(*lon_range)),
        alt_ft,
    )


def make_benchmark_scenario(
    seed: int,
    h: ModelHyperparams,
    n_stations: int = 10,
    n_aircraft: int = 30,
    station_noise_sd_kt: float = 5.0,
    airspeed_kt: float = 250.0,
    region=DEFAULT_REGION,
    alt_ft: float = DEFAULT_ALT_FT,
) -> SyntheticScenario:
    """Known GP wind field with noisy stations and wind-consistent aircraft.

    Aircraft fly random headings at the given airspeed; their ground velocity
    is air velocity + true wind, reported exactly (stations carry the noise).
    """
    rng = np.random.default_rng(seed)
    lat_range, lon_range = region
    field = GpSampleField(seed, lat_range, lon_range, h, alt_ft=alt_ft)
    stations = []
    for _ in range(n_stations):
        site = _random_point(rng, lat_range, lon_range, alt_ft)
        w = field.wind_at(site)
        noise = rng.normal(0.0, station_noise_sd_kt, size=2)
        stations.append(
            StationObservation(site, WindVector(w.u_kt + noise[0], w.v_kt + noise[1]))
        )
    aircraft = []
    true_winds = []
    for _ in range(n_aircraft):
        site = _random_point(rng, lat_range, lon_range, alt_ft)
        w = field.wind_at(site)
        heading = rng.uniform(0.0, 360.0)
        th = math.radians(heading)
        vx = airspeed_kt * math.sin(th) + w.u_kt
        vy = airspeed_kt * math.cos(th) + w.v_kt
        aircraft.append(
            AircraftReport(site, WindVector(vx, vy), airspeed_kt=airspeed_kt)
        )
        true_winds.append(w)
    return SyntheticScenario(
        field=field,
        stations=tuple(stations),
        aircraft=tuple(aircraft),
        true_winds_at_aircraft=tuple(true_winds),
    )


def make_consistent_scenario(
    seed: int,
    wind: WindVector | None = None,
    n_stations: int = 6,
    n_aircraft: int = 8,
    airspeed_kt: float = 250.0,
    region=DEFAULT_REGION,
    alt_ft: float = DEFAULT_ALT_FT,
) -> SyntheticScenario:
    """Uniform wind, zero noise everywhere: every method should nail the GS.

    The default wind is an exactly FB-encodable vector (from 270 deg at 20 kt)
    so the file round trip through a bulletin stays self-consistent.
    """
    if wind is None:
        wind = wind_vector_from_met(270.0, 20.0)
    rng = np.random.default_rng(seed)
    lat_range, lon_range = region
    field = UniformWindField(wind)
    stations = tuple(
        StationObservation(_random_point(rng, lat_range, lon_range, alt_ft), wind)
        for _ in range(n_stations)
    )
    aircraft = []
    for _ in range(n_aircraft):
        site = _random_point(rng, lat_range, lon_range, alt_ft)
        heading = rng.uniform(0.0, 360.0)
        th = math.radians(heading)
        aircraft.append(
            AircraftReport(
                site,
                WindVector(
                    airspeed_kt * math.sin(th) + wind.u_kt,
                    airspeed_kt * math.cos(th) + wind.v_kt,
                ),
                airspeed_kt=airspeed_kt,
            )
        )
    return SyntheticScenario(
        field=field,
        stations=stations,
        aircraft=tuple(aircraft),
        true_winds_at_aircraft=tuple(wind for _ in aircraft),
    )


# ---------------------------------------------------------------------------
# Route scenarios for the simulator
# ---------------------------------------------------------------------------

# Continental-scale routes: South Carolina -> Utah and Seattle -> Miami.
ROUTE_SC_TO_UT = (geo.GeoPoint(33.94, -81.12, DEFAULT_ALT_FT),
                  geo.GeoPoint(40.76, -111.89, DEFAULT_ALT_FT))
ROUTE_SEATTLE_TO_MIAMI = (geo.GeoPoint(47.45, -122.31, DEFAULT_ALT_FT),
                          geo.GeoPoint(25.79, -80.29, DEFAULT_ALT_FT))


def _route_region(start, goal, margin_deg=6.0):
    lat = sorted((start.lat_deg, goal.lat_deg))
    lon = sorted((start.lon_deg, goal.lon_deg))
    return (
        (max(-89.0, lat[0] - margin_deg), min(89.0, lat[1] + margin_deg)),
        (lon[0] - margin_deg, lon[1] + margin_deg),
    )


def _corridor_stations(rng, field, start, goal, n_stations, noise_sd_kt, alt_ft):
    """Stations scattered around the route corridor, reporting noisy truth."""
    d = geo.great_circle_distance_nm(start, goal)
    bearing = geo.initial_bearing_deg(start, goal)
    out = []
    for _ in range(n_stations):
        along = rng.uniform(0.0, d)
        across = rng.normal(0.0, 0.25 * d)
        side = 90.0 if across >= 0 else -90.0
        p = geo.project_nm(start, bearing, along)
        p = geo.project_nm(p, (bearing + side) % 360.0, abs(across))
        p = geo.GeoPoint(p.lat_deg, p.lon_deg, alt_ft)
        w = field.wind_at(p)
        noise = rng.normal(0.0, noise_sd_kt, size=2)
        out.append(
            StationObservation(p, WindVector(w.u_kt + noise[0], w.v_kt + noise[1]))
        )
    return out


def gp_route_scenario(
    h: ModelHyperparams,
    n_stations: int = 8,
    station_noise_sd_kt: float = 5.0,
    alt_ft: float = DEFAULT_ALT_FT,
):
    """Scenario factory: per-seed GP-sample truth plus corridor stations."""

    def scenario(route_name, start, goal, seed):
        lat_range, lon_range = _route_region(start, goal)
        field = GpSampleField(seed, lat_range, lon_range, h, alt_ft=alt_ft)
        rng = np.random.default_rng(seed + 10_000)
        stations = _corridor_stations(
            rng, field, start, goal, n_stations, station_noise_sd_kt, alt_ft
        )
        return field, stations

    return scenario


# Cross-route sounding transects for the band scenarios: fractions of the
# route length where a transect sits, and lateral offsets in units of the
# band halfwidth.  Dense enough that a short-lengthscale GP resolves the
# band profile, including the calm air beyond roughly two halfwidths.
_TRANSECT_FRACTIONS = (0.15, 0.5, 0.85)
_TRANSECT_OFFSETS_HW = (0.0, 0.5, -0.5, 1.0, -1.0, 1.8, -1.8, 2.8, -2.8)


def _transect_stations(rng, field, start, goal, halfwidth_nm, noise_sd_kt, alt_ft):
    """Stations on cross-route transects sampling a band's lateral profile."""
    d = geo.great_circle_distance_nm(start, goal)
    bearing = geo.initial_bearing_deg(start, goal)
    out = []
    for frac in _TRANSECT_FRACTIONS:
        base = geo.project_nm(start, bearing, frac * d)
        for off_hw in _TRANSECT_OFFSETS_HW:
            off = off_hw * halfwidth_nm
            if off == 0.0:
                p = base
            else:
                side = 90.0 if off > 0 else -90.0
                p = geo.project_nm(base, (bearing + side) % 360.0, abs(off))
            p = geo.GeoPoint(p.lat_deg, p.lon_deg, alt_ft)
            w = field.wind_at(p)
            noise = rng.normal(0.0, noise_sd_kt, size=2)
            out.append(
                StationObservation(
                    p, WindVector(w.u_kt + noise[0], w.v_kt + noise[1])
                )
            )
    return out


def headwind_route_scenario(
    peak_kt: float = 150.0,
    halfwidth_nm: float = 50.0,
    station_noise_sd_kt: float = 1.0,
    alt_ft: float = DEFAULT_ALT_FT,
):
    """Scenario factory: a jet band blowing straight down the route axis.

    The direct route suffers the full headwind; detouring laterally escapes
    the band, which is what a wind-aware planner should discover.  Stations
    sit on cross-route transects so the posterior resolves the band profile;
    pair this scenario with a lengthscale comparable to the halfwidth.
    """

    def scenario(route_name, start, goal, seed):
        bearing = geo.initial_bearing_deg(start, goal)
        field = JetBandField(
            axis_start=start,
            axis_end=goal,
            blowing_toward_deg=(bearing + 180.0) % 360.0,
            peak_kt=peak_kt,
            halfwidth_nm=halfwidth_nm,
        )
        rng = np.random.default_rng(seed + 20_000)
        stations = _transect_stations(
            rng, field, start, goal, halfwidth_nm, station_noise_sd_kt, alt_ft
        )
        return field, stations

    return scenario


def crosswind_band_scenario(
    peak_kt: float = 150.0,
    halfwidth_nm: float = 50.0,
    station_noise_sd_kt: float = 1.0,
    alt_ft: float = DEFAULT_ALT_FT,
):
    """Jet band across the route: strong crosswind on the axis, calm off it."""

    def scenario(route_name, start, goal, seed):
        bearing = geo.initial_bearing_deg(start, goal)
        field = JetBandField(
            axis_start=start,
            axis_end=goal,
            blowing_toward_deg=(bearing + 90.0) % 360.0,
            peak_kt=peak_kt,
            halfwidth_nm=halfwidth_nm,
        )
        rng = np.random.default_rng(seed + 30_000)
        stations = _transect_stations(
            rng, field, start, goal, halfwidth_nm, station_noise_sd_kt, alt_ft
        )
        return field, stations

    return scenario


def calm_route_scenario(n_stations: int = 4, alt_ft: float = DEFAULT_ALT_FT):
    """Calm world; stations truthfully report zero wind."""

    def scenario(route_name, start, goal, seed):
        field = UniformWindField(WindVector(0.0, 0.0))
        rng = np.random.default_rng(seed + 40_000)
        stations = _corridor_stations(rng, field, start, goal, n_stations, 1e-3, alt_ft)
        return field, stations

    return scenario


def uniform_route_scenario(
    wind: WindVector, n_stations: int = 4, alt_ft: float = DEFAULT_ALT_FT
):
    def scenario(route_name, start, goal, seed):
        field = UniformWindField(wind)
        rng = np.random.default_rng(seed + 50_000)
        stations = _corridor_stations(rng, field, start, goal, n_stations, 1e-3, alt_ft)
        return field, stations

    return scenario


def gp_world_benchmark():
    """The shipped GP-world routing benchmark: scenario plus matched sim config.

    Strong (45 kt sd) GP-sample winds with only two noisy prior stations, so
    the posterior starts vague and in-flight observations matter.  Under these
    conditions the exploration bonus pays: averaged over seeds, ucb beats the
    mean-greedy policy, and both beat the great circle.
    """
    from .sim import SimConfig

    h = ModelHyperparams(signal_sd_kt=45.0)
    scenario = gp_route_scenario(h, n_stations=2, station_noise_sd_kt=10.0)
    return scenario, SimConfig(hyper=h)


def strong_headwind_benchmark(seed: int = 0):
    """The shipped strong-headwind benchmark: scenario plus matched sim config.

    A 150 kt band (50 nm halfwidth) blows straight down the route; transect
    stations reveal the calm air off-axis.  The sim config pairs a 60 nm
    lengthscale with 150 nm arcs so the planner both sees and reaches the
    band edge.  A wind-aware policy beats the great circle by well over 20%.
    """
    from .planner import PlannerConfig, build_fan_library
    from .sim import SimConfig

    scenario = headwind_route_scenario(peak_kt=150.0, halfwidth_nm=50.0)
    config = SimConfig(
        planner=PlannerConfig(),
        hyper=ModelHyperparams(lengthscale_h_nm=60.0),
        library=build_fan_library(15, 150.0, 60.0, 10),
        seed=seed,
    )
    return scenario, config


# ---------------------------------------------------------------------------
# File-based bundle for the CLI (gen-synthetic)
# ---------------------------------------------------------------------------


def _quantize_met(wind: WindVector):
    """Nearest encodable (direction-from, speed) for an FB group."""
    speed = round(wind.speed_kt)
    speed = max(0, min(199, speed))
    if speed == 0:
        return 0, 0
    # blowing-toward azimuth + 180 = blowing-from
    az_to = math.degrees(math.atan2(wind.u_kt, wind.v_kt)) % 360.0
    direction = round(((az_to + 180.0) % 360.0) / 10.0) * 10 % 360
    return direction, speed


def scenario_to_files(scenario: SyntheticScenario, level_ft: int = 39000):
    """Render a scenario as (bulletin_text, stations_csv, aircraft_csv).

    FB quantization (10 degree direction, 1 kt speed) perturbs the station
    winds slightly; the consistent preset uses winds chosen to survive the
    round trip.
    """
    codes = [f"S{i:02d}" for i in range(len(scenario.stations))]
    entries = {}
    for code, st in zip(codes, scenario.stations):
        direction, speed = _quantize_met(st.wind)
        if speed == 0:
            entries[code] = {level_ft: DecodedWind(0, 0, calm=True)}
        else:
            entries[code] = {level_ft: DecodedWind(direction, speed)}
    bulletin = WindsAloftBulletin(
        valid_time=None, levels_ft=(level_ft,), entries=entries
    )
    bulletin_text = format_fb_bulletin(bulletin)

    station_lines = ["code,lat_deg,lon_deg"]
    for code, st in zip(codes, scenario.stations):
        station_lines.append(f"{code},{st.site.lat_deg:.6f},{st.site.lon_deg:.6f}")
    stations_csv = "\n".join(station_lines) + "\n"

    ac_lines = ["time_utc,aircraft_id,lat_deg,lon_deg,alt_ft,gs_kt,track_deg,tas_kt"]
    for i, rep in enumerate(scenario.aircraft):
        ac_lines.append(
            f"2026-01-01T00:00:00Z,AC{i:03d},{rep.site.lat_deg:.6f},"
            f"{rep.site.lon_deg:.6f},{rep.site.alt_ft:.0f},"
            f"{rep.ground_speed_kt:.3f},{rep.track_deg:.3f},{rep.airspeed_kt:.1f}"
        )
    aircraft_csv = "\n".join(ac_lines) + "\n"
    return bulletin_text, stations_csv, aircraft_csv
