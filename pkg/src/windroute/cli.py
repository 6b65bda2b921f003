"""Command-line surface: fuse, loo, simulate, gen-synthetic."""

from __future__ import annotations

import os
import sys
import tempfile

import click
import numpy as np

from . import geo, report, synthetic
from .config import load_config
from .errors import (
    ConfigError,
    ConvergenceError,
    IllConditionedError,
    ParseError,
    SaddlePointError,
    SimulationError,
    WindrouteError,
)
from .ingest import (
    fb_to_station_observations,
    parse_aircraft_csv,
    parse_fb_bulletin,
    parse_station_directory,
)
from .sim import flight_logs_geojson, geojson_text, run_experiment
from .windmodel import (
    LOO_METHODS,
    gp_regress,
    laplace_fuse,
    loo_ground_speed_rmse,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4
EXIT_SIMULATION = 5


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (ConvergenceError, IllConditionedError, SaddlePointError)):
        return EXIT_NUMERICAL
    if isinstance(exc, SimulationError):
        return EXIT_SIMULATION
    return 1


def _fail(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(_exit_code(exc))


def write_text_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def _parse_grid(spec: str):
    """'lat0:lat1:n,lon0:lon1:m' -> (lat values, lon values)."""
    try:
        lat_part, lon_part = spec.split(",")
        lat0, lat1, n = lat_part.split(":")
        lon0, lon1, m = lon_part.split(":")
        lats = np.linspace(float(lat0), float(lat1), int(n))
        lons = np.linspace(float(lon0), float(lon1), int(m))
    except ValueError:
        raise ConfigError(
            f"grid spec must look like 'lat0:lat1:n,lon0:lon1:m', got {spec!r}"
        ) from None
    return lats, lons


def _load_inputs(bulletin_path, stations_path, aircraft_path, level_ft):
    bulletin = parse_fb_bulletin(open(bulletin_path).read())
    directory = parse_station_directory(stations_path)
    stations = fb_to_station_observations(bulletin, directory, level_ft)
    aircraft = parse_aircraft_csv(aircraft_path).to_reports() if aircraft_path else []
    return stations, aircraft


def _grid_arrows_geojson(lats, lons, posterior, scale_deg_per_kt=0.01):
    features = []
    idx = 0
    for lat in lats:
        for lon in lons:
            m = posterior.mean[idx]
            su, sv = posterior.sd[idx]
            features.append(
                {
                    "type": "Feature",
                    "geometry": {
                        "type": "LineString",
                        "coordinates": [
                            [round(float(lon), 6), round(float(lat), 6)],
                            [
                                round(float(lon) + m.u_kt * scale_deg_per_kt, 6),
                                round(float(lat) + m.v_kt * scale_deg_per_kt, 6),
                            ],
                        ],
                    },
                    "properties": {
                        "mean_u_kt": round(m.u_kt, 3),
                        "mean_v_kt": round(m.v_kt, 3),
                        "sd_u_kt": round(su, 3),
                        "sd_v_kt": round(sv, 3),
                    },
                }
            )
            idx += 1
    return {"type": "FeatureCollection", "features": features}


@click.group()
def main():
    """Wind-field refinement and wind-aware flight routing toolkit."""


@main.command()
@click.option("--bulletin", required=True, type=click.Path(exists=True))
@click.option("--stations", "stations_path", required=True, type=click.Path(exists=True))
@click.option("--aircraft", "aircraft_path", type=click.Path(exists=True))
@click.option("--level", "level_ft", required=True, type=int)
@click.option("--grid", "grid_spec", required=True, help="lat0:lat1:n,lon0:lon1:m")
@click.option("--config", "config_path", type=click.Path())
@click.option("--out-dir", default=None)
@click.option("--figures/--no-figures", default=True)
def fuse(bulletin, stations_path, aircraft_path, level_ft, grid_spec, config_path,
         out_dir, figures):
    """Fuse stations (and optionally aircraft) into a gridded wind posterior."""
    try:
        cfg = load_config(config_path)
        out_dir = out_dir or cfg.out_dir
        lats, lons = _parse_grid(grid_spec)
        stations, aircraft = _load_inputs(
            bulletin, stations_path, aircraft_path, level_ft
        )
        queries = [
            geo.GeoPoint(float(lat), float(lon), float(level_ft))
            for lat in lats
            for lon in lons
        ]
        if aircraft:
            method = "laplace"
            posterior = laplace_fuse(stations, aircraft, queries, cfg.hyper)
        else:
            method = "gpr"
            posterior = gp_regress(stations, queries, cfg.hyper)
        lines = ["method,lat_deg,lon_deg,mean_u_kt,mean_v_kt,sd_u_kt,sd_v_kt"]
        idx = 0
        for lat in lats:
            for lon in lons:
                m = posterior.mean[idx]
                su, sv = posterior.sd[idx]
                lines.append(
                    f"{method},{float(lat):.4f},{float(lon):.4f},"
                    f"{m.u_kt:.6f},{m.v_kt:.6f},{su:.6f},{sv:.6f}"
                )
                idx += 1
        write_text_atomic(os.path.join(out_dir, "fused_grid.csv"), "\n".join(lines) + "\n")
        write_text_atomic(
            os.path.join(out_dir, "fused_grid.geojson"),
            geojson_text(_grid_arrows_geojson(lats, lons, posterior)),
        )
        if figures:
            grid_lat = [lat for lat in lats for _ in lons]
            grid_lon = [lon for _ in lats for lon in lons]
            report.save_wind_grid_figure(
                grid_lat,
                grid_lon,
                [m.u_kt for m in posterior.mean],
                [m.v_kt for m in posterior.mean],
                [s[0] for s in posterior.sd],
                os.path.join(out_dir, "fused_grid.png"),
                title=f"Fused wind field ({method}) at {level_ft} ft",
            )
        click.echo(f"wrote fused grid ({method}) to {out_dir}")
    except WindrouteError as exc:
        _fail(exc)


@main.command()
@click.option("--bulletin", required=True, type=click.Path(exists=True))
@click.option("--stations", "stations_path", required=True, type=click.Path(exists=True))
@click.option("--aircraft", "aircraft_path", required=True, type=click.Path(exists=True))
@click.option("--level", "level_ft", required=True, type=int)
@click.option("--config", "config_path", type=click.Path())
@click.option("--method", type=click.Choice(list(LOO_METHODS) + ["all"]), default="all")
@click.option("--out-dir", default=None)
@click.option("--figures/--no-figures", default=True)
def loo(bulletin, stations_path, aircraft_path, level_ft, config_path, method,
        out_dir, figures):
    """Leave-one-aircraft-out ground-speed RMSE per prediction method."""
    try:
        cfg = load_config(config_path)
        out_dir = out_dir or cfg.out_dir
        stations, aircraft = _load_inputs(
            bulletin, stations_path, aircraft_path, level_ft
        )
        if len(aircraft) < 2:
            raise ConfigError("leave-one-out needs at least 2 aircraft rows")
        methods = list(LOO_METHODS) if method == "all" else [method]
        lines = ["method,rmse_kt,n_reports,n_infeasible"]
        rmses = {}
        for m in methods:
            res = loo_ground_speed_rmse(aircraft, stations, m, cfg.hyper)
            rmses[m] = res.rmse_kt
            lines.append(
                f"{m},{res.rmse_kt:.6f},{len(res.observed_gs_kt)},{res.infeasible_count}"
            )
        write_text_atomic(os.path.join(out_dir, "loo_rmse.csv"), "\n".join(lines) + "\n")
        if figures:
            report.save_loo_figure(rmses, os.path.join(out_dir, "loo_rmse.png"))
        for m in methods:
            click.echo(f"{m}: rmse {rmses[m]:.2f} kt")
    except WindrouteError as exc:
        _fail(exc)


def _truth_scenario(cfg):
    from .windmodel import WindVector

    t = cfg.truth
    if t.kind == "gp":
        return synthetic.gp_route_scenario(
            cfg.hyper, t.n_stations, t.station_noise_sd_kt, cfg.alt_ft
        )
    if t.kind == "headwind":
        return synthetic.headwind_route_scenario(
            t.peak_kt, t.halfwidth_nm, t.station_noise_sd_kt, cfg.alt_ft
        )
    if t.kind == "crosswind":
        return synthetic.crosswind_band_scenario(
            t.peak_kt, t.halfwidth_nm, t.station_noise_sd_kt, cfg.alt_ft
        )
    if t.kind == "uniform":
        return synthetic.uniform_route_scenario(
            WindVector(t.wind_u_kt, t.wind_v_kt), t.n_stations, cfg.alt_ft
        )
    return synthetic.calm_route_scenario(t.n_stations, cfg.alt_ft)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out-dir", default=None)
@click.option("--figures/--no-figures", default=True)
def simulate(config_path, out_dir, figures):
    """Run the routing experiment described by the config file."""
    try:
        cfg = load_config(config_path)
        out_dir = out_dir or cfg.out_dir
        if not cfg.routes:
            raise ConfigError("config has no [routes] section")
        scenario = _truth_scenario(cfg)
        exp = run_experiment(
            cfg.routes,
            scenario,
            cfg.policies,
            cfg.repetitions,
            cfg.sim_config(),
            base_seed=cfg.base_seed,
        )
        write_text_atomic(os.path.join(out_dir, "report.csv"), exp.to_csv_text())
        for (route, policy, rep), log in exp.logs.items():
            stem = f"flight_{route}_{policy}_{rep}"
            write_text_atomic(
                os.path.join(out_dir, stem + ".waypoints.txt"),
                log.to_waypoint_records(),
            )
            write_text_atomic(
                os.path.join(out_dir, stem + ".geojson"),
                geojson_text(flight_logs_geojson([log])),
            )
        if figures:
            for route in cfg.routes:
                by_policy = {
                    policy: [
                        log
                        for (rt, pol, _), log in exp.logs.items()
                        if rt == route and pol == policy
                    ]
                    for policy in cfg.policies
                }
                report.save_tracks_figure(
                    by_policy,
                    os.path.join(out_dir, f"tracks_{route}.png"),
                    title=f"Flight tracks: {route}",
                )
        total_failures = sum(s.failures for s in exp.stats.values())
        for (route, policy), s in sorted(exp.stats.items()):
            click.echo(
                f"{route} {policy}: mean {s.mean_s:.1f} s, sd {s.sd_s:.1f} s "
                f"(n={s.n}, failures={s.failures})"
            )
        if total_failures:
            raise SimulationError(f"{total_failures} repetition(s) failed")
        click.echo(f"wrote report to {out_dir}")
    except WindrouteError as exc:
        _fail(exc)


@main.command("gen-synthetic")
@click.option("--seed", default=0, type=int)
@click.option("--preset", type=click.Choice(["benchmark", "consistent"]),
              default="benchmark")
@click.option("--level", "level_ft", default=39000, type=int)
@click.option("--n-stations", default=10, type=int)
@click.option("--n-aircraft", default=30, type=int)
@click.option("--config", "config_path", type=click.Path())
@click.option("--out-dir", default=None)
def gen_synthetic(seed, preset, level_ft, n_stations, n_aircraft, config_path, out_dir):
    """Emit seeded synthetic bulletin / station / aircraft files."""
    try:
        cfg = load_config(config_path)
        out_dir = out_dir or cfg.out_dir
        if preset == "benchmark":
            scenario = synthetic.make_benchmark_scenario(
                seed, cfg.hyper, n_stations=n_stations, n_aircraft=n_aircraft,
                alt_ft=float(level_ft),
            )
        else:
            scenario = synthetic.make_consistent_scenario(
                seed, n_stations=n_stations, n_aircraft=n_aircraft,
                alt_ft=float(level_ft),
            )
        bulletin_text, stations_csv, aircraft_csv = synthetic.scenario_to_files(
            scenario, level_ft=level_ft
        )
        write_text_atomic(os.path.join(out_dir, "bulletin.txt"), bulletin_text)
        write_text_atomic(os.path.join(out_dir, "stations.csv"), stations_csv)
        write_text_atomic(os.path.join(out_dir, "aircraft.csv"), aircraft_csv)
        click.echo(
            f"wrote {preset} bundle (seed {seed}, {n_stations} stations, "
            f"{n_aircraft} aircraft) to {out_dir}"
        )
    except WindrouteError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
