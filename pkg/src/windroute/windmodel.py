"""Probabilistic wind model.

A GP prior over the latent wind field is fused with two kinds of evidence:
direct (noisy) wind observations at station sites, and aircraft ground-velocity
reports that constrain the wind only through the wind triangle. The fused
posterior is a Laplace approximation around the MAP of the joint energy; with
no aircraft the machinery reduces exactly to plain GP regression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from . import geo
from .errors import (
    ConvergenceError,
    IllConditionedError,
    InfeasibleTrackError,
    SaddlePointError,
)

_D2R = math.pi / 180.0


@dataclass(frozen=True)
class WindVector:
    """2-D horizontal wind, knots, blowing-toward convention."""

    u_kt: float  # eastward
    v_kt: float  # northward

    def __post_init__(self):
        for c in (self.u_kt, self.v_kt):
            if not math.isfinite(c) or abs(c) >= 500.0:
                raise ValueError(f"wind component {c} not finite or |.| >= 500 kt")

    @property
    def speed_kt(self) -> float:
        return math.hypot(self.u_kt, self.v_kt)


CALM = WindVector(0.0, 0.0)


@dataclass(frozen=True)
class StationObservation:
    site: geo.GeoPoint
    wind: WindVector


@dataclass(frozen=True)
class AircraftReport:
    """Ground velocity and reported true airspeed at one position."""

    site: geo.GeoPoint
    ground_velocity: WindVector  # (v_east, v_north), knots
    airspeed_kt: float

    def __post_init__(self):
        if not 0.0 < self.airspeed_kt < 700.0:
            raise ValueError(f"airspeed {self.airspeed_kt} kt outside (0, 700)")
        gs = self.ground_velocity.speed_kt
        if not 0.0 < gs < 900.0:
            raise ValueError(f"ground speed {gs:.1f} kt outside (0, 900)")

    @property
    def ground_speed_kt(self) -> float:
        return self.ground_velocity.speed_kt

    @property
    def track_deg(self) -> float:
        """Direction of motion over the ground, degrees from true north."""
        v = self.ground_velocity
        return math.degrees(math.atan2(v.u_kt, v.v_kt)) % 360.0


@dataclass(frozen=True)
class ModelHyperparams:
    lengthscale_h_nm: float = 250.0
    lengthscale_v_ft: float = 4000.0
    signal_sd_kt: float = 30.0
    station_noise_sd_kt: float = 5.0
    aircraft_beta: float = 0.02  # kt^-2
    jitter: float = 1e-2  # kt^2; keeps the Gram condition number ~1e6 at desk scale

    def __post_init__(self):
        for name in (
            "lengthscale_h_nm",
            "lengthscale_v_ft",
            "signal_sd_kt",
            "station_noise_sd_kt",
            "aircraft_beta",
            "jitter",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.jitter > 1e-4 * self.signal_sd_kt**2:
            raise ValueError("jitter exceeds 1e-4 * signal variance")


@dataclass(frozen=True)
class WindPosterior:
    """Per-site posterior mean and per-component standard deviation."""

    sites: tuple[geo.GeoPoint, ...]
    mean: tuple[WindVector, ...]
    sd: tuple[tuple[float, float], ...]  # (sd_u, sd_v), knots

    def __post_init__(self):
        if not (len(self.sites) == len(self.mean) == len(self.sd)):
            raise ValueError("inconsistent lengths in WindPosterior")
        for su, sv in self.sd:
            if su < 0.0 or sv < 0.0:
                raise ValueError("negative posterior sd")


@dataclass(frozen=True)
class LaplaceOptions:
    tol: float = 1e-6
    max_iter: int = 100
    backtrack: float = 0.5
    armijo: float = 1e-4
    fallback_gd_steps: int = 500
    multi_start: bool = True
    covariance: str = "full"  # "full" | "diagonal"
    include_observation_noise: bool = False


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------

def kernel_eval(a: geo.GeoPoint, b: geo.GeoPoint, h: ModelHyperparams) -> float:
    """Anisotropic squared-exponential covariance between two sites, kt^2."""
    dh = geo.great_circle_distance_nm(a, b) / h.lengthscale_h_nm
    dv = (a.alt_ft - b.alt_ft) / h.lengthscale_v_ft
    return h.signal_sd_kt**2 * math.exp(-0.5 * (dh * dh + dv * dv))


def kernel_matrix(sites_a, sites_b, h: ModelHyperparams) -> np.ndarray:
    lat_a = [p.lat_deg for p in sites_a]
    lon_a = [p.lon_deg for p in sites_a]
    alt_a = np.array([p.alt_ft for p in sites_a], float)
    lat_b = [p.lat_deg for p in sites_b]
    lon_b = [p.lon_deg for p in sites_b]
    alt_b = np.array([p.alt_ft for p in sites_b], float)
    dh = geo.pairwise_distance_nm(lat_a, lon_a, lat_b, lon_b) / h.lengthscale_h_nm
    dv = (alt_a[:, None] - alt_b[None, :]) / h.lengthscale_v_ft
    return h.signal_sd_kt**2 * np.exp(-0.5 * (dh**2 + dv**2))


# ---------------------------------------------------------------------------
# GP regression (station-only baseline)
# ---------------------------------------------------------------------------

def _dedup_stations(stations) -> list[StationObservation]:
    """Merge exact-duplicate sites by averaging their observed winds."""
    merged: dict[tuple, list[StationObservation]] = {}
    order = []
    for s in stations:
        key = (s.site.lat_deg, s.site.lon_deg, s.site.alt_ft)
        if key not in merged:
            merged[key] = []
            order.append(key)
        merged[key].append(s)
    out = []
    for key in order:
        group = merged[key]
        if len(group) == 1:
            out.append(group[0])
        else:
            u = sum(g.wind.u_kt for g in group) / len(group)
            v = sum(g.wind.v_kt for g in group) / len(group)
            out.append(StationObservation(group[0].site, WindVector(u, v)))
    return out


def _chol_or_raise(mat: np.ndarray, sites) -> tuple:
    try:
        return cho_factor(mat, lower=True)
    except LinAlgError:
        # name the closest pair; it is the usual culprit
        best = (0, 1, math.inf)
        for i in range(len(sites)):
            for j in range(i + 1, len(sites)):
                d = geo.great_circle_distance_nm(sites[i], sites[j])
                if d < best[2]:
                    best = (i, j, d)
        i, j, d = best
        raise IllConditionedError(
            f"Gram matrix not positive definite after jitter; closest site pair "
            f"is #{i} ({sites[i].lat_deg:.4f},{sites[i].lon_deg:.4f}) and "
            f"#{j} ({sites[j].lat_deg:.4f},{sites[j].lon_deg:.4f}), {d:.4f} nm apart"
        )


def gp_regress(
    stations,
    queries,
    h: ModelHyperparams,
    prior_mean=None,
    include_observation_noise: bool = False,
) -> WindPosterior:
    """Closed-form GP posterior from station observations alone.

    The u and v components share the kernel and are regressed independently.
    prior_mean, if given, is a callable GeoPoint -> WindVector used as the GP
    mean function (zero otherwise).
    """
    stations = _dedup_stations(stations)
    if not stations:
        raise ValueError("gp_regress requires at least one station")
    sites = [s.site for s in stations]
    noise_var = h.station_noise_sd_kt**2
    kss = kernel_matrix(sites, sites, h)
    kss[np.diag_indices_from(kss)] += noise_var + h.jitter
    cho = _chol_or_raise(kss, sites)

    def residual(s):
        if prior_mean is None:
            return s.wind.u_kt, s.wind.v_kt
        m = prior_mean(s.site)
        return s.wind.u_kt - m.u_kt, s.wind.v_kt - m.v_kt

    tu = np.array([residual(s)[0] for s in stations])
    tv = np.array([residual(s)[1] for s in stations])
    alpha_u = cho_solve(cho, tu)
    alpha_v = cho_solve(cho, tv)

    kqs = kernel_matrix(queries, sites, h)
    mean_u = kqs @ alpha_u
    mean_v = kqs @ alpha_v
    if prior_mean is not None:
        for i, q in enumerate(queries):
            m = prior_mean(q)
            mean_u[i] += m.u_kt
            mean_v[i] += m.v_kt
    var = h.signal_sd_kt**2 - np.sum(kqs * cho_solve(cho, kqs.T).T, axis=1)
    if include_observation_noise:
        var = var + noise_var
    sd = np.sqrt(np.maximum(var, 0.0))
    return WindPosterior(
        sites=tuple(queries),
        mean=tuple(WindVector(float(u), float(v)) for u, v in zip(mean_u, mean_v)),
        sd=tuple((float(s), float(s)) for s in sd),
    )


# ---------------------------------------------------------------------------
# Joint energy (negative log posterior) for the fusion model
# ---------------------------------------------------------------------------

class _FusionProblem:
    """Dense assembly of the joint energy over [W_u, W_v, T_A].

    Sites are the union of station and aircraft locations (exact duplicates
    merged); the latent vector stacks the wind field at every site per
    component, then the per-aircraft airmass-observation pair (t_u, t_v).
    """

    def __init__(self, stations, aircraft, h: ModelHyperparams):
        stations = _dedup_stations(stations)
        if not stations:
            raise ValueError("fusion requires at least one station to anchor the prior")
        keys: dict[tuple, int] = {}
        self.sites: list[geo.GeoPoint] = []

        def site_index(p: geo.GeoPoint) -> int:
            key = (p.lat_deg, p.lon_deg, p.alt_ft)
            if key not in keys:
                keys[key] = len(self.sites)
                self.sites.append(p)
            return keys[key]

        self.station_terms = [
            (site_index(s.site), s.wind.u_kt, s.wind.v_kt) for s in stations
        ]
        self.aircraft_terms = [
            (
                site_index(a.site),
                a.ground_velocity.u_kt,
                a.ground_velocity.v_kt,
                a.airspeed_kt,
            )
            for a in aircraft
        ]
        self.h = h
        self.n = len(self.sites)
        self.na = len(self.aircraft_terms)
        self.dim = 2 * self.n + 2 * self.na

        ktilde = kernel_matrix(self.sites, self.sites, h)
        ktilde[np.diag_indices_from(ktilde)] += h.jitter
        self.cho_k = _chol_or_raise(ktilde, self.sites)
        self.prec = cho_solve(self.cho_k, np.eye(self.n))
        self.prec = 0.5 * (self.prec + self.prec.T)

    def split(self, x):
        n, na = self.n, self.na
        return x[:n], x[n : 2 * n], x[2 * n :].reshape(na, 2)

    def energy(self, x) -> float:
        h = self.h
        wu, wv, t = self.split(x)
        e = 0.5 * (wu @ self.prec @ wu + wv @ self.prec @ wv)
        inv2s2 = 1.0 / (2.0 * h.station_noise_sd_kt**2)
        for i, tu, tv in self.station_terms:
            e += ((tu - wu[i]) ** 2 + (tv - wv[i]) ** 2) * inv2s2
        for j, (i, vx, vy, a) in enumerate(self.aircraft_terms):
            e += ((t[j, 0] - wu[i]) ** 2 + (t[j, 1] - wv[i]) ** 2) * inv2s2
            r = math.hypot(vx - t[j, 0], vy - t[j, 1])
            e += h.aircraft_beta * (r - a) ** 2
        return float(e)

    def gradient(self, x) -> np.ndarray:
        h = self.h
        wu, wv, t = self.split(x)
        gu = self.prec @ wu
        gv = self.prec @ wv
        gt = np.zeros_like(t)
        inv_s2 = 1.0 / h.station_noise_sd_kt**2
        for i, tu, tv in self.station_terms:
            gu[i] += (wu[i] - tu) * inv_s2
            gv[i] += (wv[i] - tv) * inv_s2
        for j, (i, vx, vy, a) in enumerate(self.aircraft_terms):
            gu[i] += (wu[i] - t[j, 0]) * inv_s2
            gv[i] += (wv[i] - t[j, 1]) * inv_s2
            gt[j, 0] += (t[j, 0] - wu[i]) * inv_s2
            gt[j, 1] += (t[j, 1] - wv[i]) * inv_s2
            ex, ey = vx - t[j, 0], vy - t[j, 1]
            r = math.hypot(ex, ey)
            if r > 1e-12:
                c = -2.0 * h.aircraft_beta * (r - a) / r
                gt[j, 0] += c * ex
                gt[j, 1] += c * ey
        return np.concatenate([gu, gv, gt.ravel()])

    def hessian(self, x) -> np.ndarray:
        h = self.h
        _, _, t = self.split(x)
        n, na = self.n, self.na
        big = np.zeros((self.dim, self.dim))
        big[:n, :n] = self.prec
        big[n : 2 * n, n : 2 * n] = self.prec
        inv_s2 = 1.0 / h.station_noise_sd_kt**2
        for i, _, _ in self.station_terms:
            big[i, i] += inv_s2
            big[n + i, n + i] += inv_s2
        for j, (i, vx, vy, a) in enumerate(self.aircraft_terms):
            ju = 2 * n + 2 * j
            jv = ju + 1
            big[i, i] += inv_s2
            big[n + i, n + i] += inv_s2
            big[ju, ju] += inv_s2
            big[jv, jv] += inv_s2
            big[i, ju] -= inv_s2
            big[ju, i] -= inv_s2
            big[n + i, jv] -= inv_s2
            big[jv, n + i] -= inv_s2
            ex, ey = vx - t[j, 0], vy - t[j, 1]
            r = math.hypot(ex, ey)
            if r > 1e-12:
                ux, uy = ex / r, ey / r
                radial = 2.0 * h.aircraft_beta
                tang = 2.0 * h.aircraft_beta * (r - a) / r
                # radial * uu^T + tang * (I - uu^T)
                big[ju, ju] += radial * ux * ux + tang * (1.0 - ux * ux)
                big[jv, jv] += radial * uy * uy + tang * (1.0 - uy * uy)
                cross = (radial - tang) * ux * uy
                big[ju, jv] += cross
                big[jv, ju] += cross
        return big


def neg_log_posterior(latent, stations, aircraft, h: ModelHyperparams) -> float:
    """Joint energy of the fusion model at a stacked latent vector.

    Layout: [W_u at all sites, W_v at all sites, (t_u, t_v) per aircraft],
    sites being stations then aircraft positions (exact duplicates merged).
    """
    prob = _FusionProblem(stations, aircraft, h)
    x = np.asarray(latent, float)
    if x.shape != (prob.dim,):
        raise ValueError(f"latent vector must have length {prob.dim}, got {x.shape}")
    return prob.energy(x)


def neg_log_posterior_grad(latent, stations, aircraft, h: ModelHyperparams) -> np.ndarray:
    """Analytic gradient of neg_log_posterior, same latent layout."""
    prob = _FusionProblem(stations, aircraft, h)
    x = np.asarray(latent, float)
    if x.shape != (prob.dim,):
        raise ValueError(f"latent vector must have length {prob.dim}, got {x.shape}")
    return prob.gradient(x)


# ---------------------------------------------------------------------------
# Newton solve and Laplace posterior
# ---------------------------------------------------------------------------

def _polish(prob: _FusionProblem, x: np.ndarray) -> np.ndarray:
    """One damped full Newton step; near the mode this is a pure refinement."""
    g = prob.gradient(x)
    hess = prob.hessian(x)
    try:
        cho = cho_factor(hess, lower=True)
    except LinAlgError:
        return x
    cand = x - cho_solve(cho, g)
    if np.linalg.norm(prob.gradient(cand)) < np.linalg.norm(g):
        return cand
    return x


def _newton(prob: _FusionProblem, x0: np.ndarray, opts: LaplaceOptions):
    x = x0.copy()
    for _ in range(opts.max_iter):
        g = prob.gradient(x)
        if np.linalg.norm(g) < opts.tol:
            return _polish(prob, x), True
        hess = prob.hessian(x)
        tau = 0.0
        scale = max(1e-8, 1e-10 * float(np.trace(hess)) / hess.shape[0])
        while True:
            try:
                cho = cho_factor(hess + tau * np.eye(prob.dim), lower=True)
                break
            except LinAlgError:
                tau = scale if tau == 0.0 else tau * 10.0
                if tau > 1e12:
                    return x, False
        p = -cho_solve(cho, g)
        slope = float(g @ p)
        if slope >= 0.0:  # damped direction failed to descend; bail to fallback
            return x, False
        e0 = prob.energy(x)
        alpha = 1.0
        while prob.energy(x + alpha * p) > e0 + opts.armijo * alpha * slope:
            alpha *= opts.backtrack
            if alpha < 1e-14:
                return x, False
        x = x + alpha * p
    if np.linalg.norm(prob.gradient(x)) < opts.tol:
        return _polish(prob, x), True
    return x, False


def _gradient_descent(prob: _FusionProblem, x0: np.ndarray, opts: LaplaceOptions):
    x = x0.copy()
    step = 1.0
    for _ in range(opts.fallback_gd_steps):
        g = prob.gradient(x)
        if np.linalg.norm(g) < opts.tol:
            return _polish(prob, x), True
        e0 = prob.energy(x)
        while prob.energy(x - step * g) > e0 - opts.armijo * step * float(g @ g):
            step *= 0.5
            if step < 1e-16:
                return x, False
        x = x - step * g
        step = min(step * 2.0, 1e3)
    if np.linalg.norm(prob.gradient(x)) < opts.tol:
        return _polish(prob, x), True
    return x, False


def _initial_points(prob: _FusionProblem, stations, aircraft, h, opts):
    base = gp_regress(stations, prob.sites, h)
    wu = np.array([m.u_kt for m in base.mean])
    wv = np.array([m.v_kt for m in base.mean])
    t0 = np.array(
        [[wu[i], wv[i]] for (i, _, _, _) in prob.aircraft_terms]
    ).reshape(prob.na, 2)
    starts = [np.concatenate([wu, wv, t0.ravel()])]
    if opts.multi_start and prob.na > 0:
        # second start: wind implied by assuming the air vector is track-aligned
        t1 = np.empty((prob.na, 2))
        for j, (_, vx, vy, a) in enumerate(prob.aircraft_terms):
            gs = math.hypot(vx, vy)
            t1[j, 0] = vx - a * vx / gs
            t1[j, 1] = vy - a * vy / gs
        starts.append(np.concatenate([wu, wv, t1.ravel()]))
    return starts


def laplace_fuse(
    stations,
    aircraft,
    queries,
    h: ModelHyperparams,
    opts: LaplaceOptions | None = None,
    prior_mean=None,
) -> WindPosterior:
    """MAP + Laplace posterior over the wind field, fusing both evidence kinds.

    Newton with backtracking finds a mode of the joint energy; the Gaussian
    approximation around it is propagated to the query sites through the GP
    conditional. With an empty aircraft list this reproduces gp_regress
    exactly (the energy is then quadratic).
    """
    opts = opts or LaplaceOptions()
    if prior_mean is not None:
        # work on residuals; add the mean field back at the end
        stations = [
            StationObservation(
                s.site,
                WindVector(
                    s.wind.u_kt - prior_mean(s.site).u_kt,
                    s.wind.v_kt - prior_mean(s.site).v_kt,
                ),
            )
            for s in stations
        ]
        aircraft = [
            AircraftReport(
                a.site,
                WindVector(
                    a.ground_velocity.u_kt - prior_mean(a.site).u_kt,
                    a.ground_velocity.v_kt - prior_mean(a.site).v_kt,
                ),
                a.airspeed_kt,
            )
            for a in aircraft
        ]
    prob = _FusionProblem(stations, aircraft, h)

    best = None
    for x0 in _initial_points(prob, stations, aircraft, h, opts):
        x, ok = _newton(prob, x0, opts)
        if not ok:
            x, ok = _gradient_descent(prob, x, opts)
        if not ok:
            continue
        e = prob.energy(x)
        if best is None or e < best[1]:
            best = (x, e)
    if best is None:
        gn = float(np.linalg.norm(prob.gradient(x)))
        raise ConvergenceError(
            f"Laplace mode search did not converge (final |grad| = {gn:.3e})",
            grad_norm=gn,
        )
    mode = best[0]

    hess = prob.hessian(mode)
    cho_h = None
    for tau in (0.0, h.jitter):
        try:
            cho_h = cho_factor(hess + tau * np.eye(prob.dim), lower=True)
            break
        except LinAlgError:
            continue
    if cho_h is None:
        raise SaddlePointError(
            "Hessian at the returned mode is not positive definite even after "
            "jitter; the mode is likely a saddle, try a different initialization"
        )
    cov = cho_solve(cho_h, np.eye(prob.dim))

    n = prob.n
    wu, wv, _ = prob.split(mode)
    cov_uu = cov[:n, :n]
    cov_vv = cov[n : 2 * n, n : 2 * n]
    if opts.covariance == "diagonal":
        cov_uu = np.diag(np.diag(cov_uu))
        cov_vv = np.diag(np.diag(cov_vv))

    kqs = kernel_matrix(queries, prob.sites, h)
    proj = cho_solve(prob.cho_k, kqs.T).T  # K_qs @ Ktilde^-1
    mean_u = proj @ wu
    mean_v = proj @ wv
    base_var = h.signal_sd_kt**2 - np.sum(proj * kqs, axis=1)
    var_u = base_var + np.sum((proj @ cov_uu) * proj, axis=1)
    var_v = base_var + np.sum((proj @ cov_vv) * proj, axis=1)
    if opts.include_observation_noise:
        noise = h.station_noise_sd_kt**2
        var_u = var_u + noise
        var_v = var_v + noise
    if prior_mean is not None:
        for i, q in enumerate(queries):
            m = prior_mean(q)
            mean_u[i] += m.u_kt
            mean_v[i] += m.v_kt
    return WindPosterior(
        sites=tuple(queries),
        mean=tuple(WindVector(float(u), float(v)) for u, v in zip(mean_u, mean_v)),
        sd=tuple(
            (float(math.sqrt(max(a, 0.0))), float(math.sqrt(max(b, 0.0))))
            for a, b in zip(var_u, var_v)
        ),
    )


# ---------------------------------------------------------------------------
# Wind triangle
# ---------------------------------------------------------------------------

def predict_ground_speed(wind: WindVector, track_deg: float, airspeed_kt: float) -> float:
    """Ground speed achieved holding a fixed track at fixed true airspeed.

    Decomposes the wind along/across the track; the aircraft crabs to cancel
    the crosswind, leaving GS = w_par + sqrt(a^2 - w_perp^2).
    """
    if airspeed_kt <= 0.0:
        raise ValueError("airspeed must be > 0")
    th = track_deg * _D2R
    tx, ty = math.sin(th), math.cos(th)
    w_par = wind.u_kt * tx + wind.v_kt * ty
    w_perp = wind.u_kt * ty - wind.v_kt * tx
    if abs(w_perp) >= airspeed_kt:
        raise InfeasibleTrackError(
            f"crosswind {abs(w_perp):.1f} kt >= airspeed {airspeed_kt:.1f} kt; "
            f"track {track_deg:.1f} cannot be held"
        )
    return w_par + math.sqrt(airspeed_kt**2 - w_perp**2)


def _ground_speed_clamped(wind: WindVector, track_deg: float, airspeed_kt: float):
    """(ground_speed, was_clamped): infeasible crosswind clamps the radical to 0."""
    th = track_deg * _D2R
    tx, ty = math.sin(th), math.cos(th)
    w_par = wind.u_kt * tx + wind.v_kt * ty
    w_perp = wind.u_kt * ty - wind.v_kt * tx
    if abs(w_perp) >= airspeed_kt:
        return w_par, True
    return w_par + math.sqrt(airspeed_kt**2 - w_perp**2), False


# ---------------------------------------------------------------------------
# Leave-one-aircraft-out benchmark
# ---------------------------------------------------------------------------

LOO_METHODS = ("nearest-neighbor", "gpr", "laplace")


@dataclass(frozen=True)
class LooResult:
    method: str
    rmse_kt: float
    predicted_gs_kt: tuple[float, ...]
    observed_gs_kt: tuple[float, ...]
    infeasible: tuple[bool, ...]  # clamped predictions, flagged not fatal

    @property
    def infeasible_count(self) -> int:
        return sum(self.infeasible)


def _nearest_station_wind(site, stations) -> WindVector:
    best = min(stations, key=lambda s: geo.great_circle_distance_nm(site, s.site))
    return best.wind


def loo_ground_speed_rmse(
    reports,
    stations,
    method: str,
    h: ModelHyperparams,
    opts: LaplaceOptions | None = None,
) -> LooResult:
    """Leave-one-aircraft-out ground-speed RMSE for one prediction method.

    Each aircraft in turn is held out; its wind is predicted from the stations
    (plus, for the laplace method, the remaining aircraft), then converted to a
    ground speed along the held-out aircraft's own track and airspeed.
    """
    if method not in LOO_METHODS:
        raise ValueError(f"method must be one of {LOO_METHODS}")
    reports = list(reports)
    if len(reports) < 2:
        raise ValueError("need at least 2 aircraft reports for leave-one-out")
    stations = list(stations)
    preds, obs, clamped = [], [], []
    for j, rep in enumerate(reports):
        if method == "nearest-neighbor":
            wind = _nearest_station_wind(rep.site, stations)
        elif method == "gpr":
            wind = gp_regress(stations, [rep.site], h).mean[0]
        else:
            rest = reports[:j] + reports[j + 1 :]
            wind = laplace_fuse(stations, rest, [rep.site], h, opts).mean[0]
        gs, was_clamped = _ground_speed_clamped(wind, rep.track_deg, rep.airspeed_kt)
        preds.append(gs)
        obs.append(rep.ground_speed_kt)
        clamped.append(was_clamped)
    err = np.array(preds) - np.array(obs)
    return LooResult(
        method=method,
        rmse_kt=float(np.sqrt(np.mean(err**2))),
        predicted_gs_kt=tuple(preds),
        observed_gs_kt=tuple(obs),
        infeasible=tuple(clamped),
    )
