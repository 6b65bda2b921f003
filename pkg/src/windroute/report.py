"""Matplotlib figure rendering for the CLI report outputs.

Figures are written next to the delimited outputs; all rendering uses the Agg
backend so it works headless.
"""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_POLICY_COLORS = {"ucb": "tab:blue", "mean": "tab:orange", "gcr": "black"}


def _save_atomic(fig, path):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".png")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=150, bbox_inches="tight")
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.remove(tmp)


def save_wind_grid_figure(lats, lons, mean_u, mean_v, sd, path, title="Fused wind field"):
    """Quiver of posterior mean winds over a lat/lon grid, colored by sd."""
    fig, ax = plt.subplots(figsize=(8, 6))
    q = ax.quiver(lons, lats, mean_u, mean_v, sd, cmap="viridis", angles="xy")
    fig.colorbar(q, ax=ax, label="posterior sd (kt)")
    ax.set_xlabel("longitude (deg)")
    ax.set_ylabel("latitude (deg)")
    ax.set_title(title)
    _save_atomic(fig, path)


def save_tracks_figure(logs_by_policy, path, title="Flight tracks"):
    """Ground tracks for each policy on one lat/lon axis."""
    fig, ax = plt.subplots(figsize=(8, 6))
    for policy, logs in logs_by_policy.items():
        color = _POLICY_COLORS.get(policy, "tab:green")
        for i, log in enumerate(logs):
            lats = [p.lat_deg for p, _ in log.waypoints]
            lons = [p.lon_deg for p, _ in log.waypoints]
            ax.plot(
                lons,
                lats,
                color=color,
                alpha=0.7,
                label=policy if i == 0 else None,
            )
    ax.set_xlabel("longitude (deg)")
    ax.set_ylabel("latitude (deg)")
    ax.set_title(title)
    ax.legend()
    _save_atomic(fig, path)


def save_loo_figure(rmse_by_method, path, title="Ground-speed prediction RMSE"):
    fig, ax = plt.subplots(figsize=(6, 4))
    methods = list(rmse_by_method)
    values = [rmse_by_method[m] for m in methods]
    ax.bar(methods, values, color="tab:blue")
    ax.set_ylabel("RMSE (kt)")
    ax.set_title(title)
    _save_atomic(fig, path)
