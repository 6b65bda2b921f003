"""Spherical-earth geodesy at nautical-mile scale.

All functions assume a sphere of radius 3440.065 nm. Altitude rides along on
GeoPoint but never affects horizontal geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError

EARTH_RADIUS_NM = 3440.065

_D2R = math.pi / 180.0
_R2D = 180.0 / math.pi


@dataclass(frozen=True)
class GeoPoint:
    """Latitude/longitude in degrees plus altitude in feet MSL.

    Longitude is normalized into [-180, 180) on construction; latitude must
    already be in [-90, 90].
    """

    lat_deg: float
    lon_deg: float
    alt_ft: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.lat_deg) and math.isfinite(self.lon_deg)):
            raise ValueError(f"non-finite coordinates ({self.lat_deg}, {self.lon_deg})")
        if not -90.0 <= self.lat_deg <= 90.0:
            raise ValueError(f"latitude {self.lat_deg} outside [-90, 90]")
        lon = ((self.lon_deg + 180.0) % 360.0) - 180.0
        object.__setattr__(self, "lon_deg", lon)
        if not (math.isfinite(self.alt_ft) and self.alt_ft >= 0.0):
            raise ValueError(f"altitude {self.alt_ft} must be finite and >= 0 ft")

    def same_position(self, other: "GeoPoint") -> bool:
        """True when lat/lon coincide exactly (altitude ignored)."""
        return self.lat_deg == other.lat_deg and self.lon_deg == other.lon_deg


def great_circle_distance_nm(a: GeoPoint, b: GeoPoint) -> float:
    """Haversine distance in nautical miles, ignoring altitude."""
    lat1, lon1 = a.lat_deg * _D2R, a.lon_deg * _D2R
    lat2, lon2 = b.lat_deg * _D2R, b.lon_deg * _D2R
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    s = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_NM * math.asin(min(1.0, math.sqrt(s)))


def initial_bearing_deg(a: GeoPoint, b: GeoPoint) -> float:
    """Initial great-circle course from a to b, degrees clockwise from true north."""
    if a.same_position(b):
        raise DegenerateInputError("bearing undefined between coincident points")
    lat1, lat2 = a.lat_deg * _D2R, b.lat_deg * _D2R
    dlon = (b.lon_deg - a.lon_deg) * _D2R
    y = math.sin(dlon) * math.cos(lat2)
    x = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(dlon)
    bearing = (math.atan2(y, x) * _R2D) % 360.0
    # a tiny negative angle mod 360 can round up to exactly 360.0
    return 0.0 if bearing == 360.0 else bearing


def project_nm(a: GeoPoint, bearing_deg: float, distance_nm: float) -> GeoPoint:
    """Destination point after travelling distance_nm along the great circle."""
    if distance_nm < 0.0:
        raise ValueError("distance_nm must be >= 0")
    if distance_nm == 0.0:
        return a
    delta = distance_nm / EARTH_RADIUS_NM
    theta = bearing_deg * _D2R
    lat1 = a.lat_deg * _D2R
    lon1 = a.lon_deg * _D2R
    sin_lat2 = math.sin(lat1) * math.cos(delta) + math.cos(lat1) * math.sin(delta) * math.cos(theta)
    sin_lat2 = max(-1.0, min(1.0, sin_lat2))
    lat2 = math.asin(sin_lat2)
    lon2 = lon1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(lat1),
        math.cos(delta) - math.sin(lat1) * sin_lat2,
    )
    return GeoPoint(lat2 * _R2D, lon2 * _R2D, a.alt_ft)


def local_enu_nm(ref: GeoPoint, p: GeoPoint) -> tuple[float, float]:
    """Flat-earth (east_nm, north_nm) offset of p relative to ref.

    Equirectangular tangent-plane approximation; distortion grows like
    (extent/R)^2, i.e. under ~3% for regional extents below 1500 nm. Intended
    as a kernel-input helper, not for precise navigation.
    """
    dlon = ((p.lon_deg - ref.lon_deg + 180.0) % 360.0) - 180.0
    east = EARTH_RADIUS_NM * math.cos(ref.lat_deg * _D2R) * dlon * _D2R
    north = EARTH_RADIUS_NM * (p.lat_deg - ref.lat_deg) * _D2R
    return east, north


def cross_track_distance_nm(path_start: GeoPoint, path_end: GeoPoint, p: GeoPoint) -> float:
    """Signed distance from p to the great circle through path_start/path_end.

    Positive to the right of the path direction.
    """
    d13 = great_circle_distance_nm(path_start, p) / EARTH_RADIUS_NM
    if d13 == 0.0:
        return 0.0
    b13 = initial_bearing_deg(path_start, p) * _D2R
    b12 = initial_bearing_deg(path_start, path_end) * _D2R
    return math.asin(math.sin(d13) * math.sin(b13 - b12)) * EARTH_RADIUS_NM


def pairwise_distance_nm(lat1_deg, lon1_deg, lat2_deg, lon2_deg) -> np.ndarray:
    """Vectorized haversine: (n,) vs (m,) degree arrays -> (n, m) nm matrix."""
    lat1 = np.radians(np.asarray(lat1_deg, float))[:, None]
    lon1 = np.radians(np.asarray(lon1_deg, float))[:, None]
    lat2 = np.radians(np.asarray(lat2_deg, float))[None, :]
    lon2 = np.radians(np.asarray(lon2_deg, float))[None, :]
    s = (
        np.sin((lat2 - lat1) / 2.0) ** 2
        + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_NM * np.arcsin(np.minimum(1.0, np.sqrt(s)))
