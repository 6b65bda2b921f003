"""Geodesy primitives: distances, bearings, projection, tangent plane."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windroute import geo
from windroute.errors import DegenerateInputError

ONE_DEGREE_NM = 2.0 * math.pi * geo.EARTH_RADIUS_NM / 360.0  # 60.039 nm

lats = st.floats(min_value=-85.0, max_value=85.0)
lons = st.floats(min_value=-180.0, max_value=179.999)


def points(draw_alt=False):
    return st.builds(geo.GeoPoint, lats, lons)


class TestGeoPoint:
    def test_longitude_normalization(self):
        assert geo.GeoPoint(10.0, 190.0).lon_deg == pytest.approx(-170.0)
        assert geo.GeoPoint(10.0, -181.0).lon_deg == pytest.approx(179.0)
        assert geo.GeoPoint(10.0, 180.0).lon_deg == pytest.approx(-180.0)

    def test_latitude_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            geo.GeoPoint(91.0, 0.0)
        with pytest.raises(ValueError):
            geo.GeoPoint(-90.5, 0.0)

    def test_negative_altitude_rejected(self):
        with pytest.raises(ValueError):
            geo.GeoPoint(0.0, 0.0, -1.0)


class TestGreatCircleDistance:
    def test_identity(self):
        p = geo.GeoPoint(40.0, -100.0, 39000.0)
        assert geo.great_circle_distance_nm(p, p) == 0.0

    def test_one_degree_of_longitude_at_equator(self):
        d = geo.great_circle_distance_nm(geo.GeoPoint(0, 0), geo.GeoPoint(0, 1))
        assert d == pytest.approx(60.04, abs=0.01)
        assert d == pytest.approx(ONE_DEGREE_NM, abs=1e-9)

    def test_seattle_to_miami(self):
        # Frozen from the haversine formula on a 3440.065 nm sphere.
        sea = geo.GeoPoint(47.45, -122.31)
        mia = geo.GeoPoint(25.79, -80.29)
        assert geo.great_circle_distance_nm(sea, mia) == pytest.approx(
            2365.0, rel=0.01
        )

    def test_altitude_is_ignored(self):
        a = geo.GeoPoint(30.0, -90.0, 0.0)
        b = geo.GeoPoint(35.0, -95.0, 39000.0)
        b0 = geo.GeoPoint(35.0, -95.0, 0.0)
        assert geo.great_circle_distance_nm(a, b) == geo.great_circle_distance_nm(
            a, b0
        )

    @given(points(), points())
    def test_symmetry(self, a, b):
        assert geo.great_circle_distance_nm(a, b) == geo.great_circle_distance_nm(
            b, a
        )

    @given(points(), points())
    def test_non_negative_and_zero_iff_coincident(self, a, b):
        d = geo.great_circle_distance_nm(a, b)
        assert d >= 0.0
        if a.lat_deg == b.lat_deg and a.lon_deg == b.lon_deg:
            assert d == 0.0

    @settings(max_examples=50)
    @given(points(), points(), points())
    def test_triangle_inequality(self, a, b, c):
        dab = geo.great_circle_distance_nm(a, b)
        dbc = geo.great_circle_distance_nm(b, c)
        dac = geo.great_circle_distance_nm(a, c)
        assert dac <= dab + dbc + 1e-9


def _walker_bearing(a, b, step_nm=0.01):
    """Brute-force initial course: probe headings by tiny projected steps."""
    best = None
    best_d = float("inf")
    for bearing in np.arange(0.0, 360.0, 0.05):
        q = geo.project_nm(a, float(bearing), step_nm)
        d = geo.great_circle_distance_nm(q, b)
        if d < best_d:
            best_d = d
            best = float(bearing)
    return best


class TestInitialBearing:
    def test_due_north(self):
        b = geo.initial_bearing_deg(geo.GeoPoint(0, 0), geo.GeoPoint(1, 0))
        assert b == pytest.approx(0.0, abs=1e-9)

    def test_due_east(self):
        b = geo.initial_bearing_deg(geo.GeoPoint(0, 0), geo.GeoPoint(0, 1))
        assert b == pytest.approx(90.0, abs=1e-9)

    def test_northeast_quadrant_matches_walker(self):
        a = geo.GeoPoint(0, 0)
        b = geo.GeoPoint(1, 1)
        bearing = geo.initial_bearing_deg(a, b)
        assert 0.0 < bearing < 90.0
        assert bearing == pytest.approx(_walker_bearing(a, b), abs=0.1)

    def test_coincident_points_raise(self):
        p = geo.GeoPoint(10.0, 10.0)
        with pytest.raises(DegenerateInputError):
            geo.initial_bearing_deg(p, p)

    @given(points(), points())
    def test_range(self, a, b):
        if (a.lat_deg, a.lon_deg) == (b.lat_deg, b.lon_deg):
            return
        bearing = geo.initial_bearing_deg(a, b)
        assert 0.0 <= bearing < 360.0


class TestProject:
    def test_zero_distance_is_identity(self):
        p = geo.GeoPoint(33.0, -81.0, 39000.0)
        q = geo.project_nm(p, 123.0, 0.0)
        assert q.lat_deg == pytest.approx(p.lat_deg)
        assert q.lon_deg == pytest.approx(p.lon_deg)

    def test_one_degree_east_at_equator(self):
        q = geo.project_nm(geo.GeoPoint(0, 0), 90.0, ONE_DEGREE_NM)
        assert q.lat_deg == pytest.approx(0.0, abs=1e-6)
        assert q.lon_deg == pytest.approx(1.0, abs=1e-6)

    def test_round_trip_distance(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p = geo.GeoPoint(rng.uniform(-60, 60), rng.uniform(-179, 179))
            bearing = float(rng.uniform(0, 360))
            dist = float(rng.uniform(0.1, 1500.0))
            q = geo.project_nm(p, bearing, dist)
            assert geo.great_circle_distance_nm(p, q) == pytest.approx(
                dist, abs=1e-6
            )

    def test_round_trip_bearing(self):
        p = geo.GeoPoint(40.0, -100.0)
        q = geo.project_nm(p, 37.0, 500.0)
        assert geo.initial_bearing_deg(p, q) == pytest.approx(37.0, abs=1e-6)


class TestLocalPlane:
    def test_enu_of_reference_is_origin(self):
        p = geo.GeoPoint(45.0, -120.0)
        e, n = geo.local_enu_nm(p, p)
        assert e == 0.0 and n == 0.0

    def test_enu_matches_small_displacements(self):
        ref = geo.GeoPoint(45.0, -120.0)
        north = geo.project_nm(ref, 0.0, 50.0)
        east = geo.project_nm(ref, 90.0, 50.0)
        e, n = geo.local_enu_nm(ref, north)
        assert n == pytest.approx(50.0, rel=1e-3)
        assert abs(e) < 0.5
        e, n = geo.local_enu_nm(ref, east)
        assert e == pytest.approx(50.0, rel=1e-3)
        assert abs(n) < 0.5


class TestCrossTrack:
    def test_on_track_is_zero(self):
        a = geo.GeoPoint(0, 0)
        b = geo.GeoPoint(0, 10)
        mid = geo.GeoPoint(0, 5)
        assert geo.cross_track_distance_nm(a, b, mid) == pytest.approx(0.0, abs=1e-6)

    def test_sign_convention(self):
        # Opposite sides of the track carry opposite signs.
        a = geo.GeoPoint(0, 0)
        b = geo.GeoPoint(0, 10)
        north = geo.GeoPoint(1, 5)
        south = geo.GeoPoint(-1, 5)
        xt_n = geo.cross_track_distance_nm(a, b, north)
        xt_s = geo.cross_track_distance_nm(a, b, south)
        assert xt_n * xt_s < 0
        assert abs(abs(xt_n) - ONE_DEGREE_NM) < 0.1

    def test_pairwise_distance_matches_scalar(self):
        rng = np.random.default_rng(11)
        pts = [
            geo.GeoPoint(rng.uniform(-60, 60), rng.uniform(-179, 179))
            for _ in range(8)
        ]
        lat = [p.lat_deg for p in pts]
        lon = [p.lon_deg for p in pts]
        mat = geo.pairwise_distance_nm(lat, lon, lat, lon)
        for i, a in enumerate(pts):
            for j, b in enumerate(pts):
                assert mat[i, j] == pytest.approx(
                    geo.great_circle_distance_nm(a, b), abs=1e-9
                )
