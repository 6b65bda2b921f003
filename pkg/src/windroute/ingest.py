"""Parsers for winds-aloft (FB) bulletins and aircraft report tables."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

from . import geo
from .errors import FormatError, LevelNotFoundError, ParseError
from .windmodel import AircraftReport, StationObservation, WindVector

log = logging.getLogger(__name__)

_GROUP_WIDTH = 8  # column budget per level field in our bulletin layout


@dataclass(frozen=True)
class DecodedWind:
    """One decoded forecast group. calm=True means 'light and variable'."""

    direction_from_deg: int
    speed_kt: int
    temp_c: int | None = None
    calm: bool = False


@dataclass(frozen=True)
class WindsAloftBulletin:
    valid_time: str | None
    levels_ft: tuple[int, ...]
    # station code -> {level_ft: DecodedWind or None (missing)}
    entries: dict[str, dict[int, DecodedWind | None]]

    def __post_init__(self):
        if list(self.levels_ft) != sorted(set(self.levels_ft)):
            raise ValueError("levels must be strictly increasing")


def decode_fb_group(text: str, level_ft: int | None = None) -> DecodedWind | None:
    """Decode one ddff[tt] forecast group.

    Returns None for a blank/absent group. "9900" decodes to calm. Directions
    51..86 carry the +100 kt speed flag. Temperatures are a signed 2-digit
    suffix; at levels >= 24000 ft the sign is omitted and always negative.
    """
    text = text.strip()
    if not text:
        return None
    if len(text) < 4 or not text[:4].isdigit():
        raise ParseError(f"malformed group {text!r}: expected ddff prefix", offset=0)
    temp = _decode_temp(text, level_ft)
    if text[:4] == "9900":
        return DecodedWind(0, 0, temp, calm=True)
    dd = int(text[:2])
    ff = int(text[2:4])
    if dd <= 36:
        direction = dd * 10 % 360
        speed = ff
    elif 51 <= dd <= 86:
        direction = (dd - 50) * 10 % 360
        speed = ff + 100
    else:
        raise FormatError(f"group {text!r}: direction code {dd} is not encodable", offset=0)
    return DecodedWind(direction, speed, temp)


def _decode_temp(text: str, level_ft: int | None) -> int | None:
    tail = text[4:]
    if not tail:
        return None
    if len(tail) == 3 and tail[0] in "+-" and tail[1:].isdigit():
        return int(tail)
    if len(tail) == 2 and tail.isdigit():
        if level_ft is not None and level_ft >= 24000:
            return -int(tail)  # sign omitted above FL240, always negative
        raise ParseError(
            f"group {text!r}: unsigned temperature only valid at/above 24000 ft",
            offset=4,
        )
    raise ParseError(f"group {text!r}: malformed temperature {tail!r}", offset=4)


def encode_fb_group(
    direction_from_deg: int,
    speed_kt: int,
    temp_c: int | None = None,
    level_ft: int | None = None,
) -> str:
    """Inverse of decode_fb_group for valid direction/speed combinations."""
    if direction_from_deg % 10 != 0 or not 0 <= direction_from_deg < 360:
        raise ValueError("direction must be a multiple of 10 in [0, 360)")
    if not 0 <= speed_kt <= 199:
        raise ValueError("speed must be in [0, 199]")
    dd = direction_from_deg // 10
    if dd == 0:
        dd = 36
    if speed_kt >= 100:
        dd += 50
        ff = speed_kt - 100
    else:
        ff = speed_kt
    out = f"{dd:02d}{ff:02d}"
    if temp_c is not None:
        if level_ft is not None and level_ft >= 24000:
            if temp_c > 0:
                raise ValueError("temperatures at/above 24000 ft must be <= 0")
            out += f"{-temp_c:02d}"
        else:
            out += f"{temp_c:+03d}"
    return out


def encode_calm_group(temp_c: int | None = None, level_ft: int | None = None) -> str:
    out = "9900"
    if temp_c is not None:
        if level_ft is not None and level_ft >= 24000:
            out += f"{-temp_c:02d}"
        else:
            out += f"{temp_c:+03d}"
    return out


def parse_fb_bulletin(text: str) -> WindsAloftBulletin:
    """Parse a bulletin: optional VALID line, an FT header, one line per station.

    Groups are column-aligned: each group starts at the column where its level
    label starts in the FT line (the layout format_fb_bulletin emits).
    """
    valid_time = None
    header_cols: list[tuple[int, int]] = []  # (level_ft, start column)
    entries: dict[str, dict[int, DecodedWind | None]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split()
        if not header_cols:
            if tokens[0] == "VALID" and len(tokens) > 1:
                valid_time = " ".join(tokens[1:])
                continue
            if tokens[0] == "FT":
                col = len(line) - len(line[3:].lstrip()) if len(line) > 3 else 3
                pos = 0
                for tok in tokens[1:]:
                    try:
                        level = int(tok)
                    except ValueError:
                        raise ParseError(
                            f"bad level {tok!r} in FT header", row=lineno
                        ) from None
                    pos = line.index(tok, pos)
                    header_cols.append((level, pos))
                    pos += len(tok)
                levels = [lv for lv, _ in header_cols]
                if levels != sorted(set(levels)):
                    raise ParseError("FT levels not strictly increasing", row=lineno)
                continue
            raise ParseError(
                f"unexpected line before FT header: {line!r}", row=lineno
            )
        code = tokens[0]
        row: dict[int, DecodedWind | None] = {}
        for level, start in header_cols:
            group = line[start : start + _GROUP_WIDTH - 1] if start < len(line) else ""
            try:
                row[level] = decode_fb_group(group, level_ft=level)
            except ParseError as exc:
                raise ParseError(
                    f"station {code}, level {level}: {exc}", row=lineno, column=start
                ) from exc
        entries[code] = row
    if not header_cols:
        raise ParseError("no FT header line found")
    return WindsAloftBulletin(
        valid_time=valid_time,
        levels_ft=tuple(lv for lv, _ in header_cols),
        entries=entries,
    )


def format_fb_bulletin(bulletin: WindsAloftBulletin) -> str:
    """Render a bulletin in the column-aligned layout parse_fb_bulletin reads."""
    lines = []
    if bulletin.valid_time:
        lines.append(f"VALID {bulletin.valid_time}")
    header = "FT".ljust(5)
    cols = []
    for level in bulletin.levels_ft:
        cols.append(len(header))
        header += str(level).ljust(_GROUP_WIDTH)
    lines.append(header.rstrip())
    for code, row in bulletin.entries.items():
        line = code.ljust(5)
        for level, col in zip(bulletin.levels_ft, cols):
            line = line.ljust(col)
            decoded = row.get(level)
            if decoded is None:
                group = ""
            elif decoded.calm:
                group = encode_calm_group(decoded.temp_c, level)
            else:
                group = encode_fb_group(
                    decoded.direction_from_deg, decoded.speed_kt, decoded.temp_c, level
                )
            line += group.ljust(_GROUP_WIDTH)
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def wind_vector_from_met(direction_from_deg: float, speed_kt: float) -> WindVector:
    """Meteorological (blowing-FROM) direction/speed to (u, v) blowing-toward."""
    th = math.radians(direction_from_deg)
    return WindVector(-speed_kt * math.sin(th), -speed_kt * math.cos(th))


def fb_to_station_observations(
    bulletin: WindsAloftBulletin,
    directory: dict[str, geo.GeoPoint],
    level_ft: int,
    include_calm: bool = True,
) -> list[StationObservation]:
    """Decoded entries at one level -> station observations with coordinates.

    Missing entries are skipped; unknown station codes are logged as warnings.
    Calm ("light and variable") entries decode to (0, 0) and can be excluded.
    """
    if level_ft not in bulletin.levels_ft:
        raise LevelNotFoundError(
            f"level {level_ft} ft not in bulletin levels {bulletin.levels_ft}"
        )
    out = []
    for code, row in bulletin.entries.items():
        decoded = row.get(level_ft)
        if decoded is None:
            continue
        if decoded.calm and not include_calm:
            continue
        site = directory.get(code)
        if site is None:
            log.warning("station %s not in directory; skipping", code)
            continue
        site = geo.GeoPoint(site.lat_deg, site.lon_deg, float(level_ft))
        out.append(
            StationObservation(
                site, wind_vector_from_met(decoded.direction_from_deg, decoded.speed_kt)
            )
        )
    return out


def parse_station_directory(path) -> dict[str, geo.GeoPoint]:
    """CSV with columns code, lat_deg, lon_deg -> station code directory."""
    directory: dict[str, geo.GeoPoint] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"code", "lat_deg", "lon_deg"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ParseError(
                f"station directory must have columns {sorted(required)}, "
                f"got {reader.fieldnames}"
            )
        for rowno, row in enumerate(reader, start=2):
            code = row["code"].strip()
            if code in directory:
                raise ParseError(f"duplicate station code {code!r}", row=rowno)
            try:
                directory[code] = geo.GeoPoint(
                    float(row["lat_deg"]), float(row["lon_deg"])
                )
            except ValueError as exc:
                raise ParseError(f"station {code!r}: {exc}", row=rowno) from exc
    return directory


AIRCRAFT_CSV_COLUMNS = (
    "time_utc",
    "aircraft_id",
    "lat_deg",
    "lon_deg",
    "alt_ft",
    "gs_kt",
    "track_deg",
    "tas_kt",
)


@dataclass(frozen=True)
class AircraftRow:
    time_utc: str
    aircraft_id: str
    lat_deg: float
    lon_deg: float
    alt_ft: float
    gs_kt: float
    track_deg: float
    tas_kt: float


@dataclass(frozen=True)
class AircraftReportTable:
    rows: tuple[AircraftRow, ...]

    def to_reports(self) -> list[AircraftReport]:
        out = []
        for r in self.rows:
            th = math.radians(r.track_deg)
            out.append(
                AircraftReport(
                    site=geo.GeoPoint(r.lat_deg, r.lon_deg, r.alt_ft),
                    ground_velocity=WindVector(
                        r.gs_kt * math.sin(th), r.gs_kt * math.cos(th)
                    ),
                    airspeed_kt=r.tas_kt,
                )
            )
        return out


def parse_aircraft_csv(path) -> AircraftReportTable:
    """Parse and validate the aircraft position-report table."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("aircraft CSV is empty (no header)")
        missing = set(AIRCRAFT_CSV_COLUMNS) - set(reader.fieldnames)
        if missing:
            raise ParseError(f"aircraft CSV missing columns {sorted(missing)}")
        for rowno, row in enumerate(reader, start=2):
            rows.append(_parse_aircraft_row(row, rowno))
    return AircraftReportTable(rows=tuple(rows))


def _parse_aircraft_row(row: dict, rowno: int) -> AircraftRow:
    def number(col, low, high, inclusive_low=True):
        raw = row[col]
        try:
            val = float(raw)
        except (TypeError, ValueError):
            raise ParseError(
                f"unparseable number {raw!r}", row=rowno, column=col
            ) from None
        ok_low = val >= low if inclusive_low else val > low
        if not (ok_low and val < high) or not math.isfinite(val):
            raise ParseError(
                f"value {val} out of range for {col}", row=rowno, column=col
            )
        return val

    return AircraftRow(
        time_utc=row["time_utc"],
        aircraft_id=row["aircraft_id"],
        lat_deg=number("lat_deg", -90.0, 90.0 + 1e-9),
        lon_deg=number("lon_deg", -180.0, 180.0),
        alt_ft=number("alt_ft", 0.0, 60000.0),
        gs_kt=number("gs_kt", 0.0, 900.0, inclusive_low=False),
        track_deg=number("track_deg", 0.0, 360.0),
        tas_kt=number("tas_kt", 0.0, 700.0, inclusive_low=False),
    )
