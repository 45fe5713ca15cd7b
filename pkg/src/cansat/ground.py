"""Ground station: byte-stream ingest, mission logs on disk, summaries.

Ingest resynchronises on every ``$NVJ`` in the stream. A candidate frame
runs to the first newline or the next ``$``, whichever comes first, so a
corrupted terminator never swallows the following frame. Bytes that are
not part of any candidate are reported as ``MISSING_START`` at their
offset.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .descent import altitude_to_pressure
from .fsm import FlightMode
from .telemetry import (
    FIELD_FORMATS,
    FIELD_NAMES,
    START,
    DecodeError,
    ErrorCategory,
    TelemetryFrame,
    decode_frame,
    encode_frame,
    format_fields,
    parse_fields,
    quantize,
)

DESCENT_BANDS = ((900.0, 500.0), (500.0, 0.0))

RAW_NAME = "frames.nvj"
CSV_NAME = "frames.csv"
JSONL_NAME = "frames.jsonl"
ERRORS_NAME = "errors.tsv"
META_NAME = "meta.json"


@dataclass
class MissionLog:
    frames: list[TelemetryFrame] = field(default_factory=list)
    errors: list[tuple[int, ErrorCategory]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    # indices into ``frames`` whose seq did not exceed every earlier seq
    out_of_order: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class BandRate:
    top: float
    bottom: float
    rate: float  # m/s, positive when descending
    samples: int


@dataclass
class MissionSummary:
    frame_count: int
    loss_rate: float
    min_altitude: float | None
    max_altitude: float | None
    descent_rate_estimates: list[BandRate]
    ppm_min: float | None
    ppm_max: float | None
    ppm_mean: float | None
    duration: float
    error_count: int = 0

    def band_rate(self, top: float, bottom: float) -> float | None:
        for b in self.descent_rate_estimates:
            if b.top == top and b.bottom == bottom:
                return b.rate
        return None

    def to_dict(self) -> dict:
        return {
            "frame_count": self.frame_count,
            "loss_rate": self.loss_rate,
            "min_altitude": self.min_altitude,
            "max_altitude": self.max_altitude,
            "descent_rate_estimates": [
                {"band": [b.top, b.bottom], "rate": b.rate, "samples": b.samples}
                for b in self.descent_rate_estimates
            ],
            "ppm_min": self.ppm_min,
            "ppm_max": self.ppm_max,
            "ppm_mean": self.ppm_mean,
            "duration": self.duration,
            "error_count": self.error_count,
        }


def _flag_out_of_order(frames: list[TelemetryFrame]) -> list[int]:
    flagged, high = [], None
    for i, f in enumerate(frames):
        if high is not None and f.seq <= high:
            flagged.append(i)
        else:
            high = f.seq
    return flagged


def ingest(stream: bytes | Iterable[bytes], meta: dict | None = None) -> MissionLog:
    """Decode every frame found in ``stream``; never raises on bad input."""
    data = stream if isinstance(stream, (bytes, bytearray)) else b"".join(stream)
    data = bytes(data)
    log = MissionLog(meta=dict(meta or {}))
    pos, n = 0, len(data)
    while pos < n:
        start = data.find(START, pos)
        if start < 0:
            log.errors.append((pos, ErrorCategory.MISSING_START))
            break
        if start > pos:
            log.errors.append((pos, ErrorCategory.MISSING_START))
        nl = data.find(b"\n", start)
        nxt = data.find(b"$", start + 1)
        if nl >= 0 and (nxt < 0 or nl < nxt):
            end = nl + 1
        elif nxt >= 0:
            end = nxt
        else:
            end = n
        try:
            log.frames.append(decode_frame(data[start:end]))
        except DecodeError as e:
            log.errors.append((start, e.category))
        pos = end
    log.out_of_order = _flag_out_of_order(log.frames)
    return log


def _slope(ts: list[float], ys: list[float]) -> float | None:
    n = len(ts)
    if n < 2:
        return None
    tm, ym = sum(ts) / n, sum(ys) / n
    sxx = sum((t - tm) ** 2 for t in ts)
    if sxx == 0:
        return None
    return sum((t - tm) * (y - ym) for t, y in zip(ts, ys)) / sxx


def _band_rates(frames: list[TelemetryFrame]) -> list[BandRate]:
    # only the descent leg, i.e. everything from the highest frame onwards
    ordered = sorted(frames, key=lambda f: f.t)
    apex = max(range(len(ordered)), key=lambda i: (ordered[i].altitude, -i))
    leg = ordered[apex:]
    out = []
    for i, (top, bottom) in enumerate(DESCENT_BANDS):
        # bands share an edge; the lower band owns it
        if i == len(DESCENT_BANDS) - 1:
            pts = [f for f in leg if bottom <= f.altitude <= top]
        else:
            pts = [f for f in leg if bottom < f.altitude <= top]
        slope = _slope([f.t for f in pts], [f.altitude for f in pts])
        if slope is not None:
            out.append(BandRate(top, bottom, -slope, len(pts)))
    return out


def summarize(log: MissionLog) -> MissionSummary:
    frames = log.frames
    if not frames:
        return MissionSummary(0, 0.0, None, None, [], None, None, None, 0.0, len(log.errors))
    seqs = {f.seq for f in frames}
    expected = max(seqs) - min(seqs) + 1
    loss = min(1.0, max(0.0, 1.0 - len(seqs) / expected))
    alts = [f.altitude for f in frames]
    ppms = [f.ppm for f in frames]
    ts = [f.t for f in frames]
    return MissionSummary(
        frame_count=len(frames),
        loss_rate=loss,
        min_altitude=min(alts),
        max_altitude=max(alts),
        descent_rate_estimates=_band_rates(frames) if len(frames) >= 2 else [],
        ppm_min=min(ppms),
        ppm_max=max(ppms),
        ppm_mean=math.fsum(ppms) / len(ppms),
        duration=max(ts) - min(ts),
        error_count=len(log.errors),
    )


def _open_for_write(path: Path):
    try:
        return open(path, "w", newline="", encoding="ascii")
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}") from e


def write_csv(frames: Iterable[TelemetryFrame], path: Path) -> None:
    with _open_for_write(Path(path)) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELD_NAMES)
        for f in frames:
            w.writerow(format_fields(f))


def load_csv(path) -> list[TelemetryFrame]:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != FIELD_NAMES:
        raise ValueError(f"{path}: header does not match telemetry field order")
    return [parse_fields(r) for r in rows[1:]]


def persist(log: MissionLog, directory) -> dict[str, Path]:
    """Write the log as raw lines, CSV, JSONL, an error list and metadata."""
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(e.errno, f"cannot create {out}: {e.strerror}") from e
    paths = {
        "raw": out / RAW_NAME,
        "csv": out / CSV_NAME,
        "jsonl": out / JSONL_NAME,
        "errors": out / ERRORS_NAME,
        "meta": out / META_NAME,
    }
    with _open_for_write(paths["raw"]) as fh:
        for f in log.frames:
            fh.write(encode_frame(f).decode("ascii"))
    write_csv(log.frames, paths["csv"])
    with _open_for_write(paths["jsonl"]) as fh:
        for f in log.frames:
            fh.write(json.dumps(quantize(f).as_dict()) + "\n")
    with _open_for_write(paths["errors"]) as fh:
        for offset, cat in log.errors:
            fh.write(f"{offset}\t{ErrorCategory(cat).value}\n")
    with _open_for_write(paths["meta"]) as fh:
        json.dump(log.meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def load(directory) -> MissionLog:
    d = Path(directory)
    frames = load_csv(d / CSV_NAME)
    errors = []
    if (d / ERRORS_NAME).exists():
        for line in (d / ERRORS_NAME).read_text(encoding="ascii").splitlines():
            if line:
                off, cat = line.split("\t")
                errors.append((int(off), ErrorCategory(cat)))
    meta = {}
    if (d / META_NAME).exists():
        meta = json.loads((d / META_NAME).read_text(encoding="ascii"))
    return MissionLog(frames, errors, meta, _flag_out_of_order(frames))


def emit_plot_data(log: MissionLog, channel: str, path) -> Path:
    """Two-column ``t,<channel>`` CSV for external plotting."""
    formats = dict(FIELD_FORMATS)
    if channel not in formats or channel == "t":
        valid = ", ".join(n for n in FIELD_NAMES if n != "t")
        raise ValueError(f"unknown channel {channel!r}; valid channels: {valid}")
    fmt = formats[channel]
    path = Path(path)
    with _open_for_write(path) as fh:
        fh.write(f"t,{channel}\n")
        for f in log.frames:
            v = getattr(f, channel)
            fh.write(f"{f.t:.2f},{int(v) if fmt is None else format(v, fmt)}\n")
    return path


# Published flight rows: lat, lon, temp (degC), altitude (m), X, Y, ppm
TABLE4_ROWS: tuple[tuple[float, ...], ...] = (
    (23.11, 72.49, 41.3, 150.44, -0.02, -0.02, 44.0),
    (23.11, 72.49, 41.4, 158.36, -0.02, -0.02, 59.54),
    (23.11, 72.49, 41.4, 250.11, -0.02, -0.02, 55.8),
    (23.11, 72.49, 41.4, 269.86, -0.02, -0.02, 40.98),
    (23.11, 72.49, 41.5, 353.69, -0.02, -0.02, 48.82),
    (23.11, 72.49, 41.5, 359.61, -0.02, -0.02, 55.8),
    (23.11, 72.49, 41.5, 457.94, -0.02, -0.02, 40.98),
    (23.11, 72.49, 41.5, 469.03, -0.02, -0.02, 47.17),
    (23.11, 72.49, 41.6, 528.28, -0.02, -0.02, 55.8),
    (23.11, 72.49, 41.6, 569.78, -0.03, -0.02, 47.17),
    (23.11, 72.49, 41.6, 678.90, -0.01, -0.03, 52.22),
    (23.11, 72.49, 41.7, 690.17, -0.06, -0.02, 53.99),
    (23.11, 72.49, 41.7, 720.94, -0.04, -0.05, 55.8),
    (23.11, 72.49, 41.7, 770.38, -0.03, -0.01, 47.17),
)
TABLE4_FIXTURE = "table4.nvj"


def table4_frames() -> list[TelemetryFrame]:
    """The published rows as frames: seq = row index, 2 s spacing."""
    frames = []
    for i, (lat, lon, temp, alt, x, y, ppm) in enumerate(TABLE4_ROWS):
        frames.append(
            quantize(
                TelemetryFrame(
                    seq=i,
                    t=2.0 * i,
                    mode=FlightMode.ASCENT,
                    lat=lat,
                    lon=lon,
                    temp=temp,
                    pressure=altitude_to_pressure(alt),
                    altitude=alt,
                    rot_x=x,
                    rot_y=y,
                    ppm=ppm,
                )
            )
        )
    return frames


def table4_fixture_bytes() -> bytes:
    return (resources.files("cansat") / "data" / TABLE4_FIXTURE).read_bytes()


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str


def validate_table4(log: MissionLog) -> list[Check]:
    """Compare a replayed log against the published flight envelope."""
    s = summarize(log)
    fr = log.frames
    temps = [f.temp for f in fr]
    return [
        Check("frame_count", s.frame_count == 14, f"{s.frame_count} frames (expected 14)"),
        Check("ppm_min", s.ppm_min == 40.98, f"ppm min {s.ppm_min} (expected 40.98)"),
        Check("ppm_max", s.ppm_max == 59.54, f"ppm max {s.ppm_max} (expected 59.54)"),
        Check(
            "position",
            bool(fr) and all(f.lat == 23.11 and f.lon == 72.49 for f in fr),
            "lat/lon constant at 23.11/72.49",
        ),
        Check("max_altitude", s.max_altitude == 770.38, f"max altitude {s.max_altitude} (expected 770.38)"),
        Check(
            "temperature",
            bool(temps) and all(41.3 <= t <= 41.7 for t in temps),
            f"temperatures in [{min(temps, default=None)}, {max(temps, default=None)}] (expected within [41.3, 41.7])",
        ),
    ]
