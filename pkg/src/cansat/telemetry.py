"""Telemetry frame type and its ASCII wire codec.

Wire format, one frame per line::

    $NVJ,<seq>,<t>,<mode>,<lat>,<lon>,<temp>,<pressure>,<altitude>,
        <rot_x>,<rot_y>,<rot_z>,<acc_x>,<acc_y>,<acc_z>,<ppm>,<power>*HH\\r\\n

``HH`` is the XOR of every byte between ``$`` and ``*`` as two uppercase hex
digits, as in NMEA 0183.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import asdict, astuple, dataclass

from .fsm import FlightMode

TALKER = b"NVJ"
START = b"$" + TALKER
DEFAULT_CADENCE = 2.0

# (field, format); None marks an integer field
FIELD_FORMATS: tuple[tuple[str, str | None], ...] = (
    ("seq", None),
    ("t", ".2f"),
    ("mode", None),
    ("lat", ".6f"),
    ("lon", ".6f"),
    ("temp", ".2f"),
    ("pressure", ".2f"),
    ("altitude", ".2f"),
    ("rot_x", ".4f"),
    ("rot_y", ".4f"),
    ("rot_z", ".4f"),
    ("acc_x", ".4f"),
    ("acc_y", ".4f"),
    ("acc_z", ".4f"),
    ("ppm", ".2f"),
    ("power", ".2f"),
)
FIELD_NAMES = tuple(name for name, _ in FIELD_FORMATS)
N_FIELDS = len(FIELD_FORMATS)

_INT_RE = re.compile(rb"\d+\Z")
_FLOAT_RE = re.compile(rb"-?\d+(\.\d+)?\Z")
_HEX_RE = re.compile(rb"[0-9A-F]{2}\Z")


@dataclass(frozen=True)
class TelemetryFrame:
    seq: int
    t: float
    mode: FlightMode = FlightMode.PRELAUNCH
    lat: float = 0.0
    lon: float = 0.0
    temp: float = 0.0
    pressure: float = 0.0
    altitude: float = 0.0
    rot_x: float = 0.0
    rot_y: float = 0.0
    rot_z: float = 0.0
    acc_x: float = 0.0
    acc_y: float = 0.0
    acc_z: float = 0.0
    ppm: float = 0.0
    power: float = 0.0  # mW

    def as_dict(self) -> dict:
        d = asdict(self)
        d["mode"] = int(self.mode)
        return d


class ErrorCategory(str, enum.Enum):
    MISSING_START = "MISSING_START"
    BAD_CHECKSUM = "BAD_CHECKSUM"
    FIELD_COUNT = "FIELD_COUNT"
    NON_NUMERIC = "NON_NUMERIC"


class EncodeError(ValueError):
    pass


class DecodeError(ValueError):
    def __init__(self, category: ErrorCategory, message: str = ""):
        super().__init__(f"{category.value}: {message}" if message else category.value)
        self.category = category


def checksum(payload: bytes) -> str:
    c = 0
    for b in payload:
        c ^= b
    return f"{c:02X}"


def format_fields(frame: TelemetryFrame) -> list[str]:
    """Field strings exactly as they appear on the wire (and in CSV rows)."""
    out = []
    for (name, fmt), value in zip(FIELD_FORMATS, astuple(frame)):
        if fmt is None:
            if int(value) < 0:
                raise EncodeError(f"{name} must be a non-negative integer, got {value!r}")
            out.append(str(int(value)))
        else:
            if not math.isfinite(value):
                raise EncodeError(f"{name} is not finite: {value!r}")
            out.append(format(value, fmt))
    return out


def encode_frame(frame: TelemetryFrame) -> bytes:
    payload = b",".join([TALKER] + [s.encode("ascii") for s in format_fields(frame)])
    return b"$" + payload + b"*" + checksum(payload).encode("ascii") + b"\r\n"


def parse_fields(values) -> TelemetryFrame:
    """Build a frame from the 16 field strings; raises DecodeError."""
    if len(values) != N_FIELDS:
        raise DecodeError(ErrorCategory.FIELD_COUNT, f"expected {N_FIELDS} fields, got {len(values)}")
    kwargs = {}
    for (name, fmt), raw in zip(FIELD_FORMATS, values):
        if isinstance(raw, str):
            raw = raw.encode("ascii", "replace")
        if fmt is None:
            if not _INT_RE.match(raw):
                raise DecodeError(ErrorCategory.NON_NUMERIC, f"{name}={raw!r}")
            kwargs[name] = int(raw)
        else:
            if not _FLOAT_RE.match(raw):
                raise DecodeError(ErrorCategory.NON_NUMERIC, f"{name}={raw!r}")
            kwargs[name] = float(raw)
    try:
        kwargs["mode"] = FlightMode(kwargs["mode"])
    except ValueError:
        raise DecodeError(ErrorCategory.NON_NUMERIC, f"mode={kwargs['mode']} is not a flight mode") from None
    return TelemetryFrame(**kwargs)


def decode_frame(line: bytes) -> TelemetryFrame:
    """Parse one wire line (terminator optional); raises DecodeError."""
    if line.endswith(b"\n"):
        line = line[:-1]
    if line.endswith(b"\r"):
        line = line[:-1]
    if not line.startswith(b"$"):
        raise DecodeError(ErrorCategory.MISSING_START, "line does not start with '$'")
    star = line.rfind(b"*")
    if star < 0:
        raise DecodeError(ErrorCategory.BAD_CHECKSUM, "no '*' checksum delimiter")
    payload, given = line[1:star], line[star + 1 :]
    if not _HEX_RE.match(given):
        raise DecodeError(ErrorCategory.BAD_CHECKSUM, f"malformed checksum {given!r}")
    expected = checksum(payload)
    if given.decode("ascii") != expected:
        raise DecodeError(ErrorCategory.BAD_CHECKSUM, f"got {given.decode('ascii')}, computed {expected}")
    parts = payload.split(b",")
    if parts[0] != TALKER:
        raise DecodeError(ErrorCategory.MISSING_START, f"unknown sentence {parts[0]!r}")
    return parse_fields(parts[1:])


def quantize(frame: TelemetryFrame) -> TelemetryFrame:
    """The frame as it will come back out of the codec."""
    return parse_fields(format_fields(frame))


def emission_due(last_emit_t: float, now: float, cadence: float = DEFAULT_CADENCE) -> bool:
    if now < last_emit_t:
        raise ValueError(f"now={now} precedes last emission at {last_emit_t}")
    # tolerance absorbs k*dt rounding in fixed-step loops
    return now - last_emit_t >= cadence - 1e-9

