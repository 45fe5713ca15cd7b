"""Drop-mission simulator, telemetry codec and ground-station pipeline for a
can-sized atmospheric sounding satellite."""

from .descent import (
    AirEnvironment,
    DescentBody,
    VehicleState,
    altitude_to_pressure,
    drag_force,
    pressure_to_altitude,
    step_descent,
    terminal_velocity,
)
from .fsm import FlightMode, FlightStateMachine, FsmConfig
from .ground import MissionLog, MissionSummary, ingest, persist, summarize
from .link import ChannelEvent, LinkModel, channel_transmit
from .parachute import ParachuteSpec, effective_area, size_for_descent, validate_spec
from .telemetry import DecodeError, ErrorCategory, TelemetryFrame, decode_frame, encode_frame

__version__ = "0.1.0"
