"""Vertical descent physics: quadratic drag, terminal velocity, barometric
altitude, and a fixed-step integrator for a can falling under canopies.

The atmosphere is a single constant-density layer; over a 900 m drop the
density change is a few percent and is deliberately ignored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable

from .fsm import FlightMode

if TYPE_CHECKING:
    from .parachute import ParachuteSpec

G = 9.81
RHO = 1.225
P0 = 1013.25

# Barometric (hypsometric) constants used by BMP-series altimeter firmware.
_H_SCALE = 44330.0
_EXPONENT = 5.255

MAX_DT = 0.1


@dataclass(frozen=True)
class AirEnvironment:
    rho: float = RHO
    g: float = G
    p0: float = P0  # hPa

    def __post_init__(self):
        for name in ("rho", "g", "p0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"AirEnvironment.{name} must be > 0, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class DescentBody:
    """The bare can: mass in kg plus the drag of the can itself."""

    mass: float
    body_cd: float = 0.0
    body_area: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"DescentBody.mass must be > 0, got {self.mass!r}")
        if self.body_cd < 0 or self.body_area < 0:
            raise ValueError("DescentBody.body_cd and body_area must be >= 0")

    @property
    def weight(self) -> float:
        return self.mass * G


@dataclass(frozen=True)
class VehicleState:
    t: float
    altitude: float
    v: float  # vertical velocity, negative when descending
    active_chutes: frozenset[str] = field(default_factory=frozenset)
    mode: FlightMode = FlightMode.PRELAUNCH


def drag_force(cd: float, rho: float, v: float, area: float) -> float:
    """Magnitude of aerodynamic drag, ``0.5 * cd * rho * v**2 * area`` in N."""
    if cd < 0 or rho <= 0 or area < 0:
        raise ValueError(f"drag_force needs cd >= 0, rho > 0, area >= 0 (got {cd}, {rho}, {area})")
    return 0.5 * cd * rho * v * v * area


def terminal_velocity(weight: float, cd: float, rho: float, area: float) -> float:
    """Speed at which drag balances ``weight``; returned as a positive number."""
    if weight < 0:
        raise ValueError(f"weight must be >= 0, got {weight}")
    denom = cd * rho * area
    if not denom > 0:
        raise ValueError("terminal_velocity needs cd * rho * area > 0")
    return math.sqrt(2.0 * weight / denom)


def pressure_to_altitude(p: float, p0: float = P0) -> float:
    if p <= 0:
        raise ValueError(f"pressure must be > 0 hPa, got {p}")
    if p > p0 * 1.05:
        raise ValueError(f"pressure {p} hPa is above 1.05 * p0 ({p0} hPa)")
    return _H_SCALE * (1.0 - (p / p0) ** (1.0 / _EXPONENT))


def altitude_to_pressure(altitude: float, p0: float = P0) -> float:
    if altitude >= _H_SCALE:
        raise ValueError(f"altitude {altitude} m is outside the barometric model")
    return p0 * (1.0 - altitude / _H_SCALE) ** _EXPONENT


def total_drag_area(body: DescentBody, chutes: Iterable["ParachuteSpec"]) -> float:
    """Summed Cd*A of the can and every open canopy, in m^2."""
    cda = body.body_cd * body.body_area
    for chute in chutes:
        cda += chute.drag_area
    return cda


def _advance(h: float, v: float, k: float, g: float, dt: float) -> tuple[float, float]:
    # Drag is linearised as k*|v_old|*v_new, so the update is exact at the
    # terminal fixed point and stable for any dt. Position uses the mean of
    # old and new velocity, which is exact for free fall.
    v_new = (v - g * dt) / (1.0 + k * abs(v) * dt)
    h_new = h + 0.5 * (v + v_new) * dt
    if h_new <= 0.0:
        return 0.0, 0.0
    return h_new, v_new


def step_descent(
    state: VehicleState,
    body: DescentBody,
    chutes: Iterable["ParachuteSpec"],
    env: AirEnvironment,
    dt: float,
) -> VehicleState:
    """Advance ``state`` by one time step of ``dt`` seconds.

    Gravity plus drag from the body and all ``chutes`` (drag areas add).
    On ground contact the altitude is clamped to zero and the can stops.
    """
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must be in (0, {MAX_DT}] s, got {dt}")
    if state.altitude <= 0.0 and state.v <= 0.0:
        return replace(state, t=state.t + dt, altitude=0.0, v=0.0)
    k = env.rho * total_drag_area(body, chutes) / (2.0 * body.mass)
    h, v = _advance(state.altitude, state.v, k, env.g, dt)
    return replace(state, t=state.t + dt, altitude=h, v=v)


def integrate(
    state: VehicleState,
    body: DescentBody,
    chutes: Iterable["ParachuteSpec"],
    env: AirEnvironment,
    dt: float,
    n_steps: int,
) -> VehicleState:
    """Equivalent to ``n_steps`` calls of :func:`step_descent` with a fixed chute set."""
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must be in (0, {MAX_DT}] s, got {dt}")
    k = env.rho * total_drag_area(body, list(chutes)) / (2.0 * body.mass)
    h, v = state.altitude, state.v
    for _ in range(n_steps):
        if h <= 0.0 and v <= 0.0:
            h, v = 0.0, 0.0
            continue
        h, v = _advance(h, v, k, env.g, dt)
    return replace(state, t=state.t + n_steps * dt, altitude=h, v=v)
