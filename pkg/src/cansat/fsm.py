"""Flight mode state machine.

Mode map against the mission plan:

    ASCENT + release     drone climb and drop at 900 m (mission mode 1)
    PRIMARY_DESCENT      eye-hook primary canopy, 10-12 m/s (mode 2)
    SECONDARY_DESCENT    servo-deployed spill-hole canopy at 500 m with gyro
                         stabilisation running (modes 3 and 4)
    LANDED               continuous buzzer for recovery (mode 6)

Telemetry (mode 5) runs in every state and is not a state here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field


class FlightMode(enum.IntEnum):
    PRELAUNCH = 0
    ASCENT = 1
    PRIMARY_DESCENT = 2
    SECONDARY_DESCENT = 3
    LANDED = 4


class Buzzer(enum.Enum):
    SILENT = "SILENT"
    CHIRP = "CHIRP"
    CONTINUOUS = "CONTINUOUS"


class InvalidTransition(RuntimeError):
    pass


class RejectedSample(ValueError):
    pass


@dataclass(frozen=True)
class FsmConfig:
    release_altitude: float = 900.0
    secondary_deploy_altitude: float = 500.0
    landed_altitude: float = 2.0
    debounce_samples: int = 3

    def __post_init__(self):
        if not (self.release_altitude > self.secondary_deploy_altitude > self.landed_altitude >= 0):
            raise ValueError(
                "FsmConfig needs release_altitude > secondary_deploy_altitude > landed_altitude >= 0"
            )
        if self.debounce_samples < 1:
            raise ValueError("FsmConfig.debounce_samples must be >= 1")


@dataclass(frozen=True)
class Transition:
    t: float
    from_mode: FlightMode
    to_mode: FlightMode
    trigger_altitude: float


@dataclass
class FlightStateMachine:
    config: FsmConfig = field(default_factory=FsmConfig)
    mode: FlightMode = FlightMode.PRELAUNCH
    events: list[Transition] = field(default_factory=list)
    _last_t: float | None = field(default=None, repr=False)
    _last_alt: float | None = field(default=None, repr=False)
    _streak: int = field(default=0, repr=False)

    def _go(self, to_mode: FlightMode, t: float, altitude: float) -> Transition:
        if self.events and t <= self.events[-1].t:
            raise InvalidTransition(f"transition at t={t} is not after t={self.events[-1].t}")
        tr = Transition(t, self.mode, to_mode, altitude)
        self.events.append(tr)
        self.mode = to_mode
        self._streak = 0
        return tr

    def trigger_launch(self, t: float, altitude: float = 0.0) -> Transition:
        if self.mode is not FlightMode.PRELAUNCH:
            raise InvalidTransition(f"launch is only valid from PRELAUNCH, not {self.mode.name}")
        return self._go(FlightMode.ASCENT, t, altitude)

    def trigger_release(self, t: float, altitude: float | None = None) -> Transition:
        """Drop from the carrier; the primary canopy is open from here on."""
        if self.mode is not FlightMode.ASCENT:
            raise InvalidTransition(f"release is only valid from ASCENT, not {self.mode.name}")
        if altitude is None:
            altitude = self.config.release_altitude
        return self._go(FlightMode.PRIMARY_DESCENT, t, altitude)

    def on_altitude_sample(self, altitude: float, t: float) -> Transition | None:
        """Feed one altimeter sample; returns the transition it caused, if any.

        Deployment needs ``debounce_samples`` consecutive samples at or below
        the deploy altitude, each lower than the one before. Landing needs the
        same count at or below the landed altitude.
        """
        if self._last_t is not None and t <= self._last_t:
            raise RejectedSample(f"sample time {t} does not follow {self._last_t}")
        prev = self._last_alt
        self._last_t, self._last_alt = t, altitude
        cfg = self.config

        if self.mode is FlightMode.PRIMARY_DESCENT:
            descending = prev is not None and altitude < prev
            if altitude <= cfg.secondary_deploy_altitude and descending:
                self._streak += 1
            else:
                self._streak = 0
            if self._streak >= cfg.debounce_samples:
                return self._go(FlightMode.SECONDARY_DESCENT, t, altitude)
        elif self.mode is FlightMode.SECONDARY_DESCENT:
            self._streak = self._streak + 1 if altitude <= cfg.landed_altitude else 0
            if self._streak >= cfg.debounce_samples:
                return self._go(FlightMode.LANDED, t, altitude)
        return None

    def stabilization_active(self) -> bool:
        return self.mode is FlightMode.SECONDARY_DESCENT

    def buzzer_pattern(self, frame_just_sent: bool) -> Buzzer:
        if self.mode is FlightMode.LANDED:
            return Buzzer.CONTINUOUS
        if frame_just_sent and self.mode in (
            FlightMode.ASCENT,
            FlightMode.PRIMARY_DESCENT,
            FlightMode.SECONDARY_DESCENT,
        ):
            return Buzzer.CHIRP
        return Buzzer.SILENT

    def active_chutes(self) -> tuple[str, ...]:
        if self.mode is FlightMode.PRIMARY_DESCENT:
            return ("primary",)
        if self.mode in (FlightMode.SECONDARY_DESCENT, FlightMode.LANDED):
            return ("primary", "secondary")
        return ()
