"""Mass, volume and power budgets for the can."""
from __future__ import annotations

import math
from dataclasses import dataclass

RAILS = {"3.3V": 3.3, "5V": 5.0, "12V": 12.0, "NONE": 0.0}

MASS_TARGET_G = 727.6
VOLUME_TARGET_CM3 = 3804.27
ENDURANCE_TARGET_MIN = 25.0


@dataclass(frozen=True)
class ComponentEntry:
    name: str
    mass: float  # g
    rail: str = "NONE"
    current_draw: float = 0.0  # mA

    def __post_init__(self):
        if self.rail not in RAILS:
            raise ValueError(f"{self.name}: unknown rail {self.rail!r}, expected one of {sorted(RAILS)}")
        if self.current_draw < 0:
            raise ValueError(f"{self.name}: current_draw must be >= 0")


@dataclass(frozen=True)
class Battery:
    capacity: float = 1090.0  # mAh
    nominal_voltage: float = 12.0

    def __post_init__(self):
        if not (self.capacity > 0 and self.nominal_voltage > 0):
            raise ValueError("Battery capacity and nominal_voltage must be > 0")


@dataclass(frozen=True)
class CanGeometry:
    height: float = 310.0  # mm
    diameter: float = 125.0  # mm
    wall_thickness: float = 3.0  # mm

    def __post_init__(self):
        if self.height < 0 or not self.diameter > 0 or not self.wall_thickness > 0:
            raise ValueError("CanGeometry dimensions must be positive")
        if not self.wall_thickness < self.diameter / 2:
            raise ValueError("CanGeometry wall_thickness must be below half the diameter")


# Masses are the flight build sheet. Current draws are typical datasheet
# figures, not measurements; override them in the mission config.
DEFAULT_COMPONENTS: tuple[ComponentEntry, ...] = (
    ComponentEntry("Can Structure", 300.0),
    ComponentEntry("Xbee S2C Pro", 15.0, "3.3V", 120.0),
    ComponentEntry("MPU-6050", 5.0, "3.3V", 4.0),
    ComponentEntry("MQ135", 10.0, "3.3V", 150.0),
    ComponentEntry("BME180", 3.0, "3.3V", 1.0),
    ComponentEntry("INA219", 6.0, "3.3V", 1.0),
    ComponentEntry("SD card module", 15.0, "5V", 30.0),
    ComponentEntry("Neo-6M", 10.0, "3.3V", 45.0),
    ComponentEntry("Arduino Uno", 25.0, "5V", 50.0),
    ComponentEntry("Servo Motors x2", 40.0, "3.3V", 20.0),
    ComponentEntry("Buzzer", 5.3, "5V", 15.0),
    ComponentEntry("Pla Sheet", 25.3),
    ComponentEntry("Arduino nano", 15.0, "5V", 20.0),
    ComponentEntry("BO motors x3", 100.0, "12V", 180.0),
    ComponentEntry("Camera Module", 40.0, "5V", 120.0),
    ComponentEntry("Voltage regulator module", 10.0, "12V", 5.0),
    ComponentEntry("Battery", 100.0),
    ComponentEntry("Switch", 3.0),
)

# Which rail each known part must sit on.
RAIL_RULES = {
    "mq135": "3.3V",
    "mpu6050": "3.3V",
    "bme180": "3.3V",
    "servomotors": "3.3V",
    "neo6m": "3.3V",
    "xbees2cpro": "3.3V",
    "arduinouno": "5V",
    "arduinonano": "5V",
    "bomotors": "12V",
}


def _key(name: str) -> str:
    key = "".join(ch for ch in name.lower() if ch.isalnum())
    # quantity suffixes such as "x2" / "x3"
    if len(key) > 2 and key[-2] == "x" and key[-1].isdigit():
        key = key[:-2]
    return key


def total_mass(components) -> float:
    masses = [c.mass for c in components]
    for c in components:
        if c.mass < 0:
            raise ValueError(f"{c.name}: negative mass {c.mass}")
    return math.fsum(masses)


def can_volume(geom: CanGeometry) -> float:
    """Outer-envelope volume in cm^3."""
    r_cm = geom.diameter / 20.0
    return math.pi * r_cm * r_cm * geom.height / 10.0


def battery_current(components, battery: Battery, regulator_efficiency: float = 0.85) -> float:
    """Current drawn from the pack, mA, with regulated rails referred back to it."""
    if not 0 < regulator_efficiency <= 1:
        raise ValueError(f"regulator_efficiency must be in (0, 1], got {regulator_efficiency}")
    total = 0.0
    for c in components:
        volts = RAILS[c.rail]
        if volts == 0.0 or c.current_draw == 0.0:
            continue
        if c.rail == "12V":
            total += c.current_draw
        else:
            total += volts * c.current_draw / (battery.nominal_voltage * regulator_efficiency)
    return total


def endurance_minutes(battery: Battery, components, regulator_efficiency: float = 0.85) -> float:
    """Minutes of operation on a full pack; ``math.inf`` with no load."""
    current = battery_current(components, battery, regulator_efficiency)
    if current == 0.0:
        return math.inf
    return battery.capacity / current * 60.0


@dataclass(frozen=True)
class RailViolation:
    component: str
    rail: str
    expected: str

    def __str__(self):
        return f"{self.component}: on {self.rail}, expected {self.expected}"


def validate_rails(components) -> tuple[list[RailViolation], list[str]]:
    """Check rail assignments; returns (violations, notes about skipped parts)."""
    violations, notes = [], []
    for c in components:
        expected = RAIL_RULES.get(_key(c.name))
        if expected is None:
            notes.append(f"{c.name}: no rail rule, skipped")
        elif c.rail != expected:
            violations.append(RailViolation(c.name, c.rail, expected))
    return violations, notes
