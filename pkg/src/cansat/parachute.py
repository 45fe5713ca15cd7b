"""Spill-hole parachute geometry and sizing."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .descent import AirEnvironment, terminal_velocity

DEFAULT_CD = 1.75
SPILL_GUIDELINE = 0.20
SPILL_TOLERANCE = 0.005


@dataclass(frozen=True)
class ParachuteSpec:
    name: str
    canopy_diameter: float  # m
    spill_ratio: float = SPILL_GUIDELINE  # vent diameter / canopy diameter
    cd: float = DEFAULT_CD
    deploy_altitude: float = 0.0  # m, 0 = open from release
    material: str = "nylon"

    def __post_init__(self):
        problems = _invariant_violations(self)
        if problems:
            raise ValueError("; ".join(str(p) for p in problems))

    @property
    def area(self) -> float:
        return effective_area(self)

    @property
    def drag_area(self) -> float:
        """Cd * effective area, m^2."""
        return self.cd * effective_area(self)


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self):
        return f"{self.field}: {self.message}"


def effective_area(spec: ParachuteSpec) -> float:
    """Canopy disc area minus the spill-hole disc."""
    return math.pi / 4.0 * spec.canopy_diameter**2 * (1.0 - spec.spill_ratio**2)


def size_for_descent(
    mass: float,
    target_v: float,
    cd: float = DEFAULT_CD,
    env: AirEnvironment | None = None,
    spill_ratio: float = SPILL_GUIDELINE,
    *,
    name: str = "chute",
    deploy_altitude: float = 0.0,
    material: str = "nylon",
) -> ParachuteSpec:
    """Canopy that brings ``mass`` (kg) to a steady ``target_v`` (m/s) on its own.

    The required drag area follows from the force balance
    ``A = 2 m g / (cd rho v^2)``; the diameter is then widened to make up
    for the spill hole.
    """
    env = env or AirEnvironment()
    if not mass > 0:
        raise ValueError(f"mass must be > 0, got {mass}")
    if not target_v > 0:
        raise ValueError(f"target_v must be > 0 (zero needs an infinite canopy), got {target_v}")
    if not cd > 0:
        raise ValueError(f"cd must be > 0, got {cd}")
    if not 0 <= spill_ratio < 1:
        raise ValueError(f"spill_ratio must be in [0, 1), got {spill_ratio}")
    area = required_area(mass * env.g, target_v, cd, env.rho)
    diameter = math.sqrt(4.0 * area / (math.pi * (1.0 - spill_ratio**2)))
    return ParachuteSpec(
        name=name,
        canopy_diameter=diameter,
        spill_ratio=spill_ratio,
        cd=cd,
        deploy_altitude=deploy_altitude,
        material=material,
    )


def required_area(weight: float, target_v: float, cd: float, rho: float) -> float:
    return 2.0 * weight / (cd * rho * target_v**2)


def required_cd(weight: float, target_v: float, area: float, rho: float) -> float:
    """Drag coefficient a canopy of ``area`` would need to hit ``target_v``.

    Useful for sanity-checking a proposed canopy: values far above ~2.5 mean
    the canopy is simply too small.
    """
    return 2.0 * weight / (rho * area * target_v**2)


def descent_rate(spec: ParachuteSpec, mass: float, env: AirEnvironment | None = None) -> float:
    env = env or AirEnvironment()
    return terminal_velocity(mass * env.g, spec.cd, env.rho, effective_area(spec))


def _invariant_violations(spec) -> list[Violation]:
    out = []
    if not spec.canopy_diameter > 0:
        out.append(Violation("canopy_diameter", f"must be > 0 m, got {spec.canopy_diameter}"))
    if not 0 <= spec.spill_ratio < 1:
        out.append(Violation("spill_ratio", f"must be in [0, 1), got {spec.spill_ratio}"))
    if not spec.cd > 0:
        out.append(Violation("cd", f"must be > 0, got {spec.cd}"))
    if not spec.deploy_altitude >= 0:
        out.append(Violation("deploy_altitude", f"must be >= 0 m, got {spec.deploy_altitude}"))
    return out


def validate_spec(spec, guideline: bool = False) -> list[Violation]:
    """List everything wrong with ``spec``; an empty list means it is usable.

    Accepts any object with the ParachuteSpec attributes so that invalid
    values (which the dataclass itself refuses) can still be reported.
    With ``guideline=True`` the vent must also be 20 % of the canopy
    diameter, within 0.005.
    """
    out = _invariant_violations(spec)
    if guideline and abs(spec.spill_ratio - SPILL_GUIDELINE) > SPILL_TOLERANCE:
        out.append(
            Violation(
                "spill_ratio",
                f"expected {SPILL_GUIDELINE:.3f} +/- {SPILL_TOLERANCE}, got {spec.spill_ratio}",
            )
        )
    return out
