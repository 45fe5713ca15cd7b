"""Seeded sensor models that turn simulator truth into noisy readings.

All channels share one generator and draw in a fixed order, so a given seed
and truth sequence always reproduce the same readings.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .descent import AirEnvironment, VehicleState, altitude_to_pressure, pressure_to_altitude

# gyro detumbling reduces rate noise by 4x
STABILIZED_ROT_FACTOR = 0.25


@dataclass(frozen=True)
class NoiseSpec:
    bias: float = 0.0
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"NoiseSpec.sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class SensorReadings:
    pressure: float
    derived_altitude: float
    ppm: float
    lat: float
    lon: float
    rot_x: float
    rot_y: float
    rot_z: float
    acc_x: float
    acc_y: float
    acc_z: float
    bus_voltage: float
    current: float  # mA

    @property
    def power(self) -> float:
        """Bus power in mW."""
        return self.bus_voltage * self.current


@dataclass(frozen=True)
class TemperatureProfile:
    surface_temp: float = 41.3  # degC
    lapse: float = 0.0  # degC per m

    def __call__(self, truth: VehicleState) -> float:
        return temperature_profile(truth, self.surface_temp, self.lapse)


def temperature_profile(truth: VehicleState, surface_temp: float = 41.3, lapse: float = 0.0) -> float:
    return surface_temp - lapse * truth.altitude


@dataclass
class SensorSuite:
    altimeter: NoiseSpec = field(default_factory=lambda: NoiseSpec(sigma=0.02))  # hPa
    gas: NoiseSpec = field(default_factory=lambda: NoiseSpec(sigma=2.0))  # ppm
    baseline_ppm: float = 50.26
    gps: NoiseSpec = field(default_factory=lambda: NoiseSpec(sigma=2e-5))  # degrees
    site_lat: float = 23.11
    site_lon: float = 72.49
    imu: NoiseSpec = field(default_factory=lambda: NoiseSpec(sigma=0.02))
    power: NoiseSpec = field(default_factory=lambda: NoiseSpec(sigma=0.05))  # V
    bus_voltage_nominal: float = 12.0
    current_nominal: float = 400.0  # mA
    current_sigma: float = 5.0  # mA
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.baseline_ppm > 0:
            raise ValueError(f"SensorSuite.baseline_ppm must be > 0, got {self.baseline_ppm}")
        if self.current_sigma < 0:
            raise ValueError("SensorSuite.current_sigma must be >= 0")
        self.reseed()

    def reseed(self) -> None:
        """Restart the noise stream from the channel seeds."""
        seeds = [s.seed for s in (self.altimeter, self.gas, self.gps, self.imu, self.power)]
        self._rng = np.random.default_rng(seeds)

    def with_seed(self, seed: int) -> "SensorSuite":
        return replace(
            self,
            altimeter=replace(self.altimeter, seed=seed),
            gas=replace(self.gas, seed=seed),
            gps=replace(self.gps, seed=seed),
            imu=replace(self.imu, seed=seed),
            power=replace(self.power, seed=seed),
        )

    def sample(self, truth: VehicleState, env: AirEnvironment, stabilized: bool = False) -> SensorReadings:
        # Draw order is part of the reproducibility contract: do not reorder.
        z = self._rng.standard_normal(12).tolist()
        alt, gas, gps, imu, pwr = self.altimeter, self.gas, self.gps, self.imu, self.power
        rot_sigma = imu.sigma * (STABILIZED_ROT_FACTOR if stabilized else 1.0)

        pressure = altitude_to_pressure(truth.altitude, env.p0) + alt.bias + alt.sigma * z[0]
        ppm = max(0.0, self.baseline_ppm + gas.bias + gas.sigma * z[1])
        return SensorReadings(
            pressure=pressure,
            derived_altitude=pressure_to_altitude(pressure, env.p0),
            ppm=ppm,
            lat=self.site_lat + gps.bias + gps.sigma * z[2],
            lon=self.site_lon + gps.bias + gps.sigma * z[3],
            rot_x=imu.bias + rot_sigma * z[4],
            rot_y=imu.bias + rot_sigma * z[5],
            rot_z=imu.bias + rot_sigma * z[6],
            acc_x=imu.bias + imu.sigma * z[7],
            acc_y=imu.bias + imu.sigma * z[8],
            acc_z=imu.bias + imu.sigma * z[9],
            bus_voltage=self.bus_voltage_nominal + pwr.bias + pwr.sigma * z[10],
            current=max(0.0, self.current_nominal + self.current_sigma * z[11]),
        )


def sample(suite: SensorSuite, truth: VehicleState, env: AirEnvironment, stabilized: bool = False) -> SensorReadings:
    return suite.sample(truth, env, stabilized)
