"""Mission configuration: a flat ``key = value`` file layered over defaults."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .budgets import Battery, CanGeometry, ComponentEntry, battery_current, total_mass
from .descent import MAX_DT, AirEnvironment, DescentBody
from .fsm import FsmConfig
from .link import LinkModel
from .parachute import ParachuteSpec, size_for_descent, validate_spec
from .sensors import NoiseSpec, SensorSuite, TemperatureProfile

AUTO = "auto"


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def default_config_text() -> str:
    return (resources.files("cansat") / "data" / "default.cfg").read_text(encoding="utf-8")


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}", "empty key")
        if key in out:
            raise ConfigError(key, f"duplicate key at {source}:{lineno}")
        out[key] = value
    return out


@dataclass
class MissionConfig:
    mission_id: str
    start_timestamp: str
    seed: int
    dt: float
    cadence: float
    sample_period: float
    ascent_rate: float
    prelaunch_hold: float
    max_duration: float
    fsm: FsmConfig
    env: AirEnvironment
    body: DescentBody
    primary: ParachuteSpec
    secondary: ParachuteSpec
    sensors: SensorSuite
    temperature: TemperatureProfile
    link: LinkModel
    ground_offset: float
    components: tuple[ComponentEntry, ...]
    battery: Battery
    regulator_efficiency: float
    can: CanGeometry
    values: dict[str, str] = field(default_factory=dict, repr=False)

    @property
    def steps_per_sample(self) -> int:
        return round(self.sample_period / self.dt)

    @property
    def steps_per_frame(self) -> int:
        return round(self.cadence / self.dt)

    def snapshot(self) -> dict[str, str]:
        return dict(self.values)

    def with_overrides(self, **overrides) -> "MissionConfig":
        """Rebuild with some keys replaced, e.g. ``{"mission.seed": "7"}``."""
        values = dict(self.values)
        for k, v in overrides.items():
            values[k] = str(v)
        return build_config(values)

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.values.items())


class _Reader:
    def __init__(self, values: dict[str, str]):
        self.values = values
        self.used: set[str] = set()

    def raw(self, key: str) -> str:
        if key not in self.values:
            raise ConfigError(key, "missing")
        self.used.add(key)
        return self.values[key]

    def is_auto(self, key: str) -> bool:
        return self.raw(key).lower() == AUTO

    def float(self, key: str) -> float:
        s = self.raw(key)
        try:
            v = float(s)
        except ValueError:
            raise ConfigError(key, f"expected a number, got {s!r}") from None
        if not math.isfinite(v):
            raise ConfigError(key, f"must be finite, got {s!r}")
        return v

    def int(self, key: str) -> int:
        s = self.raw(key)
        try:
            return int(s)
        except ValueError:
            raise ConfigError(key, f"expected an integer, got {s!r}") from None

    def str(self, key: str) -> str:
        return self.raw(key)


def _component(key: str, value: str) -> ComponentEntry:
    name = key[len("component.") :].strip()
    parts = [p.strip() for p in value.split(",")]
    if not name or len(parts) != 3:
        raise ConfigError(key, "expected '<mass g>, <rail>, <current mA>'")
    try:
        mass, current = float(parts[0]), float(parts[2])
    except ValueError:
        raise ConfigError(key, f"non-numeric mass or current in {value!r}") from None
    if mass < 0:
        raise ConfigError(key, f"mass must be >= 0, got {mass}")
    try:
        return ComponentEntry(name, mass, parts[1], current)
    except ValueError as e:
        raise ConfigError(key, str(e)) from None


def _guard(key: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(key, str(e)) from None


def build_config(values: dict[str, str]) -> MissionConfig:
    r = _Reader(values)

    dt = r.float("mission.dt")
    if not 0 < dt <= MAX_DT:
        raise ConfigError("mission.dt", f"must be in (0, {MAX_DT}], got {dt}")
    cadence = r.float("mission.cadence")
    sample_period = r.float("mission.sample_period")
    for key, period in (("mission.cadence", cadence), ("mission.sample_period", sample_period)):
        steps = period / dt
        if period <= 0 or abs(steps - round(steps)) > 1e-9:
            raise ConfigError(key, f"must be a positive whole number of dt steps, got {period}")
    seed = r.int("mission.seed")

    fsm = _guard(
        "fsm",
        FsmConfig,
        release_altitude=r.float("fsm.release_altitude"),
        secondary_deploy_altitude=r.float("fsm.secondary_deploy_altitude"),
        landed_altitude=r.float("fsm.landed_altitude"),
        debounce_samples=r.int("fsm.debounce_samples"),
    )
    env = _guard("env", AirEnvironment, rho=r.float("env.rho"), g=r.float("env.g"), p0=r.float("env.p0"))

    comp_keys = [k for k in values if k.startswith("component.")]
    components = tuple(_component(k, values[k]) for k in comp_keys)
    r.used.update(comp_keys)

    mass = total_mass(components) / 1000.0 if r.is_auto("body.mass") else r.float("body.mass")
    body = _guard("body", DescentBody, mass=mass, body_cd=r.float("body.cd"), body_area=r.float("body.area"))

    chutes = {}
    for name, deploy in (("primary", fsm.release_altitude), ("secondary", fsm.secondary_deploy_altitude)):
        pre = f"chute.{name}."
        cd, spill = r.float(pre + "cd"), r.float(pre + "spill_ratio")
        material = r.str(pre + "material")
        if r.is_auto(pre + "diameter"):
            spec = _guard(
                pre + "target_v",
                size_for_descent,
                mass,
                r.float(pre + "target_v"),
                cd,
                env,
                spill,
                name=name,
                deploy_altitude=deploy,
                material=material,
            )
        else:
            r.used.add(pre + "target_v")
            spec = _guard(
                pre + "diameter",
                ParachuteSpec,
                name,
                r.float(pre + "diameter"),
                spill,
                cd,
                deploy,
                material,
            )
        problems = validate_spec(spec)
        if problems:
            raise ConfigError(pre + problems[0].field, problems[0].message)
        chutes[name] = spec

    battery = _guard(
        "battery",
        Battery,
        capacity=r.float("battery.capacity"),
        nominal_voltage=r.float("battery.nominal_voltage"),
    )
    eff = r.float("battery.regulator_efficiency")
    if not 0 < eff <= 1:
        raise ConfigError("battery.regulator_efficiency", f"must be in (0, 1], got {eff}")

    if r.is_auto("sensors.current_nominal"):
        current = battery_current(components, battery, eff)
    else:
        current = r.float("sensors.current_nominal")

    def noise(ch: str) -> NoiseSpec:
        return _guard(
            f"sensors.{ch}.sigma",
            NoiseSpec,
            bias=r.float(f"sensors.{ch}.bias"),
            sigma=r.float(f"sensors.{ch}.sigma"),
            seed=seed,
        )

    sensors = _guard(
        "sensors",
        SensorSuite,
        altimeter=noise("altimeter"),
        gas=noise("gas"),
        baseline_ppm=r.float("sensors.gas.baseline"),
        gps=noise("gps"),
        site_lat=r.float("sensors.site_lat"),
        site_lon=r.float("sensors.site_lon"),
        imu=noise("imu"),
        power=noise("power"),
        bus_voltage_nominal=r.float("sensors.bus_voltage"),
        current_nominal=current,
        current_sigma=r.float("sensors.current_sigma"),
    )
    link_seed = seed + 1 if r.is_auto("link.seed") else r.int("link.seed")
    link = _guard(
        "link",
        LinkModel,
        nominal_range=r.float("link.nominal_range"),
        clear_fraction=r.float("link.clear_fraction"),
        cutoff_fraction=r.float("link.cutoff_fraction"),
        seed=link_seed,
        corrupt_probability=r.float("link.corrupt_probability"),
    )
    ground_offset = r.float("link.ground_offset")
    if ground_offset < 0:
        raise ConfigError("link.ground_offset", "must be >= 0")

    cfg = MissionConfig(
        mission_id=r.str("mission.id"),
        start_timestamp=r.str("mission.start_timestamp"),
        seed=seed,
        dt=dt,
        cadence=cadence,
        sample_period=sample_period,
        ascent_rate=r.float("mission.ascent_rate"),
        prelaunch_hold=r.float("mission.prelaunch_hold"),
        max_duration=r.float("mission.max_duration"),
        fsm=fsm,
        env=env,
        body=body,
        primary=chutes["primary"],
        secondary=chutes["secondary"],
        sensors=sensors,
        temperature=TemperatureProfile(r.float("temperature.surface"), r.float("temperature.lapse")),
        link=link,
        ground_offset=ground_offset,
        components=components,
        battery=battery,
        regulator_efficiency=eff,
        can=_guard(
            "can",
            CanGeometry,
            height=r.float("can.height"),
            diameter=r.float("can.diameter"),
            wall_thickness=r.float("can.wall_thickness"),
        ),
        values=dict(values),
    )
    if cfg.ascent_rate <= 0:
        raise ConfigError("mission.ascent_rate", "must be > 0")
    if cfg.prelaunch_hold < 0:
        raise ConfigError("mission.prelaunch_hold", "must be >= 0")
    if cfg.max_duration <= 0:
        raise ConfigError("mission.max_duration", "must be > 0")
    unknown = sorted(set(values) - r.used)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    return cfg


def merge(base: dict[str, str], overrides: dict[str, str]) -> dict[str, str]:
    merged = dict(base)
    if any(k.startswith("component.") for k in overrides):
        merged = {k: v for k, v in merged.items() if not k.startswith("component.")}
    for k, v in overrides.items():
        if k not in merged and not k.startswith("component."):
            raise ConfigError(k, "unknown key")
        merged[k] = v
    return merged


def default_config() -> MissionConfig:
    return build_config(parse_config_text(default_config_text(), "default.cfg"))


def load_config(path) -> MissionConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(str(path), f"cannot read config: {e.strerror}") from None
    base = parse_config_text(default_config_text(), "default.cfg")
    return build_config(merge(base, parse_config_text(text, str(path))))


def fresh_sensors(cfg: MissionConfig) -> SensorSuite:
    return replace(cfg.sensors)


def fresh_link(cfg: MissionConfig) -> LinkModel:
    return replace(cfg.link)
