"""End-to-end drop mission: truth simulation, on-board software, downlink and
ground station, all on one fixed-step clock.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .config import MissionConfig, fresh_link, fresh_sensors
from .descent import VehicleState, step_descent
from .fsm import Buzzer, FlightMode, FlightStateMachine, Transition
from .ground import MissionLog, MissionSummary, emit_plot_data, ingest, persist, summarize
from .link import ChannelEvent, Outcome
from .telemetry import TelemetryFrame, emission_due, encode_frame

_DESCENT = (FlightMode.PRIMARY_DESCENT, FlightMode.SECONDARY_DESCENT)


@dataclass
class MissionResult:
    sent: list[TelemetryFrame]
    channel: list[ChannelEvent]
    downlink: bytes
    log: MissionLog
    summary: MissionSummary
    transitions: list[Transition]
    final_state: VehicleState
    chirps: int = 0
    truth: list[tuple[float, float, float]] = field(default_factory=list, repr=False)  # (t, altitude, v) per frame


def run_mission(cfg: MissionConfig, max_duration: float | None = None, lossless: bool = False) -> MissionResult:
    """Fly the configured mission until landing or ``max_duration`` seconds.

    ``lossless`` bypasses the radio model so every frame arrives intact.
    """
    dt = cfg.dt
    limit_steps = round((max_duration if max_duration is not None else cfg.max_duration) / dt)
    hold_steps = round(cfg.prelaunch_hold / dt)
    chute_specs = {"primary": cfg.primary, "secondary": cfg.secondary}

    fsm = FlightStateMachine(cfg.fsm)
    sensors = fresh_sensors(cfg)
    link = fresh_link(cfg)
    state = VehicleState(t=0.0, altitude=0.0, v=0.0)

    sent: list[TelemetryFrame] = []
    events: list[ChannelEvent] = []
    received = bytearray()
    truth = []
    readings = None
    last_emit: float | None = None
    launch_step = 0
    chirps = 0

    k = 0
    while True:
        t = k * dt
        if fsm.mode is FlightMode.PRELAUNCH and k >= hold_steps:
            fsm.trigger_launch(t)
            launch_step = k
        if fsm.mode is FlightMode.ASCENT:
            alt = min(cfg.fsm.release_altitude, cfg.ascent_rate * (k - launch_step) * dt)
            state = replace(state, altitude=alt, v=cfg.ascent_rate)
            if alt >= cfg.fsm.release_altitude:
                # carrier hovers at release height before the drop
                fsm.trigger_release(t, alt)
                state = replace(state, v=0.0)
        state = replace(state, t=t, mode=fsm.mode, active_chutes=frozenset(fsm.active_chutes()))

        if k % cfg.steps_per_sample == 0:
            readings = sensors.sample(state, cfg.env, fsm.stabilization_active())
            fsm.on_altitude_sample(readings.derived_altitude, t)
            state = replace(state, mode=fsm.mode)

        if last_emit is None or emission_due(last_emit, t, cfg.cadence):
            last_emit = t
            frame = TelemetryFrame(
                seq=len(sent),
                t=t,
                mode=fsm.mode,
                lat=readings.lat,
                lon=readings.lon,
                temp=cfg.temperature(state),
                pressure=readings.pressure,
                altitude=readings.derived_altitude,
                rot_x=readings.rot_x,
                rot_y=readings.rot_y,
                rot_z=readings.rot_z,
                acc_x=readings.acc_x,
                acc_y=readings.acc_y,
                acc_z=readings.acc_z,
                ppm=readings.ppm,
                power=readings.power,
            )
            line = encode_frame(frame)
            distance = math.hypot(cfg.ground_offset, state.altitude)
            if lossless:
                ev = ChannelEvent(frame.seq, Outcome.DELIVERED, distance, line)
            else:
                ev = link.transmit(line, distance)
            sent.append(frame)
            events.append(ev)
            truth.append((t, state.altitude, state.v))
            received += ev.payload
            if fsm.buzzer_pattern(frame_just_sent=True) is Buzzer.CHIRP:
                chirps += 1

        if fsm.mode is FlightMode.LANDED or k >= limit_steps:
            break
        if fsm.mode in _DESCENT:
            chutes = [chute_specs[name] for name in fsm.active_chutes()]
            state = step_descent(state, cfg.body, chutes, cfg.env, dt)
        k += 1

    meta = {
        "mission_id": cfg.mission_id,
        "start_timestamp": cfg.start_timestamp,
        "seed": cfg.seed,
        "config": cfg.snapshot(),
    }
    log = ingest(bytes(received), meta=meta)
    return MissionResult(
        sent=sent,
        channel=events,
        downlink=bytes(received),
        log=log,
        summary=summarize(log),
        transitions=list(fsm.events),
        final_state=state,
        chirps=chirps,
        truth=truth,
    )


def write_artifacts(result: MissionResult, out_dir) -> dict[str, Path]:
    out = Path(out_dir)
    paths = persist(result.log, out)
    paths["downlink"] = out / "downlink.raw"
    paths["downlink"].write_bytes(result.downlink)

    paths["events"] = out / "events.csv"
    with open(paths["events"], "w", newline="", encoding="ascii") as fh:
        fh.write("t,from_mode,to_mode,trigger_altitude\n")
        for tr in result.transitions:
            fh.write(f"{tr.t:.2f},{tr.from_mode.name},{tr.to_mode.name},{tr.trigger_altitude:.2f}\n")

    paths["channel"] = out / "channel.csv"
    with open(paths["channel"], "w", newline="", encoding="ascii") as fh:
        fh.write("seq,outcome,distance\n")
        for ev in result.channel:
            fh.write(f"{ev.seq},{ev.outcome.value},{ev.distance:.2f}\n")

    paths["summary"] = out / "summary.json"
    summary = result.summary.to_dict()
    summary["frames_sent"] = len(result.sent)
    summary["buzzer_chirps"] = result.chirps
    summary["transitions"] = [
        {"t": tr.t, "from": tr.from_mode.name, "to": tr.to_mode.name, "altitude": tr.trigger_altitude}
        for tr in result.transitions
    ]
    paths["summary"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="ascii")

    for channel in ("altitude", "ppm"):
        paths[f"plot_{channel}"] = emit_plot_data(result.log, channel, out / f"plot_{channel}.csv")
    return paths
