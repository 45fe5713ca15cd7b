"""Command-line entry point.

Usage:
    cansat simulate --config mission.cfg --out run1 --seed 42
    cansat design-chute --mass 0.7276 --target-v 3 --cd 1.75 --spill-ratio 0.2
    cansat budget --config mission.cfg
    cansat decode --in downlink.raw --out decoded
    cansat replay-table4

Failures print a single ``ERROR <kind>: <message>`` line on stderr and exit
non-zero.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import budgets
from .config import ConfigError, default_config, load_config
from .descent import AirEnvironment
from .ground import ingest, persist, summarize, table4_fixture_bytes, validate_table4
from .mission import run_mission, write_artifacts
from .parachute import descent_rate, effective_area, size_for_descent, validate_spec


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = 1):
        super().__init__(message)
        self.kind = kind
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message.replace("\n", " "), 2)


def _config(path):
    return load_config(path) if path else default_config()


def cmd_simulate(args) -> int:
    cfg = _config(args.config)
    if args.seed is not None:
        cfg = cfg.with_overrides(**{"mission.seed": args.seed})
    result = run_mission(cfg, max_duration=args.duration, lossless=args.lossless)
    paths = write_artifacts(result, args.out)
    s = result.summary
    print(f"mission {cfg.mission_id}: {len(result.sent)} frames sent, {s.frame_count} received, "
          f"loss {s.loss_rate:.4f}, {s.error_count} decode errors")
    for tr in result.transitions:
        print(f"  t={tr.t:8.2f}s  {tr.from_mode.name} -> {tr.to_mode.name} at {tr.trigger_altitude:.2f} m")
    for b in s.descent_rate_estimates:
        print(f"  band {b.top:.0f}-{b.bottom:.0f} m: {b.rate:.2f} m/s ({b.samples} frames)")
    print(f"artifacts written to {Path(args.out)} ({len(paths)} files)")
    return 0


def cmd_design_chute(args) -> int:
    env = AirEnvironment()
    spec = size_for_descent(args.mass, args.target_v, args.cd, env, args.spill_ratio)
    print(f"canopy_diameter_m = {spec.canopy_diameter:.5f}")
    print(f"spill_hole_diameter_m = {spec.canopy_diameter * spec.spill_ratio:.5f}")
    print(f"effective_area_m2 = {effective_area(spec):.6f}")
    print(f"cd = {spec.cd}")
    print(f"descent_rate_m_s = {descent_rate(spec, args.mass, env):.4f}")
    for v in validate_spec(spec, guideline=True):
        print(f"note: {v}")
    return 0


def cmd_budget(args) -> int:
    cfg = _config(args.config)
    mass = budgets.total_mass(cfg.components)
    volume = budgets.can_volume(cfg.can)
    endurance = budgets.endurance_minutes(cfg.battery, cfg.components, cfg.regulator_efficiency)
    violations, notes = budgets.validate_rails(cfg.components)
    checks = [
        ("mass", math.isclose(mass, budgets.MASS_TARGET_G, abs_tol=1e-9),
         f"{mass:.1f} g (expected {budgets.MASS_TARGET_G} g)"),
        ("volume", abs(volume - budgets.VOLUME_TARGET_CM3) <= 0.01,
         f"{volume:.2f} cm3 (expected {budgets.VOLUME_TARGET_CM3} cm3)"),
        ("endurance", endurance >= budgets.ENDURANCE_TARGET_MIN,
         f"{endurance:.1f} min (need >= {budgets.ENDURANCE_TARGET_MIN:.0f} min)"),
        ("rails", not violations, "; ".join(map(str, violations)) or "all assignments match"),
    ]
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    for note in notes:
        print(f"note: {note}")
    failed = [name for name, ok, _ in checks if not ok]
    if failed:
        raise CliError("budget", f"failed checks: {', '.join(failed)}")
    return 0


def cmd_decode(args) -> int:
    src = Path(args.input)
    try:
        data = src.read_bytes()
    except OSError as e:
        raise CliError("io", f"cannot read {src}: {e.strerror}") from None
    log = ingest(data, meta={"source": src.name})
    persist(log, args.out)
    s = summarize(log)
    print(f"{s.frame_count} frames, {s.error_count} errors, loss {s.loss_rate:.4f}")
    counts: dict[str, int] = {}
    for _, cat in log.errors:
        counts[cat.value] = counts.get(cat.value, 0) + 1
    for cat, n in sorted(counts.items()):
        print(f"  {cat}: {n}")
    return 0


def cmd_replay_table4(args) -> int:
    log = ingest(table4_fixture_bytes(), meta={"source": "table4"})
    if args.out:
        persist(log, args.out)
    checks = validate_table4(log)
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}")
    failed = [c.name for c in checks if not c.ok]
    if failed:
        raise CliError("replay", f"failed checks: {', '.join(failed)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cansat", description="CanSat drop-mission simulator and ground station")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("simulate", help="fly a full mission and write ground-station artifacts")
    sp.add_argument("--config", help="mission config file (defaults to the bundled config)")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--duration", type=float, help="stop after this many seconds")
    sp.add_argument("--lossless", action="store_true", help="bypass the radio loss model")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("design-chute", help="size a spill-hole canopy for a descent rate")
    sp.add_argument("--mass", type=float, required=True, help="kg")
    sp.add_argument("--target-v", type=float, required=True, help="m/s")
    sp.add_argument("--cd", type=float, default=1.75)
    sp.add_argument("--spill-ratio", type=float, default=0.2)
    sp.set_defaults(func=cmd_design_chute)

    sp = sub.add_parser("budget", help="mass, volume, endurance and rail checks")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_budget)

    sp = sub.add_parser("decode", help="decode a raw downlink capture")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("replay-table4", help="replay the published flight table")
    sp.add_argument("--out", help="also persist the decoded log here")
    sp.set_defaults(func=cmd_replay_table4)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as e:
        print(f"ERROR {e.kind}: {e}", file=sys.stderr)
        return e.code
    except ConfigError as e:
        print(f"ERROR config: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"ERROR io: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"ERROR value: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
