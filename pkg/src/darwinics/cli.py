"""Command-line front end.

Subcommands: ``run`` (integrate or scatter a scenario), ``sweep``
(grid of scattering runs), ``phase`` (closed-loop and composite phase
tables), ``estimates`` (order-of-magnitude report), ``validate``
(scenario check only).  Exit codes: 0 success, 2 validation error,
3 numeric failure.  Set DARWINICS_LOG=debug|info|warning for verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bodies import LineCharge, LineSolenoid
from .engine import integrate, ledger_report, scattering_run
from .errors import DarwinicsError, ScenarioError
from .estimates import (SolenoidExperiment, neutron_preset, neutron_report,
                        solenoid_experiment_report)
from .io import format_float, rows_to_csv, scattering_to_dict, \
    trajectory_to_csv, trajectory_to_dict
from .phases import PolyPath, ab_phase, ac_phase, composite_force_phase
from .scenario import Scenario, build_system, load_scenario
from .units import Units

log = logging.getLogger("darwinics")


def _setup_logging():
    level = os.environ.get("DARWINICS_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def parse_angle_value(text: str) -> float:
    """Parse plain floats plus 'pi'-suffixed shorthands like '2pi'."""
    text = text.strip().lower()
    if text.endswith("pi"):
        head = text[:-2]
        factor = 1.0 if head in ("", "+") else -1.0 if head == "-" \
            else float(head)
        return factor * np.pi
    return float(text)


def _resolved_scenario_dict(scn: Scenario) -> dict:
    resolved = dict(scn.raw)
    resolved["system"] = scn.system
    resolved["mode"] = scn.mode
    resolved.setdefault("units", {"system": "gaussian"})
    resolved["units"] = {**resolved["units"],
                         "c": scn.units.c, "hbar": scn.units.hbar}
    resolved["integrator"] = dict(scn.integrator)
    if scn.scattering:
        resolved["scattering"] = dict(scn.scattering)
    resolved["outputs"] = list(scn.outputs)
    resolved["seed"] = scn.seed
    resolved["effective_length"] = scn.effective_length
    return resolved


def _write_manifest(out_dir: Path, scn: Scenario, outputs: list[str],
                    ledger_summary: dict) -> Path:
    manifest = {
        "scenario": _resolved_scenario_dict(scn),
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "outputs": outputs,
        "ledger_summary": ledger_summary,
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, default=float) + "\n")
    return path


def cmd_run(args) -> int:
    scn = load_scenario(args.scenario)
    if args.tol is not None:
        scn.integrator["tol"] = args.tol
    if args.seed is not None:
        scn.seed = args.seed
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[str] = []
    ledger_summary: dict = {}

    if "trajectory" in scn.outputs:
        system = build_system(scn)
        traj = integrate(system, scn.integrator["t0"], scn.integrator["t1"],
                         tol=scn.integrator["tol"],
                         n_samples=int(scn.integrator["samples"]))
        ledger_summary = ledger_report(traj)
        csv_path = trajectory_to_csv(traj, out_dir / "trajectory.csv")
        outputs.append(str(csv_path))
        if args.format == "json":
            jpath = out_dir / "trajectory.json"
            jpath.write_text(json.dumps(trajectory_to_dict(traj),
                                        default=float) + "\n")
            outputs.append(str(jpath))
        log.info("trajectory written to %s", csv_path)

    if "scattering" in scn.outputs:
        system = build_system(scn)
        result = scattering_run(system, mode=scn.scattering["mode"],
                                window_factor=scn.scattering["window_factor"],
                                tol=scn.integrator["tol"])
        spath = out_dir / "scattering.json"
        spath.write_text(json.dumps(scattering_to_dict(result),
                                    default=float, indent=2) + "\n")
        outputs.append(str(spath))
        log.info("scattering result written to %s", spath)

    manifest = _write_manifest(out_dir, scn, outputs, ledger_summary)
    print(f"wrote {len(outputs)} output file(s); manifest: {manifest}")
    return 0


def _sweep_point(payload):
    """Worker for one sweep grid point (module-level for pickling)."""
    raw, mode, parameter, value = payload
    scn = load_scenario(raw)
    _apply_sweep_parameter(scn, parameter, value)
    system = build_system(scn, mode=mode)
    result = scattering_run(system, mode=scn.scattering["mode"],
                            window_factor=scn.scattering["window_factor"],
                            tol=scn.integrator["tol"])
    return scattering_to_dict(result)


def _apply_sweep_parameter(scn: Scenario, parameter: str, value: float):
    movers = {"feynman": "body1", "mott-schwinger": "charge", "ab": "charge",
              "ac": "dipole"}
    mover = movers[scn.system]
    if parameter == "impact_parameter":
        body = scn.bodies[mover]
        r = body.r.copy()
        r[1] = value
        scn.bodies[mover] = body.with_state(r, body.v)
    elif parameter == "speed":
        body = scn.bodies[mover]
        v = body.v / np.linalg.norm(body.v) * value
        scn.bodies[mover] = body.with_state(body.r, v)
    elif parameter == "flux" and scn.system == "ab":
        s = scn.bodies["solenoid"]
        scn.bodies["solenoid"] = LineSolenoid(
            flux=value, axis_point=s.axis_point,
            mass_per_length=s.mass_per_length, v=s.v)
    elif parameter == "lam" and scn.system == "ac":
        w = scn.bodies["wire"]
        scn.bodies["wire"] = LineCharge(
            lam=value, axis_point=w.axis_point,
            mass_per_length=w.mass_per_length, v=w.v)
    else:
        raise ScenarioError(f"sweep parameter {parameter!r} not supported "
                            f"for system {scn.system!r}", field="sweep.parameter")


def cmd_sweep(args) -> int:
    scn = load_scenario(args.scenario)
    if scn.sweep is None:
        raise ScenarioError("scenario has no sweep block", field="sweep")
    if not scn.scattering:
        scn.scattering = {"mode": "impulse-approx", "window_factor": 200.0}
    if args.tol is not None:
        scn.integrator["tol"] = args.tol
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    parameter = scn.sweep["parameter"]
    grid = [(mode, float(value)) for value in scn.sweep["values"]
            for mode in scn.sweep["modes"]]
    raw = _resolved_scenario_dict(scn)
    payloads = [(raw, mode, parameter, value) for mode, value in grid]
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sweep_point, payloads))
    else:
        results = [_sweep_point(p) for p in payloads]

    body_names = sorted(results[0]["impulses"])
    columns = [(parameter, "scenario-units"), ("mode_index", "enum")]
    for name in body_names:
        for ax in "xyz":
            columns.append((f"{name}_impulse_{ax}", "g*cm/s"))
        for ax in "xyz":
            columns.append((f"{name}_displacement_{ax}", "cm"))
        columns.append((f"{name}_deflection", "rad"))
    mode_order = list(dict.fromkeys(m for m, _ in grid))
    rows = []
    for (mode, value), res in zip(grid, results):
        row = [value, float(mode_order.index(mode))]
        for name in body_names:
            row.extend(res["impulses"].get(name, [np.nan] * 3))
            row.extend(res["displacements"].get(name, [np.nan] * 3))
            row.append(res["deflections"].get(name, np.nan))
        rows.append(row)
    csv_path = rows_to_csv(out_dir / "sweep.csv", columns, rows)
    legend = {str(i): m for i, m in enumerate(mode_order)}
    manifest = _write_manifest(out_dir, scn, [str(csv_path)],
                               {"mode_legend": legend, "n_rows": len(rows)})
    print(f"wrote {len(rows)} sweep rows to {csv_path}; manifest: {manifest}")
    return 0


def _circle_path(radius: float, winding: int, n: int = 64) -> PolyPath:
    turns = abs(winding)
    theta = np.linspace(0, 2 * np.pi * turns, n * max(turns, 1),
                        endpoint=False)
    if winding < 0:
        theta = -theta
    return PolyPath([(radius * np.cos(t), radius * np.sin(t), 0.0)
                     for t in theta])


def cmd_phase(args) -> int:
    units = Units(c=args.c, hbar=args.hbar)
    rows = []
    if args.which == "ab":
        s = LineSolenoid(flux=args.flux)
        res = ab_phase(_circle_path(args.radius, args.winding), s, args.q,
                       units)
        reference = args.winding * args.q * args.flux / (units.hbar * units.c)
        rows = [("phase", res.phase, reference),
                ("kinetic_part", res.kinetic_part, 0.0),
                ("vector_part", res.vector_part, reference)]
    elif args.which == "ac":
        w = LineCharge(lam=args.lam)
        res = ac_phase(_circle_path(args.radius, args.winding), w,
                       [0, 0, args.mu], units)
        reference = args.winding * 4 * np.pi * args.lam * args.mu \
            / (units.hbar * units.c)
        rows = [("phase", res.phase, reference),
                ("kinetic_part", res.kinetic_part, 0.0),
                ("vector_part", res.vector_part, reference)]
    elif args.which == "composite":
        w = LineCharge(lam=args.lam)
        rep = composite_force_phase(w, args.mu, mass=args.mass,
                                    speed=args.speed,
                                    impact_parameter=args.b, units=units)
        arm_ref = rep["closed_form_arm_magnitude"]
        rows = [
            ("upper_arm_force_part", rep["upper"].force_part, -arm_ref),
            ("lower_arm_force_part", rep["lower"].force_part, arm_ref),
            ("difference", rep["difference"], rep["closed_form_difference"]),
        ]
    if args.format == "json":
        print(json.dumps({name: {"computed": val, "closed_form": ref}
                          for name, val, ref in rows}, indent=2))
    else:
        print(f"{'quantity':<24}{'computed (rad)':>24}"
              f"{'closed form (rad)':>24}")
        for name, val, ref in rows:
            print(f"{name:<24}{format_float(val):>24}"
                  f"{format_float(ref):>24}")
    return 0


def cmd_estimates(args) -> int:
    if args.preset == "mollenstedt-bayh":
        report = solenoid_experiment_report()
    elif args.preset == "neutron":
        report = neutron_report(neutron_preset())
    else:
        missing = [name for name in ("energy_ev", "loop_diameter",
                                     "interaction_length", "wire_diameter",
                                     "current", "carrier_density",
                                     "temperature")
                   if getattr(args, name) is None]
        if missing:
            print(f"error: custom preset needs --{missing[0].replace('_', '-')}",
                  file=sys.stderr)
            return 2
        report = solenoid_experiment_report(SolenoidExperiment(
            electron_energy_ev=args.energy_ev,
            loop_diameter=args.loop_diameter,
            interaction_length=args.interaction_length,
            wire_diameter=args.wire_diameter,
            current=args.current,
            carrier_density=args.carrier_density,
            temperature=args.temperature))
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_table())
    return 0


def cmd_validate(args) -> int:
    scn = load_scenario(args.scenario)
    build_system(scn)
    print(f"ok: {scn.system} / {scn.mode}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darwinics",
        description="order-(v/c)^2 charge/flux-line dynamics: runs, sweeps, "
                    "phases, and estimates")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common_io(p):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=None,
                       help="integrator tolerance override")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_run = sub.add_parser("run", help="execute a scenario file")
    p_run.add_argument("scenario")
    common_io(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scenario's sweep block")
    p_sweep.add_argument("scenario")
    common_io(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_phase = sub.add_parser("phase", help="phase tables")
    p_phase.add_argument("which", choices=("ab", "ac", "composite"))
    p_phase.add_argument("--flux", type=parse_angle_value, default=2 * np.pi)
    p_phase.add_argument("--q", type=float, default=1.0)
    p_phase.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p_phase.add_argument("--mu", type=float, default=1.0)
    p_phase.add_argument("--winding", type=int, default=1)
    p_phase.add_argument("--radius", type=float, default=1.0)
    p_phase.add_argument("--b", type=float, default=1.0,
                         help="composite-arm impact parameter")
    p_phase.add_argument("--speed", type=float, default=0.5)
    p_phase.add_argument("--mass", type=float, default=1.0)
    p_phase.add_argument("--c", type=float, default=1.0)
    p_phase.add_argument("--hbar", type=float, default=1.0)
    p_phase.add_argument("--format", choices=("csv", "json", "table"),
                         default="table")
    p_phase.set_defaults(func=cmd_phase)

    p_est = sub.add_parser("estimates", help="order-of-magnitude report")
    p_est.add_argument("preset",
                       choices=("mollenstedt-bayh", "neutron", "custom"))
    p_est.add_argument("--energy-ev", dest="energy_ev", type=float)
    p_est.add_argument("--loop-diameter", dest="loop_diameter", type=float)
    p_est.add_argument("--interaction-length", dest="interaction_length",
                       type=float)
    p_est.add_argument("--wire-diameter", dest="wire_diameter", type=float)
    p_est.add_argument("--current", type=float)
    p_est.add_argument("--carrier-density", dest="carrier_density", type=float)
    p_est.add_argument("--temperature", type=float)
    p_est.add_argument("--format", choices=("table", "json"), default="table")
    p_est.set_defaults(func=cmd_estimates)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("scenario")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except DarwinicsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
