"""CSV and JSON serialization for trajectories and scattering results.

CSV layout: one ``# name=..., unit=...`` header line per column, then
plain numeric rows with 17 significant digits, so files round-trip
losslessly and remain plot-tool friendly.  Every emitted quantity carries
a unit tag; the Gaussian internal system is labelled explicitly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .engine import ScatteringResult, Trajectory

__all__ = [
    "trajectory_to_csv", "trajectory_to_dict",
    "scattering_to_dict", "rows_to_csv", "format_float",
]

GAUSSIAN_UNITS = {
    "t": "s", "r": "cm", "v": "cm/s", "force": "dyn",
    "p_mech": "g*cm/s", "p_canonical": "g*cm/s", "p_field": "g*cm/s",
    "energy": "erg", "angular_momentum": "g*cm^2/s",
    "impulse": "g*cm/s", "displacement": "cm", "deflection": "rad",
}


def format_float(x: float) -> str:
    return f"{x:.17g}"


def rows_to_csv(path, columns, rows):
    """Write rows with the per-column header convention.

    ``columns`` is a list of (name, unit) pairs; ``rows`` an iterable of
    numeric sequences.
    """
    path = Path(path)
    lines = [f"# name={name}, unit={unit}" for name, unit in columns]
    for row in rows:
        lines.append(",".join(format_float(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _ledger_columns(traj: Trajectory):
    cols = []
    for key in sorted(traj.ledgers):
        series = np.asarray(traj.ledgers[key])
        unit = GAUSSIAN_UNITS.get(key, "gaussian")
        if series.ndim == 1:
            cols.append((key, unit, lambda i, k=key: [traj.ledgers[k][i]]))
        else:
            cols.append((key, unit,
                         lambda i, k=key: list(traj.ledgers[k][i])))
    return cols


def trajectory_to_csv(traj: Trajectory, path) -> Path:
    """One row per sample time: time, per-body r and v, ledger series."""
    columns = [("t", GAUSSIAN_UNITS["t"])]
    for name in traj.system.dynamic:
        for ax in "xyz":
            columns.append((f"{name}_r{ax}", GAUSSIAN_UNITS["r"]))
        for ax in "xyz":
            columns.append((f"{name}_v{ax}", GAUSSIAN_UNITS["v"]))
    for key in sorted(traj.ledgers):
        series = np.asarray(traj.ledgers[key])
        unit = GAUSSIAN_UNITS.get(key, "gaussian")
        if series.ndim == 1:
            columns.append((key, unit))
        else:
            for ax in "xyz":
                columns.append((f"{key}_{ax}", unit))

    def row(i):
        out = [traj.times[i]]
        for name in traj.system.dynamic:
            out.extend(traj.states[name]["r"][i])
            out.extend(traj.states[name]["v"][i])
        for key in sorted(traj.ledgers):
            series = np.asarray(traj.ledgers[key])
            if series.ndim == 1:
                out.append(series[i])
            else:
                out.extend(series[i])
        return out

    return rows_to_csv(path, columns, (row(i) for i in range(len(traj.times))))


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "kind": traj.system.kind,
        "provider": traj.system.provider,
        "times": traj.times.tolist(),
        "bodies": {
            name: {"r": traj.states[name]["r"].tolist(),
                   "v": traj.states[name]["v"].tolist()}
            for name in traj.system.dynamic},
        "ledgers": {k: np.asarray(v).tolist() for k, v in traj.ledgers.items()},
        "stats": traj.stats,
        "units": "gaussian",
    }


def scattering_to_dict(result: ScatteringResult) -> dict:
    def clean(d):
        return {k: (np.asarray(v).tolist() if isinstance(v, np.ndarray) else v)
                for k, v in d.items()}
    return {
        "mode": result.mode,
        "impulses": clean(result.impulses),
        "displacements": clean(result.displacements),
        "deflections": clean(result.deflections),
        "error_estimates": json.loads(json.dumps(
            result.error_estimates, default=float)),
        "units": "gaussian",
    }
