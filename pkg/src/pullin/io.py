"""Result files.

Tables are written as CSV through `astropy.io.ascii`, with the schema name in
a leading comment line; summaries are JSON with sorted keys so that identical
runs produce identical files.
"""

import json
from pathlib import Path

from astropy.io import ascii
from astropy.table import Table
import numpy as np

from pullin.energy import energy_equality_monitor
from pullin.evolution.stepper import touchdown_time

TRACE_SCHEMA = "pullin-trace/1"
SUMMARY_SCHEMA = "pullin-summary/1"
TRACE_COLUMNS = (
    "t",
    "min_u",
    "max_u",
    "norm_proxy",
    "l2_norm",
    "E_m",
    "E_e",
    "E",
    "dissipation",
    "drift",
    "G_L1",
)


def _write_table(table, path, schema):
    table.meta["comments"] = [f"schema: {schema}"]
    ascii.write(table, Path(path), format="csv", comment="# ", overwrite=True)


def trace_table(trace):
    """Per-sample columns of a simulation trace; energies are NaN where missing."""
    drift = iter(energy_equality_monitor(trace))
    rows = []
    for s in trace.samples:
        e = s.energy
        if e is None:
            energies = (np.nan,) * 5
        else:
            energies = (e.e_mech, e.e_elec, e.e_total, e.dissipation, next(drift))
        rows.append(
            (s.t, s.min_u, s.max_u, s.norm_proxy, s.l2_norm, *energies, s.G_l1)
        )
    if not rows:
        return Table(names=TRACE_COLUMNS)
    return Table(rows=rows, names=TRACE_COLUMNS)


def write_trace(trace, path):
    _write_table(trace_table(trace), path, TRACE_SCHEMA)


def read_table(path):
    """Reads any table written by this module; the schema comment lands in ``meta``."""
    return ascii.read(Path(path), format="csv", comment=r"\s*#")


def summary(trace):
    p = trace.parameters
    return {
        "schema": SUMMARY_SCHEMA,
        "status": trace.status.label,
        "reason": trace.reason,
        "touchdown_time": touchdown_time(trace),
        "final_time": trace.final_time,
        "steps": trace.steps,
        "parameters": p.to_dict() if p is not None else None,
        "resolution": trace.resolution,
        "bound_violations": [
            {"t": t, "bounds": names} for t, names in trace.bound_violations
        ],
    }


def write_json(data, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def write_summary(trace, path):
    write_json(summary(trace), path)


def write_sweep(result, path, extra=None):
    data = result.to_dict()
    if extra:
        data.update(extra)
    write_json(data, path)


def write_spectrum(spectrum, path):
    _write_table(spectrum.to_table(), path, "pullin-spectrum/1")


def write_potential(phi, path):
    """Dumps a potential with columns ``i, j, k, value``."""
    i, j, k = np.indices(phi.values.shape)
    table = Table(
        [i.ravel(), j.ravel(), k.ravel(), phi.values.ravel()],
        names=("i", "j", "k", "value"),
    )
    _write_table(table, path, "pullin-phi/1")


def write_plate_field(v, path):
    """Dumps a plate field with columns ``i, j, value``, boundary ring included."""
    i, j = np.indices(v.full.shape)
    table = Table([i.ravel(), j.ravel(), v.full.ravel()], names=("i", "j", "value"))
    _write_table(table, path, "pullin-plate-field/1")
