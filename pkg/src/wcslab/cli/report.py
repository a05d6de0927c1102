"""Deterministic report and CSV writers.

Nothing time- or host-dependent is written: the provenance block holds the
config hash, the seed and the package version only. Floats carry 17
significant digits so that a CSV round-trips exactly.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from pathlib import Path

import numpy as np

from .. import __version__
from ..verdict import jsonable

__all__ = ["SEED", "format_value", "write_csv", "write_report"]

SEED = 0


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        if z.imag == 0:
            return format_value(z.real)
        return f"{format_value(z.real)}{'+' if z.imag >= 0 else '-'}{format_value(abs(z.imag))}j"
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    if x is None:
        return ""
    if isinstance(x, enum.Enum):
        return format_value(x.value)
    return str(x)


def write_csv(path: Path, table, config_hash: str) -> None:
    buf = io.StringIO()
    buf.write(f"# config_hash: {config_hash}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([format_value(x) for x in row])
    path.write_text(buf.getvalue())


def build_report(cfg, exp, outcome, table_names) -> dict:
    checks = []
    for c in outcome.checks:
        checks.append(
            {
                "label": c.label,
                "expected": c.expected.value if c.expected is not None else None,
                "match": None if (c.expected is None or not c.verdict.definite) else not c.mismatch,
                "verdict": c.verdict.as_dict(),
            }
        )
    mismatches = [c.label for c in outcome.checks if c.mismatch]
    return jsonable(
        {
            "experiment": exp.id,
            "anchor": exp.anchor,
            "provenance": {"config_hash": cfg.config_hash, "seed": SEED, "version": __version__},
            "config": {k: v for k, v in cfg.raw.items() if k != "output"},
            "grids": cfg.grids.as_dict(),
            "checks": checks,
            "mismatches": mismatches,
            "status": "mismatch" if mismatches else "ok",
            "tables": sorted(table_names),
        }
    )


def write_report(out_dir: Path, cfg, exp, outcome) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, table in sorted(outcome.tables.items()):
        write_csv(out_dir / name, table, cfg.config_hash)
    report = build_report(cfg, exp, outcome, outcome.tables)
    (out_dir / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n")
    return report
