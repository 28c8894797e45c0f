"""CSV and JSON report serialization.

Floats are printed with 17 significant digits in CSV and console output so
every value round-trips exactly; JSON numbers use the shortest exact
round-trip representation.  Reports embed the resolved run configuration,
so any report can be reproduced bit for bit from its own metadata.
"""

from __future__ import annotations

import json
from pathlib import Path

from .asymptotics import SweepReport

__all__ = [
    "SCHEMA_VERSION",
    "format_float",
    "sweep_csv",
    "sweep_json_document",
    "scalar_json_document",
    "spectrum_csv",
    "write_report",
]

SCHEMA_VERSION = "1"

CSV_HEADER = "param,lambda,reference,rel_error"


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _clean(value):
    """JSON-safe copy: floats normalized, numpy scalars unwrapped."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float):
        return float(format_float(value))
    return value


def sweep_csv(report: SweepReport) -> str:
    lines = [CSV_HEADER]
    for prm, lam, err in zip(report.parameters, report.eigenvalues,
                             report.relative_errors):
        lines.append(",".join(format_float(v)
                              for v in (prm, lam, report.reference, err)))
    return "\n".join(lines) + "\n"


def sweep_json_document(report: SweepReport, config: dict) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": report.kind,
        "k": report.k,
        "parameters": report.parameters,
        "eigenvalues": report.eigenvalues,
        "reference": report.reference,
        "extrapolated": report.extrapolated,
        "relative_errors": report.relative_errors,
        "grid": {"n": report.n, "h": report.h},
        "notes": report.notes,
        "mesh_refinement": report.mesh_refinement,
        "config": config,
    }
    return _clean(doc)


def scalar_json_document(kind: str, payload: dict, config: dict) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "config": config}
    doc.update(payload)
    return _clean(doc)


def spectrum_csv(eigenvalues) -> str:
    lines = ["k,lambda"]
    for k, lam in enumerate(eigenvalues, start=1):
        lines.append(f"{k},{format_float(lam)}")
    return "\n".join(lines) + "\n"


def write_report(base: str, fmt: str, csv_text: str | None, json_doc: dict):
    """Write <base>.csv / <base>.json per the requested format.

    Returns the list of paths written.
    """
    written = []
    if fmt in ("csv", "both") and csv_text is not None:
        path = Path(base).with_suffix(".csv")
        path.write_text(csv_text)
        written.append(str(path))
    if fmt in ("json", "both"):
        path = Path(base).with_suffix(".json")
        path.write_text(json.dumps(json_doc, indent=2, sort_keys=False) + "\n")
        written.append(str(path))
    return written
