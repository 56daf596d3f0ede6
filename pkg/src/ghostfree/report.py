"""Verification records and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class VerificationReport:
    check_name: str
    residual: float
    tolerance: float
    passed: bool
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name: str, residual: float, tolerance: float, metadata=None) -> "VerificationReport":
        residual = float(residual)
        if not math.isfinite(residual):
            raise ValueError(f"{name}: non-finite residual")
        return cls(name, residual, float(tolerance), residual <= tolerance, dict(metadata or {}))

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "metadata": to_jsonable(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        return cls(data["check_name"], data["residual"], data["tolerance"], data["passed"], data.get("metadata", {}))


def to_jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps_reports(reports) -> str:
    payload = [r.to_dict() for r in reports]
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    text = obj if isinstance(obj, str) else json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows) -> Path:
    """CSV with a header row, UTF-8, LF line endings, floats at 17 significant digits."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


REPORT_COLUMNS = ("check_name", "residual", "tolerance", "passed")


def write_report_csv(path, reports) -> Path:
    return write_csv(path, REPORT_COLUMNS, [(r.check_name, r.residual, r.tolerance, str(r.passed).lower()) for r in reports])


def summary_line(report: VerificationReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return f"{status} {report.check_name}: residual={report.residual:.3e} tol={report.tolerance:.1e}"
