"""Report assembly and serialization (CSV rows + JSON summary)."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Verdict", "Report"]


@dataclass(frozen=True)
class Verdict:
    """One named pass/fail check with its tolerance and observed error."""

    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: max_error={self.max_error:.3e}"
                f" tolerance={self.tolerance:.3e}"
                + (f" ({self.detail})" if self.detail else ""))


@dataclass
class Report:
    """Experiment output: config echo, data rows, verdicts, summary."""

    verb: str
    config: dict
    rows: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_passed else 1

    def add_verdict(self, name: str, max_error: float, tolerance: float,
                    detail: str = "", passed: bool | None = None) -> Verdict:
        if passed is None:
            passed = max_error <= tolerance
        v = Verdict(name, bool(passed), float(max_error), float(tolerance), detail)
        self.verdicts.append(v)
        return v

    def write_csv(self, path: str) -> None:
        fieldnames: list[str] = []
        for row in self.rows:
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _fmt(v) for k, v in row.items()})

    def write_json(self, path: str) -> None:
        payload = {
            "verb": self.verb,
            "config": self.config,
            "summary": _jsonable(self.summary),
            "verdicts": [
                {"name": v.name, "passed": v.passed, "max_error": v.max_error,
                 "tolerance": v.tolerance, "detail": v.detail}
                for v in self.verdicts
            ],
            "all_passed": self.all_passed,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.12e}"
    if isinstance(value, (np.floating,)):
        return f"{float(value):.12e}"
    return value


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj
