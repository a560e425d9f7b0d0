"""Metric reports: JSON (schema version 1), Markdown and CSV renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import _kernels

SCHEMA_VERSION = 1
METRICS = ("bleu", "consistency", "robustness", "stability", "exact_match", "nfr", "nfi", "complexity")
FORMATS = ("json", "markdown", "csv")


def fnv1a64(data: bytes) -> str:
    """64-bit FNV-1a of ``data`` as 16 hex digits."""
    return f"{_kernels.fnv1a64(data):016x}"


def file_digest(path: str | Path) -> str:
    return fnv1a64(Path(path).read_bytes())


@dataclass(frozen=True)
class ReportRow:
    system: str
    metric: str
    value: float
    ci: tuple[float, float] | None = None
    digests: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if self.ci is not None:
            object.__setattr__(self, "ci", (float(self.ci[0]), float(self.ci[1])))
        object.__setattr__(self, "value", float(self.value))

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "metric": self.metric,
            "value": self.value,
            "ci": None if self.ci is None else {"low": self.ci[0], "high": self.ci[1]},
            "digests": dict(self.digests),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReportRow":
        ci = data.get("ci")
        return cls(
            system=data["system"],
            metric=data["metric"],
            value=data["value"],
            ci=None if ci is None else (ci["low"], ci["high"]),
            digests=dict(data.get("digests", {})),
        )


@dataclass
class InertiaReport:
    rows: list[ReportRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, system: str, metric: str, value: float, ci=None, digests=None) -> ReportRow:
        row = ReportRow(system, metric, value, ci, dict(digests or {}))
        self.rows.append(row)
        return row

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "rows": [row.to_dict() for row in self.rows],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InertiaReport":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        return cls([ReportRow.from_dict(r) for r in data["rows"]], dict(data.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "InertiaReport":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, InertiaReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _markdown(report: InertiaReport) -> str:
    lines = ["| system | metric | value |", "|---|---|---|"]
    for row in report.rows:
        value = _fmt(row.value)
        if row.ci is not None:
            value += f" ±{_fmt((row.ci[1] - row.ci[0]) / 2.0)}"
        lines.append(f"| {row.system} | {row.metric} | {value} |")
    return "\n".join(lines) + "\n"


def _csv(report: InertiaReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["system", "metric", "value", "ci_low", "ci_high"])
    for row in report.rows:
        ci = [repr(v) for v in row.ci] if row.ci is not None else ["", ""]
        writer.writerow([row.system, row.metric, repr(row.value), *ci])
    return buf.getvalue()


def emit(report: InertiaReport, format: str = "json") -> str:
    """Serialize ``report``; row order is insertion order."""
    if not report.rows:
        raise ValueError("cannot emit an empty report")
    for row in report.rows:
        if row.metric not in METRICS:
            raise ValueError(f"unknown metric {row.metric!r}")
    if format == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if format == "markdown":
        return _markdown(report)
    if format == "csv":
        return _csv(report)
    raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")


def merge(reports: list[InertiaReport]) -> InertiaReport:
    """Concatenate rows of several runs, keeping each run's metadata."""
    merged = InertiaReport(metadata={"runs": [r.metadata for r in reports]})
    for r in reports:
        merged.rows.extend(r.rows)
    return merged


def schema() -> dict:
    return json.loads((Path(__file__).parent / "report_schema.json").read_text(encoding="utf-8"))
