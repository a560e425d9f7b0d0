import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from inertia_eval.report import (
    InertiaReport,
    ReportRow,
    emit,
    file_digest,
    fnv1a64,
    merge,
    schema,
)

DOCS_SCHEMA = Path(__file__).parents[1] / "docs" / "report_schema.json"


def sample_report():
    report = InertiaReport(metadata={"command": "bleu", "config": {"seed": 0}})
    report.add("base", "bleu", 27.62, (26.5, 28.7), {"hyp.txt": "0" * 16})
    report.add("base", "stability", 72.48)
    return report


def test_fnv_known_vectors():
    assert fnv1a64(b"") == "cbf29ce484222325"
    assert fnv1a64(b"a") == "af63dc4c8601ec8c"
    assert fnv1a64(b"foobar") == "85944171f73967e8"


def test_fnv_backends_agree(kernels):
    data = bytes(range(256)) * 3
    from inertia_eval import _pykernels

    assert kernels.fnv1a64(data) == _pykernels.fnv1a64(data)


def test_file_digest(tmp_path):
    path = tmp_path / "f"
    path.write_bytes(b"a")
    assert file_digest(path) == "af63dc4c8601ec8c"


def test_json_roundtrip():
    report = sample_report()
    text = emit(report, "json")
    assert InertiaReport.from_json(text) == report
    assert emit(InertiaReport.from_json(text), "json") == text


def test_json_validates_against_schema():
    jsonschema.validate(json.loads(emit(sample_report(), "json")), schema())


def test_docs_schema_is_packaged_schema():
    assert json.loads(DOCS_SCHEMA.read_text()) == schema()


def test_schema_rejects_bad_documents():
    doc = json.loads(emit(sample_report(), "json"))
    doc["schema_version"] = 2
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema())
    doc = json.loads(emit(sample_report(), "json"))
    doc["rows"][0]["metric"] = "ter"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema())


def test_markdown_shows_half_width():
    text = emit(sample_report(), "markdown")
    assert "| base | bleu | 27.6200 ±1.1000 |" in text
    assert "| base | stability | 72.4800 |" in text


def test_csv():
    rows = list(csv.reader(io.StringIO(emit(sample_report(), "csv"))))
    assert rows[0] == ["system", "metric", "value", "ci_low", "ci_high"]
    assert rows[1] == ["base", "bleu", "27.62", "26.5", "28.7"]
    assert rows[2] == ["base", "stability", "72.48", "", ""]


def test_empty_report_and_unknown_inputs():
    with pytest.raises(ValueError, match="empty"):
        emit(InertiaReport(), "json")
    with pytest.raises(ValueError, match="unknown metric"):
        ReportRow("s", "ter", 1.0)
    with pytest.raises(ValueError, match="unknown format"):
        emit(sample_report(), "xml")
    with pytest.raises(ValueError, match="schema_version"):
        InertiaReport.from_dict({"schema_version": 9, "rows": []})


def test_row_order_is_insertion_order():
    report = InertiaReport()
    for metric in ("nfr", "bleu", "complexity"):
        report.add("s", metric, 0.5)
    assert [r["metric"] for r in json.loads(emit(report))["rows"]] == ["nfr", "bleu", "complexity"]


def test_merge_keeps_rows_and_runs():
    a, b = sample_report(), InertiaReport(metadata={"command": "flips"})
    b.add("new", "nfr", 0.074)
    merged = merge([a, b])
    assert [r.metric for r in merged.rows] == ["bleu", "stability", "nfr"]
    assert merged.metadata["runs"][1] == {"command": "flips"}
    jsonschema.validate(merged.to_dict(), schema())
