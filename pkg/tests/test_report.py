import json
import math

from spaceform_rigidity.report import CheckRecord, VerificationReport, csv_text


def test_positive_and_negative_records():
    assert CheckRecord("a", {}, 1.0, 1.0, 1e-9, 1e-8).passed
    assert not CheckRecord("a", {}, 1.0, 1.0, 1e-7, 1e-8).passed
    assert CheckRecord("neg", {}, 0.0, 0.0, 1e-2, 1e-3, negative=True).passed
    assert not CheckRecord("neg", {}, 0.0, 0.0, 1e-4, 1e-3, negative=True).passed
    assert not CheckRecord("nan", {}, 0.0, 0.0, math.nan, 1.0).passed


def test_json_is_sorted_and_clean():
    import numpy as np

    rec = CheckRecord("x", {"arr": np.arange(2), "inf": math.inf}, 1.0, 2.0, 0.5, 1.0, "note", True)
    d = json.loads(rec.to_json())
    assert d["inputs"] == {"arr": [0, 1], "inf": "inf"}
    assert d["negative"] is True and d["note"] == "note" and d["pass"] is False
    assert rec.to_json() == json.dumps(d, sort_keys=True)


def test_report_aggregates(tmp_path):
    rep = VerificationReport().add(CheckRecord("a", {}, 0, 0, 0, 1), CheckRecord("b", {}, 0, 0, 2, 1))
    assert not rep.passed and [r.name for r in rep.failures()] == ["b"]
    rep.write_jsonl(tmp_path / "r.jsonl")
    assert (tmp_path / "r.jsonl").read_text().count("\n") == 2
    assert "NO" in rep.table()


def test_csv_uses_round_trip_floats():
    text = csv_text(["x"], [(0.1,), (1 / 3,)])
    assert text == "x\n0.1\n0.3333333333333333\n"
