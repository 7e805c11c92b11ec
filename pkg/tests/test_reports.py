import json

import pytest

from wtap.reports import (
    ExperimentSpec,
    InvariantRecord,
    RunReport,
    rows_to_csv,
    rows_to_json,
)


def sample_report():
    return RunReport(
        algorithm="run-path",
        instance_digest="abc123",
        instance_text="n 3 root 0\n",
        per_request=[{"request": 0, "y_raise": "1"}],
        final_cost="3",
        opt="2",
        ratio=1.5,
        invariants=[InvariantRecord(id="dual-feasible", ok=True)],
        wall_time=0.01,
        config_hash="deadbeef",
    )


def test_report_round_trip():
    rep = sample_report()
    back = RunReport.from_json(rep.to_json())
    assert back == rep
    assert back.invariants[0] == InvariantRecord(id="dual-feasible", ok=True)


def test_report_json_is_sorted_and_versioned():
    data = json.loads(sample_report().to_json())
    assert data["format_version"] == "1"
    assert list(data) == sorted(data)


def test_report_version_gate():
    data = json.loads(sample_report().to_json())
    data["format_version"] = "0"
    with pytest.raises(ValueError):
        RunReport.from_json(json.dumps(data))
    data.pop("format_version")
    with pytest.raises(ValueError):
        RunReport.from_json(json.dumps(data))


def test_config_hash_stable_and_sensitive():
    a = ExperimentSpec(algorithm="run-tree", seed=7, params=(("n", 9),))
    b = ExperimentSpec(algorithm="run-tree", seed=7, params=(("n", 9),))
    assert a.config_hash() == b.config_hash()
    assert len(a.config_hash()) == 16
    assert a.config_hash() != ExperimentSpec("run-tree", 8, (("n", 9),)).config_hash()
    assert a.config_hash() != ExperimentSpec("run-frac", 7, (("n", 9),)).config_hash()


def test_rows_to_csv_golden():
    rows = [{"n": 4, "cost": "7/2"}, {"n": 5, "cost": "3"}]
    assert rows_to_csv(["n", "cost"], rows) == "n,cost\n4,7/2\n5,3\n"


def test_rows_to_json():
    text = rows_to_json([{"b": 1, "a": 2}])
    assert json.loads(text) == [{"a": 2, "b": 1}]
    assert text.index('"a"') < text.index('"b"')
