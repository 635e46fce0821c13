import pandas as pd
import pytest

from bertini.experiment import COMPARE_COLUMNS, TrialRecord
from bertini.records import (
    RecordWriter,
    dumps,
    format_comparison,
    read_comparison,
    read_json,
    read_records,
    write_comparison,
    write_json,
)


def sample_records():
    return [
        TrialRecord(trial=0, seed=0xE220A8397B1DCDAF, degrees=(1,), verdict="singular",
                    witness={"e": 1, "degree": 1, "coords": [0, 0, 1]}, gb="singular", brute="singular"),
        TrialRecord(trial=1, seed=0x6E789E6AA1B965F4, degrees=(1,), verdict="smooth",
                    counts={1: 3, 2: 5}, gb="smooth", contains=[True], avoids=[False]),
        TrialRecord(trial=2, seed=7, degrees=(1,), verdict="undecided", gb="undecided"),
    ]


def test_jsonl_round_trip_is_byte_stable(tmp_path):
    path = tmp_path / "run" / "trials.jsonl"
    with RecordWriter(path) as writer:
        for rec in sample_records():
            writer(rec)
    assert writer.count == 3
    text = path.read_text(encoding="utf-8")
    assert text.count("\n") == 3
    assert text.startswith('{"trial":0,"seed":"0xe220a8397b1dcdaf","degrees":[1],"verdict":"singular"')

    back = read_records(path)
    assert [r.to_dict() for r in back] == [r.to_dict() for r in sample_records()]
    again = "".join(dumps(r.to_dict()) + "\n" for r in back)
    assert again == text


def test_writer_needs_context(tmp_path):
    writer = RecordWriter(tmp_path / "x.jsonl")
    with pytest.raises(RuntimeError):
        writer.write(sample_records()[0])


def test_bad_lines_report_their_position(tmp_path):
    path = tmp_path / "trials.jsonl"
    good = dumps(sample_records()[1].to_dict())
    path.write_text(good + "\n\n" + '{"trial": 4}\n', encoding="utf-8")
    with pytest.raises(ValueError, match=r"trials\.jsonl:3"):
        read_records(path)
    path.write_text("not json\n", encoding="utf-8")
    with pytest.raises(ValueError, match=r":1: bad trial record"):
        read_records(path)


def test_json_files(tmp_path):
    obj = {"b": 1, "a": {"exact": "3/7", "approx": 0.428571428571429}}
    path = tmp_path / "deep" / "summary.json"
    write_json(path, obj)
    assert read_json(path) == obj
    assert list(read_json(path)) == ["b", "a"]
    assert path.read_text(encoding="utf-8").endswith("}\n")


def test_comparison_csv(tmp_path):
    table = pd.DataFrame([
        {"metric": "density", "empirical": 0.3, "predicted": 1 / 3, "tail_bound": 0.001,
         "z": -1.5, "pass": True},
        {"metric": "mean", "empirical": None, "predicted": 3.0, "tail_bound": None,
         "z": None, "pass": None},
        {"metric": "variance", "empirical": 2.0, "predicted": 12 / 7, "tail_bound": None,
         "z": 4.2, "pass": False},
    ], columns=COMPARE_COLUMNS)

    cells = format_comparison(table)
    assert list(cells.columns) == COMPARE_COLUMNS
    assert cells.loc[0, "predicted"] == "0.333333333333333"
    assert cells.loc[0, "pass"] == "true"
    assert cells.loc[1, "empirical"] == ""
    assert cells.loc[1, "pass"] == ""
    assert cells.loc[2, "pass"] == "false"

    path = tmp_path / "comparison.csv"
    write_comparison(path, table)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "metric,empirical,predicted,tail_bound,z,pass"
    assert lines[2] == "mean,,3,,,"
    back = read_comparison(path)
    assert back.to_dict("records") == cells.to_dict("records")
