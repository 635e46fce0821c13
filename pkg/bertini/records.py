"""
Persistence for runs: JSONL trial records, summary / prediction JSON, and the
comparison CSV.

JSON keeps the fixed insertion key order and compact separators, so
that parse -> re-serialize gives identical bytes. CSV cells are formatted as
strings before pandas writes them, for the same reason.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator, List, Optional, TextIO

import pandas as pd

from bertini.experiment import COMPARE_COLUMNS, TrialRecord


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


class RecordWriter:
    """Append TrialRecords to a JSONL file, one object per line."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh: Optional[TextIO] = None
        self.count = 0

    def __enter__(self) -> "RecordWriter":
        self._fh = open(self.path, "w", encoding="utf-8", newline="\n")
        return self

    def __exit__(self, *exc) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def write(self, rec: TrialRecord) -> None:
        if self._fh is None:
            raise RuntimeError("RecordWriter used outside of a with-block")
        self._fh.write(dumps(rec.to_dict()) + "\n")
        self.count += 1

    __call__ = write


def iter_records(path: Path) -> Iterator[TrialRecord]:
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield TrialRecord.from_dict(json.loads(line))
            except (KeyError, ValueError, TypeError) as e:
                raise ValueError(f"{path}:{lineno}: bad trial record ({e})") from None


def read_records(path: Path) -> List[TrialRecord]:
    return list(iter_records(path))


def write_json(path: Path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def read_json(path: Path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return f"{value:.15g}"
    return str(value)


def format_comparison(table: pd.DataFrame) -> pd.DataFrame:
    """Every cell as a string: numbers with 15 significant digits, booleans lower-case."""
    out = pd.DataFrame({
        col: [_cell(v if not (isinstance(v, float) and pd.isna(v)) else None) for v in table[col]]
        for col in COMPARE_COLUMNS
    })
    return out


def write_comparison(path: Path, table: pd.DataFrame) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    format_comparison(table).to_csv(path, index=False, lineterminator="\n")


def read_comparison(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, dtype=str, keep_default_na=False)
