"""Run output layout: <out_root>/<run name>/<artifact file>."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

ARTIFACTS = {
    "records": "trials.jsonl",
    "summary": "summary.json",
    "comparison": "comparison.csv",
    "prediction": "prediction.json",
}


@dataclass(frozen=True)
class OutLayout:
    out_root: Path = Path("data/out")

    def path(self, name: str, artifact: str, create: bool = True) -> Path:
        """
        File for one artifact of run `name` (a preset name or --name label).

        Raises:
            KeyError: artifact not in ARTIFACTS
        """
        filename = ARTIFACTS[artifact]
        run_dir = Path(self.out_root) / name
        if create:
            run_dir.mkdir(parents=True, exist_ok=True)
        return run_dir / filename
