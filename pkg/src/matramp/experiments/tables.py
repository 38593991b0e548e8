"""Result tables with deterministic CSV and JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

CSV_COLUMNS = ("scenario", "method", "n", "mu_exact", "estimate", "epsilon", "delta",
               "shots", "queries", "seed")


def fmt_float(x) -> str:
    """17 significant digits, enough for a lossless double round trip."""
    if isinstance(x, bool) or not isinstance(x, float):
        return str(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return format(x, ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def seed_range(seeds) -> str:
    seeds = list(seeds)
    if not seeds:
        return "none"
    if seeds == list(range(seeds[0], seeds[0] + len(seeds))):
        return f"{seeds[0]}-{seeds[-1]}"
    return "-".join(str(s) for s in seeds)


@dataclass
class ResultTable:
    scenario: str
    n: int
    seeds: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    columns: tuple = CSV_COLUMNS

    @property
    def filename(self) -> str:
        return f"{self.scenario}_{self.n}_{seed_range(self.seeds)}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt_float(row.get(c, "")) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        return dumps_json({"scenario": self.scenario, "n": self.n, "seeds": self.seeds,
                           "summary": self.summary, "rows": self.rows})

    def write(self, out: str | Path, fmt: str = "csv") -> Path:
        """Write to ``out`` (a directory gets the standard file name)."""
        out = Path(out)
        if out.is_dir() or not out.suffix:
            out.mkdir(parents=True, exist_ok=True)
            out = out / f"{self.filename}.{fmt}"
        else:
            out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(self.to_csv() if fmt == "csv" else self.to_json())
        return out
