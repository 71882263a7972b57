"""Machine-readable run reports shared by the witness engines and the CLI.

Counts are serialized as decimal strings and ratios as exact fraction
strings so reports stay faithful to the exact arithmetic; elapsed_ms is
the only field allowed to vary between identical runs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .partitions import SetPartition

__all__ = ["WitnessReport"]


@dataclass
class WitnessReport:
    """Outcome of a lemma-verification run.

    For a single adversary map the census counts bad pairs per candidate;
    for a campaign over many maps the fields describe the worst map seen
    and `details` carries the aggregate data.
    """

    params: dict[str, Any]
    strategy: str
    seed: Optional[int]
    witness: Optional[SetPartition]
    bad_pair_count: int
    candidate_count: int
    census: dict[str, int] = field(default_factory=dict)
    ratio: Optional[Fraction] = None
    elapsed_ms: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.details.get("all_witnessed", self.witness is not None))

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "params": self.params,
            "strategy": self.strategy,
            "seed": self.seed,
            "witness": self.witness.to_text() if self.witness is not None else None,
            "bad_pair_count": str(self.bad_pair_count),
            "candidate_count": str(self.candidate_count),
            "ratio": str(self.ratio) if self.ratio is not None else None,
            "census": self.census,
            "elapsed_ms": self.elapsed_ms,
            "details": _jsonable(self.details),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    CSV_FIELDS = (
        "strategy",
        "seed",
        "witness",
        "bad_pair_count",
        "candidate_count",
        "ratio",
        "elapsed_ms",
    )

    def to_csv(self) -> str:
        d = self.to_json_dict()
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=("params",) + self.CSV_FIELDS)
        writer.writeheader()
        row = {name: d[name] for name in self.CSV_FIELDS}
        row["params"] = json.dumps(d["params"], sort_keys=True)
        writer.writerow(row)
        return buf.getvalue()


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, SetPartition):
        return value.to_text()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        if isinstance(value, (set, frozenset)):
            items.sort(key=repr)
        return items
    return value
