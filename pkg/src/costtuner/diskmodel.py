"""Per-table buffer statistics and the dynamic random-page-cost model.

Tracks, for every table, the hit ratio observed at its most recent access and
a global access counter.  Before a query, the model predicts the next hit
ratio as the last one decayed by how many other table accesses happened in
between, then blends ``random_page_cost`` between its configured default
(cold table) and ``seq_page_cost`` (fully cached table).

Single writer, many readers: ``record_execution`` mutates, predictions only
read.  Callers serialize access; the replay loop is sequential by design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional


def degradation_factor(qc: int, tc: int) -> float:
    """Decay applied to a table's last hit ratio after ``qc - tc`` other accesses.

    Returns (1 + g) / (1 + g^2) with g = qc - tc.  Equal to 1.0 at g in {0, 1}
    and strictly decreasing from there; always in (0, 1].
    """
    if tc < 0 or qc < tc:
        raise ValueError(f"counters must satisfy qc >= tc >= 0, got qc={qc}, tc={tc}")
    gap = qc - tc
    return (1 + gap) / (1 + gap * gap)


@dataclass
class TableBufferStats:
    """Buffer-usage bookkeeping for one table."""

    table_id: str
    last_hit_ratio: Optional[float] = None
    observation_count: int = 0
    tc: int = 0  # value of the global counter at this table's last access


@dataclass
class DiskModel:
    """Mutable state behind the per-table random-page-cost predictions."""

    random_page_cost_default: float = 4.0
    seq_page_cost: float = 1.0
    min_observations: int = 3
    qc: int = 0  # global table-access counter
    tables: Dict[str, TableBufferStats] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.seq_page_cost <= 0:
            raise ValueError("seq_page_cost must be > 0")
        if self.random_page_cost_default < self.seq_page_cost:
            raise ValueError("random_page_cost_default must be >= seq_page_cost")
        if self.min_observations < 1:
            raise ValueError("min_observations must be >= 1")

    def record_execution(self, table_id: str, hit: int, read: int) -> None:
        """Fold one executed query's buffer counters for ``table_id`` into the state.

        Advances the global counter, stamps the table's last-access counter and
        stores hit / (hit + read) as its latest hit ratio.  A zero-page
        observation (hit + read == 0) carries no information and is skipped
        entirely: no counter moves, the previous hit ratio is retained.
        """
        if hit < 0 or read < 0:
            raise ValueError(f"hit/read must be >= 0, got hit={hit}, read={read}")
        total = hit + read
        if total == 0:
            return
        self.qc += 1
        stats = self.tables.get(table_id)
        if stats is None:
            stats = TableBufferStats(table_id)
            self.tables[table_id] = stats
        stats.tc = self.qc
        stats.last_hit_ratio = hit / total
        stats.observation_count += 1

    def predict_hit_ratio(self, table_id: str) -> Optional[float]:
        """Predicted hit ratio for the table's next access, or None during warm-up."""
        stats = self.tables.get(table_id)
        if stats is None or stats.observation_count < self.min_observations:
            return None
        if stats.last_hit_ratio is None:
            return None
        return stats.last_hit_ratio * degradation_factor(self.qc, stats.tc)

    def random_page_cost_for(self, table_id: str) -> float:
        """Random-page cost for the table's next query.

        Blends the default toward ``seq_page_cost`` by the predicted hit
        ratio; an unknown or still-warming table keeps the default.  Result is
        always within [seq_page_cost, random_page_cost_default].
        """
        predicted = self.predict_hit_ratio(table_id)
        ratio = 0.0 if predicted is None else predicted
        return self.random_page_cost_default * (1 - ratio) + self.seq_page_cost * ratio

    def snapshot(self) -> dict:
        """JSON-serializable state snapshot (harness checkpoint format)."""
        return {
            "qc": self.qc,
            "random_page_cost_default": self.random_page_cost_default,
            "seq_page_cost": self.seq_page_cost,
            "min_observations": self.min_observations,
            "tables": {
                t.table_id: {
                    "last_hit_ratio": t.last_hit_ratio,
                    "observation_count": t.observation_count,
                    "tc": t.tc,
                }
                for t in self.tables.values()
            },
        }

    @classmethod
    def from_snapshot(cls, data: dict) -> "DiskModel":
        model = cls(
            random_page_cost_default=data["random_page_cost_default"],
            seq_page_cost=data["seq_page_cost"],
            min_observations=data["min_observations"],
            qc=data["qc"],
        )
        for table_id, entry in data["tables"].items():
            model.tables[table_id] = TableBufferStats(
                table_id=table_id,
                last_hit_ratio=entry["last_hit_ratio"],
                observation_count=entry["observation_count"],
                tc=entry["tc"],
            )
        return model
