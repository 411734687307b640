"""Workload traces: phased generation and line-delimited persistence.

A trace is an ordered list of labeled single-table queries.  Generation is
seeded and phase-structured so scenarios can, for example, hammer one table
until it is cache-resident and then switch away to exercise hit-ratio decay.
Each phase mixes weighted query templates; a template fixes the target table,
its selectivity range and how often the query aggregates.

Trace files are JSON Lines with a versioned header record, so they stay
human-diffable and append-friendly.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ConfigError
from .planner import QuerySpec

TRACE_FORMAT = "costtuner.trace"
TRACE_VERSION = 1


@dataclass(frozen=True)
class QueryTemplate:
    """One weighted query shape inside a phase."""

    table_id: str
    weight: float = 1.0
    selectivity_range: Tuple[float, float] = (0.01, 0.5)
    aggregate_prob: float = 0.0

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ConfigError("template weight must be >= 0")
        lo, hi = self.selectivity_range
        if not (0.0 < lo <= hi <= 1.0):
            raise ConfigError(
                f"selectivity_range must satisfy 0 < lo <= hi <= 1, got {self.selectivity_range!r}"
            )
        if not 0.0 <= self.aggregate_prob <= 1.0:
            raise ConfigError("aggregate_prob must be in [0, 1]")


@dataclass(frozen=True)
class PhaseConfig:
    """One stretch of a workload: how many queries drawn from which mix."""

    length: int
    mix: Tuple[QueryTemplate, ...]

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if not self.mix:
            raise ConfigError("phase needs at least one query template")
        if sum(t.weight for t in self.mix) <= 0:
            raise ConfigError("template weights must not all be zero")


@dataclass(frozen=True)
class WorkloadConfig:
    phases: Tuple[PhaseConfig, ...]

    def __post_init__(self) -> None:
        if not self.phases:
            raise ConfigError("workload needs at least one phase")

    @property
    def length(self) -> int:
        return sum(phase.length for phase in self.phases)


@dataclass(frozen=True)
class TracedQuery:
    label: str
    query: QuerySpec


@dataclass
class WorkloadTrace:
    queries: List[TracedQuery] = field(default_factory=list)
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self):
        return iter(self.queries)


def generate_workload(config: WorkloadConfig, seed: int) -> WorkloadTrace:
    """Deterministic trace from a seed; replay order is exactly list order."""
    rng = random.Random(seed)
    queries: List[TracedQuery] = []
    index = 0
    for phase in config.phases:
        weights = [t.weight for t in phase.mix]
        for _ in range(phase.length):
            index += 1
            template = rng.choices(phase.mix, weights=weights)[0]
            lo, hi = template.selectivity_range
            # log-uniform draw spreads selectivities over orders of magnitude;
            # clamp both ends against exp/log rounding
            selectivity = min(max(math.exp(rng.uniform(math.log(lo), math.log(hi))), lo), hi)
            aggregate = rng.random() < template.aggregate_prob
            queries.append(
                TracedQuery(
                    label=f"q{index:04d}",
                    query=QuerySpec(template.table_id, selectivity, aggregate),
                )
            )
    return WorkloadTrace(queries=queries, seed=seed)


def save_trace(trace: WorkloadTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        header = {"format": TRACE_FORMAT, "version": TRACE_VERSION, "seed": trace.seed}
        handle.write(json.dumps(header) + "\n")
        for traced in trace.queries:
            row = {
                "label": traced.label,
                "table": traced.query.table_id,
                "selectivity": traced.query.selectivity,
                "aggregate": traced.query.aggregate,
            }
            handle.write(json.dumps(row) + "\n")


def load_trace(path: str) -> WorkloadTrace:
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line for line in (raw.strip() for raw in handle) if line]
    if not lines:
        raise ConfigError(f"trace file {path!r} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ConfigError(f"trace file {path!r}: bad header: {exc}") from None
    if header.get("format") != TRACE_FORMAT:
        raise ConfigError(f"trace file {path!r}: unrecognized format {header.get('format')!r}")
    if header.get("version") != TRACE_VERSION:
        raise ConfigError(f"trace file {path!r}: unsupported version {header.get('version')!r}")
    queries: List[TracedQuery] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        try:
            row = json.loads(raw)
            queries.append(
                TracedQuery(
                    label=str(row["label"]),
                    query=QuerySpec(
                        table_id=str(row["table"]),
                        selectivity=float(row["selectivity"]),
                        aggregate=bool(row["aggregate"]),
                    ),
                )
            )
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ConfigError(f"trace file {path!r}, line {lineno}: {exc}") from None
    return WorkloadTrace(queries=queries, seed=header.get("seed"))
