"""Deterministic mini storage engine: tables of pages, an LRU buffer cache and
executable scan/aggregate operators with hidden ground-truth timing.

Simulated time is computed from counts and a timing profile, never measured,
so identical (workload, seed, profile) inputs reproduce bit-identical results.
One simulator instance is single-threaded; run independent instances for
parallel experiments.
"""

from __future__ import annotations

import math
import random
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .catalog import Catalog, TableDef, index_entry_count, selected_tuples
from .costmodel import OperatorType
from .errors import ConfigError


@dataclass(frozen=True)
class TimingProfile:
    """Ground-truth per-unit times (milliseconds) the adaptive models try to recover."""

    t_seq_page_ms: float = 0.1
    t_rand_page_ms: float = 0.4
    t_hit_page_ms: float = 0.1
    t_tuple_ms: float = 0.001
    t_op_ms: float = 0.0025
    t_index_entry_ms: float = 0.0005
    noise_sigma: float = 0.0  # multiplicative lognormal noise on operator time
    seed: int = 0

    def __post_init__(self) -> None:
        for name in (
            "t_seq_page_ms",
            "t_rand_page_ms",
            "t_hit_page_ms",
            "t_tuple_ms",
            "t_op_ms",
            "t_index_entry_ms",
            "noise_sigma",
        ):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if self.t_seq_page_ms <= 0:
            raise ValueError("t_seq_page_ms must be > 0")
        if not self.t_rand_page_ms >= self.t_seq_page_ms >= self.t_hit_page_ms:
            raise ValueError(
                "page times must satisfy t_rand_page_ms >= t_seq_page_ms >= t_hit_page_ms"
            )


class LRUCache:
    """Fixed-capacity page cache with least-recently-used eviction.

    Keys are (table_id, page_no) pairs.  ``access`` is the only mutating
    entry point: it reports hit/miss, refreshes recency and inserts on miss.
    ``touches`` is an independent shadow counter used by conservation checks.
    """

    def __init__(self, capacity_pages: int):
        if capacity_pages < 1:
            raise ValueError("capacity_pages must be >= 1")
        self.capacity_pages = capacity_pages
        self._pages: "OrderedDict[Tuple[str, int], None]" = OrderedDict()
        self.touches = 0

    def access(self, key: Tuple[str, int]) -> bool:
        self.touches += 1
        if key in self._pages:
            self._pages.move_to_end(key)
            return True
        self._pages[key] = None
        if len(self._pages) > self.capacity_pages:
            self._pages.popitem(last=False)
        return False

    def __contains__(self, key: Tuple[str, int]) -> bool:
        return key in self._pages

    def __len__(self) -> int:
        return len(self._pages)

    def resident_pages(self) -> List[Tuple[str, int]]:
        return list(self._pages)

    def clear(self) -> None:
        self._pages.clear()


@dataclass
class OperatorExecution:
    """Actual counts and simulated time for one executed operator."""

    op_type: OperatorType
    table_id: str | None
    n_tuples: int
    n_operations: int
    n_index_entries: int
    n_seq_pages: int
    n_random_pages: int
    time_ms: float


@dataclass
class ExecutionRecord:
    """Everything one query execution produced."""

    operators: List[OperatorExecution] = field(default_factory=list)
    table_io: Dict[str, Tuple[int, int]] = field(default_factory=dict)  # table -> (hit, read)
    total_latency_ms: float = 0.0

    def add_table_io(self, table_id: str, hit: int, read: int) -> None:
        old_hit, old_read = self.table_io.get(table_id, (0, 0))
        self.table_io[table_id] = (old_hit + hit, old_read + read)


def _noise_factor(profile: TimingProfile, rng: random.Random) -> float:
    if profile.noise_sigma == 0:
        return 1.0
    return math.exp(rng.gauss(0.0, profile.noise_sigma))


def execute_seq_scan(
    cache: LRUCache, table: TableDef, profile: TimingProfile, rng: random.Random
) -> Tuple[OperatorExecution, int, int]:
    """Scan pages 1..n_pages in order; returns (execution, hits, reads)."""
    hits = reads = 0
    page_ms = 0.0
    for page in range(1, table.n_pages + 1):
        if cache.access((table.table_id, page)):
            hits += 1
            page_ms += profile.t_hit_page_ms
        else:
            reads += 1
            page_ms += profile.t_seq_page_ms
    n_tuples = table.n_tuples  # the scan processes every tuple
    time_ms = (page_ms + profile.t_tuple_ms * n_tuples) * _noise_factor(profile, rng)
    execution = OperatorExecution(
        op_type=OperatorType.SEQ_SCAN,
        table_id=table.table_id,
        n_tuples=n_tuples,
        n_operations=0,
        n_index_entries=0,
        n_seq_pages=table.n_pages,
        n_random_pages=0,
        time_ms=time_ms,
    )
    return execution, hits, reads


def execute_index_scan(
    cache: LRUCache,
    table: TableDef,
    selectivity: float,
    profile: TimingProfile,
    rng: random.Random,
) -> Tuple[OperatorExecution, int, int]:
    """Fetch the selected tuples through the index with random heap probes.

    Each selected tuple probes one uniformly random heap page (the probe
    multiset is reproducible from the seed).  Index pages themselves are not
    cached or timed; only heap touches count toward hit/read.
    """
    if not table.has_index:
        raise ConfigError(f"table {table.table_id!r} has no index")
    n_fetched = selected_tuples(table, selectivity)
    n_entries = index_entry_count(table, selectivity)
    hits = reads = 0
    page_ms = 0.0
    for _ in range(n_fetched):
        page = rng.randrange(1, table.n_pages + 1)
        if cache.access((table.table_id, page)):
            hits += 1
            page_ms += profile.t_hit_page_ms
        else:
            reads += 1
            page_ms += profile.t_rand_page_ms
    time_ms = (
        page_ms
        + profile.t_index_entry_ms * n_entries
        + profile.t_tuple_ms * n_fetched
    ) * _noise_factor(profile, rng)
    execution = OperatorExecution(
        op_type=OperatorType.INDEX_SCAN,
        table_id=table.table_id,
        n_tuples=n_fetched,
        n_operations=0,
        n_index_entries=n_entries,
        n_seq_pages=0,
        n_random_pages=n_fetched,  # one touch per probe
        time_ms=time_ms,
    )
    return execution, hits, reads


def execute_agg(
    n_input_tuples: int,
    n_groups: int,
    profile: TimingProfile,
    rng: random.Random,
) -> OperatorExecution:
    """Aggregate the input rows into groups; no page I/O."""
    time_ms = (
        profile.t_tuple_ms * n_input_tuples + profile.t_op_ms * n_groups
    ) * _noise_factor(profile, rng)
    return OperatorExecution(
        op_type=OperatorType.AGG,
        table_id=None,
        n_tuples=n_input_tuples,
        n_operations=n_groups,
        n_index_entries=0,
        n_seq_pages=0,
        n_random_pages=0,
        time_ms=time_ms,
    )


class Simulator:
    """Buffer cache plus executor; stands in for a database storage engine."""

    def __init__(self, catalog: Catalog, cache_pages: int, profile: TimingProfile):
        self.catalog = catalog
        self.profile = profile
        self.cache = LRUCache(cache_pages)
        self.rng = random.Random(profile.seed)

    def reset_cache(self) -> None:
        self.cache.clear()

    def run_plan(self, plan) -> ExecutionRecord:
        """Execute a plan tree bottom-up, stamping actual times onto its nodes."""
        record = ExecutionRecord()
        self._run_node(plan, record)
        record.total_latency_ms = sum(op.time_ms for op in record.operators)
        return record

    def _run_node(self, node, record: ExecutionRecord) -> OperatorExecution:
        child_execs = [self._run_node(child, record) for child in node.children]
        if node.op_type is OperatorType.SEQ_SCAN:
            table = self.catalog.get(node.table_id)
            execution, hits, reads = execute_seq_scan(self.cache, table, self.profile, self.rng)
            record.add_table_io(table.table_id, hits, reads)
        elif node.op_type is OperatorType.INDEX_SCAN:
            table = self.catalog.get(node.table_id)
            execution, hits, reads = execute_index_scan(
                self.cache, table, node.selectivity, self.profile, self.rng
            )
            record.add_table_io(table.table_id, hits, reads)
        elif node.op_type is OperatorType.AGG:
            n_input = child_execs[0].n_tuples if child_execs else 0
            # scans emit only the selected tuples; aggregation sees that output
            if child_execs and node.children[0].output_tuples is not None:
                n_input = node.children[0].output_tuples
            execution = execute_agg(
                n_input, node.counts.n_operations, self.profile, self.rng
            )
        else:
            raise ConfigError(f"simulator cannot execute operator type {node.op_type!r}")
        node.actual_time_ms = execution.time_ms
        record.operators.append(execution)
        return execution
