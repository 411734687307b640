"""The replay loop: plan, execute, record, adapt.

For every query the harness obtains cost parameters (fixed defaults in
``baseline`` mode, model outputs in ``acm`` mode), plans, executes on the
simulator, and in ``acm`` mode feeds the execution record back into the disk
and CPU models.  The buffer cache persists across queries within a run and is
rebuilt from cold between runs, so modes never leak state into each other.

Single-threaded on purpose; parallelism only across independent invocations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .bufsim import Simulator
from .config import ExperimentConfig
from .costmodel import CostParams, OperatorType
from .cpumodel import CpuModel, CpuModelConfig, OperatorObservation
from .diskmodel import DiskModel
from .errors import ConfigError, UndefinedCorrelationError
from .planner import describe_plan, enumerate_and_choose, estimated_vs_actual
from .workload import WorkloadTrace

BASELINE = "baseline"
ACM = "acm"
MODES = (BASELINE, ACM)


def pearson(pairs: Sequence[Tuple[float, float]]) -> float:
    """Pearson product-moment correlation of (x, y) pairs.

    Raises :class:`UndefinedCorrelationError` on fewer than two pairs or when
    either coordinate has zero variance.
    """
    if len(pairs) < 2:
        raise UndefinedCorrelationError("need at least two pairs")
    n = len(pairs)
    mean_x = math.fsum(x for x, _ in pairs) / n
    mean_y = math.fsum(y for _, y in pairs) / n
    sxx = math.fsum((x - mean_x) ** 2 for x, _ in pairs)
    syy = math.fsum((y - mean_y) ** 2 for _, y in pairs)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("zero variance in one coordinate")
    sxy = math.fsum((x - mean_x) * (y - mean_y) for x, y in pairs)
    return sxy / math.sqrt(sxx * syy)


def summary_improvement(baseline_ms: Sequence[float], acm_ms: Sequence[float]) -> float:
    """Whole-benchmark latency improvement: (sum(baseline) - sum(acm)) / sum(baseline)."""
    total_baseline = math.fsum(baseline_ms)
    total_acm = math.fsum(acm_ms)
    if total_baseline <= 0:
        raise ValueError("baseline total must be > 0")
    return (total_baseline - total_acm) / total_baseline


@dataclass
class QueryResult:
    label: str
    table_id: str
    plan: str
    latency_ms: float


@dataclass
class ModeResult:
    """Everything one measured replay produced."""

    mode: str
    queries: List[QueryResult] = field(default_factory=list)
    node_pairs: List[Tuple[float, float]] = field(default_factory=list)
    correlation: Optional[float] = None
    disk_trajectory: List[dict] = field(default_factory=list)
    cpu_trajectory: List[dict] = field(default_factory=list)
    operators_executed: int = 0  # across warm-up and measurement passes

    @property
    def total_latency_ms(self) -> float:
        return math.fsum(q.latency_ms for q in self.queries)


@dataclass
class RunReport:
    baseline: Optional[ModeResult] = None
    acm: Optional[ModeResult] = None
    plan_flips: List[str] = field(default_factory=list)

    def modes(self) -> List[ModeResult]:
        return [m for m in (self.baseline, self.acm) if m is not None]

    @property
    def improvement(self) -> Optional[float]:
        if self.baseline is None or self.acm is None or not self.baseline.queries:
            return None
        return summary_improvement(
            [q.latency_ms for q in self.baseline.queries],
            [q.latency_ms for q in self.acm.queries],
        )


def replay(
    trace: WorkloadTrace,
    mode: str,
    config: ExperimentConfig,
    warmup: int = 0,
) -> ModeResult:
    """Replay a trace and return measurements from the final pass.

    ``warmup`` extra passes run first so the buffer cache (and, in acm mode,
    the models) reach steady state before anything is recorded.
    """
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    if warmup < 0:
        raise ConfigError("warmup must be >= 0")

    adaptive = mode == ACM
    simulator = Simulator(config.catalog, config.cache_pages, config.profile)
    disk = DiskModel(
        random_page_cost_default=config.acm.random_page_cost_default,
        seq_page_cost=config.seq_page_cost,
        min_observations=config.acm.min_observations,
    )
    cpu = CpuModel(
        CpuModelConfig(
            scale_factor=config.scale_factor,
            alpha=config.acm.alpha,
            window_size=config.acm.window_size,
            refit_every=config.acm.refit_every,
            epsilon_floor=config.acm.epsilon_floor,
            ridge_lambda=config.acm.ridge_lambda,
        )
    )
    baseline_params = CostParams(
        random_page_cost=config.acm.random_page_cost_default,
        seq_page_cost=config.seq_page_cost,
    )

    result = ModeResult(mode=mode)
    step = 0
    for pass_no in range(warmup + 1):
        measuring = pass_no == warmup
        for traced in trace:
            step += 1
            query = traced.query
            if adaptive:
                predicted = disk.predict_hit_ratio(query.table_id)
                rpc = disk.random_page_cost_for(query.table_id)

                def params_for(op_type: OperatorType, table_id: str) -> CostParams:
                    c_t, c_o, c_i = cpu.current_params(op_type)
                    return CostParams(
                        cpu_tuple_cost=c_t,
                        cpu_operator_cost=c_o,
                        cpu_index_tuple_cost=c_i,
                        seq_page_cost=config.seq_page_cost,
                        random_page_cost=disk.random_page_cost_for(table_id),
                    )

            else:
                rpc = baseline_params.random_page_cost

                def params_for(op_type: OperatorType, table_id: str) -> CostParams:
                    return baseline_params

            plan = enumerate_and_choose(query, config.catalog, params_for)
            record = simulator.run_plan(plan)
            result.operators_executed += len(record.operators)

            if adaptive:
                for table_id, (hit, read) in record.table_io.items():
                    disk.record_execution(table_id, hit, read)
                for op in record.operators:
                    disk_cost = (
                        config.seq_page_cost * op.n_seq_pages + rpc * op.n_random_pages
                    )
                    cpu.ingest(
                        OperatorObservation(
                            op_type=op.op_type,
                            n_tuples=op.n_tuples,
                            n_operations=op.n_operations,
                            n_index_entries=op.n_index_entries,
                            disk_cost=disk_cost,
                            exec_time_ms=op.time_ms,
                        )
                    )
                result.disk_trajectory.append(
                    {
                        "step": step,
                        "table": query.table_id,
                        "predicted_hit_ratio": predicted,
                        "random_page_cost": rpc,
                    }
                )

            if measuring:
                result.queries.append(
                    QueryResult(
                        label=traced.label,
                        table_id=query.table_id,
                        plan=describe_plan(plan),
                        latency_ms=record.total_latency_ms,
                    )
                )
                result.node_pairs.extend(estimated_vs_actual(plan))

    if adaptive:
        result.cpu_trajectory = cpu.history_rows()
    try:
        result.correlation = pearson(result.node_pairs)
    except UndefinedCorrelationError:
        result.correlation = None
    return result


def compare(
    trace: WorkloadTrace, config: ExperimentConfig, warmup: int = 0
) -> RunReport:
    """Run both modes on one trace (cache rebuilt cold for each) and diff the plans."""
    baseline = replay(trace, BASELINE, config, warmup=warmup)
    adaptive = replay(trace, ACM, config, warmup=warmup)
    flips = [
        base.label
        for base, adapted in zip(baseline.queries, adaptive.queries)
        if base.plan != adapted.plan
    ]
    return RunReport(baseline=baseline, acm=adaptive, plan_flips=flips)
