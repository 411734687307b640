"""Minimal cost-based access-path selection.

For each query the planner prices a sequential-scan plan and, when the table
is indexed, an index-scan plan (optionally topped with an aggregation) and
keeps the cheaper one.  The enumeration space is deliberately tiny: the point
is to show how better cost parameters turn into better plan choices, not to
rebuild join ordering.

Pure given its inputs; safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from .catalog import Catalog, agg_group_count, index_entry_count, selected_tuples
from .costmodel import CostParams, OperatorCounts, OperatorType, iter_plan_nodes, operator_cost

#: Supplies the cost parameters for pricing one operator type against one table
#: (per-table random_page_cost gets injected through this hook).
ParamsSource = Callable[[OperatorType, str], CostParams]


@dataclass(frozen=True)
class QuerySpec:
    """One single-table query: how much of the table it selects, aggregated or not."""

    table_id: str
    selectivity: float
    aggregate: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.selectivity <= 1.0:
            raise ValueError(f"selectivity must be in [0, 1], got {self.selectivity!r}")


@dataclass
class PlanNode:
    op_type: OperatorType
    counts: OperatorCounts
    children: List["PlanNode"] = field(default_factory=list)
    table_id: Optional[str] = None
    selectivity: Optional[float] = None
    output_tuples: Optional[int] = None
    estimated_cost: float = 0.0
    actual_time_ms: Optional[float] = None


def plan_total_cost(root: Optional[PlanNode]) -> float:
    return sum(node.estimated_cost for node in iter_plan_nodes(root))


def describe_plan(root: Optional[PlanNode]) -> str:
    return "+".join(node.op_type.value for node in iter_plan_nodes(root))


def _seq_scan_node(query: QuerySpec, table, params_for: ParamsSource) -> PlanNode:
    counts = OperatorCounts(n_tuples=table.n_tuples, n_seq_pages=table.n_pages)
    node = PlanNode(
        op_type=OperatorType.SEQ_SCAN,
        counts=counts,
        table_id=table.table_id,
        selectivity=query.selectivity,
        output_tuples=selected_tuples(table, query.selectivity),
    )
    node.estimated_cost = operator_cost(params_for(node.op_type, table.table_id), counts)
    return node


def _index_scan_node(query: QuerySpec, table, params_for: ParamsSource) -> PlanNode:
    n_fetched = selected_tuples(table, query.selectivity)
    counts = OperatorCounts(
        n_tuples=n_fetched,
        n_index_entries=index_entry_count(table, query.selectivity),
        # estimated page touches are capped by the table size
        n_random_pages=min(n_fetched, table.n_pages),
    )
    node = PlanNode(
        op_type=OperatorType.INDEX_SCAN,
        counts=counts,
        table_id=table.table_id,
        selectivity=query.selectivity,
        output_tuples=n_fetched,
    )
    node.estimated_cost = operator_cost(params_for(node.op_type, table.table_id), counts)
    return node


def _with_agg(query: QuerySpec, scan: PlanNode, params_for: ParamsSource) -> PlanNode:
    n_input = scan.output_tuples or 0
    groups = agg_group_count(n_input, query.selectivity)
    counts = OperatorCounts(n_tuples=n_input, n_operations=groups)
    node = PlanNode(
        op_type=OperatorType.AGG,
        counts=counts,
        children=[scan],
        table_id=scan.table_id,
        selectivity=query.selectivity,
        output_tuples=groups,
    )
    node.estimated_cost = operator_cost(params_for(node.op_type, scan.table_id), counts)
    return node


def enumerate_and_choose(
    query: QuerySpec, catalog: Catalog, params_for: ParamsSource
) -> PlanNode:
    """Price the access-path alternatives and return the cheapest plan.

    Ties break toward the sequential scan so runs stay reproducible.
    """
    table = catalog.get(query.table_id)
    candidates = [_seq_scan_node(query, table, params_for)]
    if table.has_index:
        candidates.append(_index_scan_node(query, table, params_for))
    if query.aggregate:
        candidates = [_with_agg(query, scan, params_for) for scan in candidates]
    best = candidates[0]
    best_cost = plan_total_cost(best)
    for plan in candidates[1:]:
        cost = plan_total_cost(plan)
        if cost < best_cost:
            best, best_cost = plan, cost
    return best


def estimated_vs_actual(plan: Optional[PlanNode]) -> List[Tuple[float, float]]:
    """(estimated_cost, actual_time_ms) per node in preorder.

    Requires the plan to have been executed; raises ValueError otherwise.
    """
    pairs: List[Tuple[float, float]] = []
    for node in iter_plan_nodes(plan):
        if node.actual_time_ms is None:
            raise ValueError("plan has not been executed: actual_time_ms missing")
        pairs.append((node.estimated_cost, node.actual_time_ms))
    return pairs
