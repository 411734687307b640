"""Five-parameter operator cost vocabulary and the per-operator pricing formulas.

Costs are abstract units normalized so that one sequential page fetch costs
``seq_page_cost`` (1.0 in the default configuration).  Every other parameter
is a fraction or multiple of that base value, e.g. ``cpu_tuple_cost = 0.01``
means processing 100 tuples is priced like reading one page sequentially.

All pricing functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .errors import ConfigError


class OperatorType(str, Enum):
    """Plan operator kinds; each tag maps to exactly one cost-formula shape."""

    SEQ_SCAN = "SeqScan"
    INDEX_SCAN = "IndexScan"
    AGG = "Agg"


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class CostParams:
    """The five tunable cost constants the planner consumes.

    Invariants: all values finite and >= 0, ``seq_page_cost`` > 0 and
    ``random_page_cost >= seq_page_cost``.
    """

    cpu_tuple_cost: float = 0.01
    cpu_operator_cost: float = 0.0025
    cpu_index_tuple_cost: float = 0.005
    seq_page_cost: float = 1.0
    random_page_cost: float = 4.0

    def __post_init__(self) -> None:
        for name in (
            "cpu_tuple_cost",
            "cpu_operator_cost",
            "cpu_index_tuple_cost",
            "seq_page_cost",
            "random_page_cost",
        ):
            value = getattr(self, name)
            _check_finite(name, value)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")
        if self.seq_page_cost <= 0:
            raise ValueError("seq_page_cost must be > 0")
        if self.random_page_cost < self.seq_page_cost:
            raise ValueError(
                "random_page_cost must be >= seq_page_cost "
                f"({self.random_page_cost!r} < {self.seq_page_cost!r})"
            )


#: PostgreSQL-style defaults; also the baseline ("no adaptation") parameter set.
DEFAULT_COST_PARAMS = CostParams()

#: Default CPU triple (cpu_tuple_cost, cpu_operator_cost, cpu_index_tuple_cost).
DEFAULT_CPU_PARAMS = (
    DEFAULT_COST_PARAMS.cpu_tuple_cost,
    DEFAULT_COST_PARAMS.cpu_operator_cost,
    DEFAULT_COST_PARAMS.cpu_index_tuple_cost,
)


@dataclass(frozen=True)
class OperatorCounts:
    """Per-operator work volumes multiplied against :class:`CostParams`."""

    n_tuples: int = 0
    n_operations: int = 0
    n_seq_pages: int = 0
    n_index_entries: int = 0
    n_random_pages: int = 0

    def __post_init__(self) -> None:
        for name in (
            "n_tuples",
            "n_operations",
            "n_seq_pages",
            "n_index_entries",
            "n_random_pages",
        ):
            value = getattr(self, name)
            _check_finite(name, value)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")

    def __add__(self, other: "OperatorCounts") -> "OperatorCounts":
        if not isinstance(other, OperatorCounts):
            return NotImplemented
        return OperatorCounts(
            self.n_tuples + other.n_tuples,
            self.n_operations + other.n_operations,
            self.n_seq_pages + other.n_seq_pages,
            self.n_index_entries + other.n_index_entries,
            self.n_random_pages + other.n_random_pages,
        )


def operator_cost(params: CostParams, counts: OperatorCounts) -> float:
    """Price one operator: the linear combination of parameters and counts."""
    return (
        params.cpu_tuple_cost * counts.n_tuples
        + params.cpu_operator_cost * counts.n_operations
        + params.seq_page_cost * counts.n_seq_pages
        + params.cpu_index_tuple_cost * counts.n_index_entries
        + params.random_page_cost * counts.n_random_pages
    )


def seq_scan_cost(params: CostParams, n_tuples: int, n_pages: int) -> float:
    """Full sequential table scan without a filter term."""
    return operator_cost(
        params, OperatorCounts(n_tuples=n_tuples, n_seq_pages=n_pages)
    )


def agg_cost(params: CostParams, n_tuples: int) -> float:
    """Aggregation over ``n_tuples`` input rows."""
    return operator_cost(params, OperatorCounts(n_tuples=n_tuples))


def index_scan_cost(
    params: CostParams,
    n_tuples: int,
    n_index_entries: int,
    n_random_pages: int,
) -> float:
    """Index scan: heap tuples fetched, index entries examined, random pages.

    Which counts participate is a modeling choice of this package (classic
    optimizers disagree on the exact shape); we charge tuple, index-entry and
    random-page work and nothing else.
    """
    return operator_cost(
        params,
        OperatorCounts(
            n_tuples=n_tuples,
            n_index_entries=n_index_entries,
            n_random_pages=n_random_pages,
        ),
    )


def iter_plan_nodes(root) -> Iterator:
    """Preorder walk over a plan tree (any object with ``children``)."""
    if root is None:
        return
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        # reversed keeps left-to-right preorder
        stack.extend(reversed(node.children))


def plan_cost(root, params_by_type: Mapping[OperatorType, CostParams]) -> float:
    """Total plan cost: sum of operator costs over all nodes.

    Each node is priced with the parameter set registered for its operator
    type, so different operators may use independently tuned constants.
    Raises :class:`ConfigError` when a node's type has no entry.
    """
    total = 0.0
    for node in iter_plan_nodes(root):
        try:
            params = params_by_type[node.op_type]
        except KeyError:
            raise ConfigError(
                f"no cost parameters configured for operator type {node.op_type!r}"
            ) from None
        total += operator_cost(params, node.counts)
    return total
