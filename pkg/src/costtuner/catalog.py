"""Table metadata and the shared cardinality formulas.

The planner estimates counts and the simulator produces actual ones from the
same helpers, so estimated cardinalities are exact by construction.  That
isolates cost-parameter effects from cardinality error, which is the whole
point of the experiments this package runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator

from .errors import ConfigError


@dataclass(frozen=True)
class TableDef:
    table_id: str
    n_pages: int
    tuples_per_page: int
    has_index: bool = False

    def __post_init__(self) -> None:
        if self.n_pages < 1:
            raise ValueError("n_pages must be >= 1")
        if self.tuples_per_page < 1:
            raise ValueError("tuples_per_page must be >= 1")

    @property
    def n_tuples(self) -> int:
        return self.n_pages * self.tuples_per_page


class Catalog:
    """Lookup of :class:`TableDef` by id."""

    def __init__(self, tables: Iterable[TableDef]):
        self._tables: Dict[str, TableDef] = {}
        for table in tables:
            if table.table_id in self._tables:
                raise ConfigError(f"duplicate table id {table.table_id!r}")
            self._tables[table.table_id] = table

    def get(self, table_id: str) -> TableDef:
        try:
            return self._tables[table_id]
        except KeyError:
            raise ConfigError(f"unknown table {table_id!r}") from None

    def __contains__(self, table_id: str) -> bool:
        return table_id in self._tables

    def __iter__(self) -> Iterator[TableDef]:
        return iter(self._tables.values())

    def table_ids(self) -> list[str]:
        return list(self._tables)

    def total_pages(self) -> int:
        return sum(t.n_pages for t in self._tables.values())


def selected_tuples(table: TableDef, selectivity: float) -> int:
    """Tuples a query with the given selectivity returns from ``table``."""
    if not 0.0 <= selectivity <= 1.0:
        raise ValueError(f"selectivity must be in [0, 1], got {selectivity!r}")
    return math.ceil(selectivity * table.n_tuples)

def index_entry_count(table: TableDef, selectivity: float) -> int:
    """Index entries examined by an index scan at the given selectivity.

    The simulated index matches a wider range than the final predicate (think
    range scan plus a secondary qual applied inside the index), modeled as a
    sqrt(selectivity) fraction of all entries.  Entries examined therefore
    exceed tuples returned except at selectivity 0 and 1, which keeps the two
    counts from being proportional to each other across queries.
    """
    if not 0.0 <= selectivity <= 1.0:
        raise ValueError(f"selectivity must be in [0, 1], got {selectivity!r}")
    return math.ceil(math.sqrt(selectivity) * table.n_tuples)


def agg_group_count(input_tuples: int, selectivity: float) -> int:
    """Groups produced when aggregating ``input_tuples`` rows.

    Grows with both query selectivity and input size (capped by the input),
    so group counts vary independently of plain tuple counts.  Empty input
    produces no groups.
    """
    if input_tuples < 0:
        raise ValueError("input_tuples must be >= 0")
    if input_tuples == 0:
        return 0
    return max(1, min(input_tuples, 1 + int(64 * selectivity) + math.isqrt(input_tuples)))
