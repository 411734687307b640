"""
Pricing plan operators with the five cost constants
===================================================

An optimizer prices every operator as a linear combination of five
constants: per-tuple CPU work, per-operation CPU work, per-index-entry CPU
work, and sequential/random page fetches.  This script walks through the
vocabulary on a few concrete operators and a two-node plan.
"""

from costtuner import (
    CostParams,
    OperatorCounts,
    OperatorType,
    PlanNode,
    agg_cost,
    index_scan_cost,
    operator_cost,
    plan_cost,
    seq_scan_cost,
)

# The classic defaults: one sequential page fetch is the unit of cost, and
# everything else is a fraction or multiple of it.
defaults = CostParams()
print("default parameters:", defaults)

# Processing 100 tuples costs exactly as much as reading one page.
print("\n100 tuples:", operator_cost(defaults, OperatorCounts(n_tuples=100)))
print("1 sequential page:", operator_cost(defaults, OperatorCounts(n_seq_pages=1)))

# A full scan of a 10-page, 100-tuple table.
print("\nseq scan of 100 tuples / 10 pages:", seq_scan_cost(defaults, 100, 10))

# Aggregating those 100 tuples afterwards adds per-tuple CPU work.
print("aggregating 100 tuples:", agg_cost(defaults, 100))

# An index scan pays per fetched tuple, per index entry and per random page.
# Random pages dominate under the defaults: the 4x multiplier encodes seek
# penalty on a cold cache.
print("index scan (10 tuples, 10 entries, 10 pages):",
      index_scan_cost(defaults, 10, 10, 10))

# With the random-page penalty collapsed to the sequential cost (a fully
# cached table) the same scan is four times cheaper on the page side.
cached = CostParams(random_page_cost=1.0)
print("same scan, cache-aware pricing:", index_scan_cost(cached, 10, 10, 10))

# Whole plans are priced by summing their nodes; each operator type can use
# its own tuned parameter set.
scan = PlanNode(
    op_type=OperatorType.SEQ_SCAN,
    counts=OperatorCounts(n_tuples=100, n_seq_pages=10),
)
agg = PlanNode(
    op_type=OperatorType.AGG,
    counts=OperatorCounts(n_tuples=100),
    children=[scan],
)
params_by_type = {op: defaults for op in OperatorType}
print("\nplan cost of Agg over SeqScan:", plan_cost(agg, params_by_type))
