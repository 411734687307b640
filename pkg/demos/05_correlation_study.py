"""
Cost <-> time correlation, before and after adaptation
======================================================

The point of tuning cost parameters is to make estimated cost track actual
execution time.  The shipped synthetic benchmark mixes three tables whose
per-page CPU work differs wildly, so default pricing makes some node costs
meaningless: cheap-looking nodes run slowly and expensive-looking nodes
finish fast.  Adaptive pricing restores a nearly perfect linear
relationship.

The full report (CSVs, scatter panels, summary) lands in demos/output/.
"""

import os

from costtuner import compare, default_benchmark_config, generate_workload, write_report

OUT_DIR = os.path.join(os.path.dirname(__file__), "output", "benchmark_report")

config = default_benchmark_config()
trace = generate_workload(config.workload, seed=7)
report = compare(trace, config, warmup=1)

print(f"queries: {len(trace)}, plan nodes measured: {len(report.baseline.node_pairs)}")
print(f"baseline cost/time correlation: {report.baseline.correlation:.3f}")
print(f"adaptive cost/time correlation: {report.acm.correlation:.3f}")
print(f"plan flips: {len(report.plan_flips)}")
print(f"end-to-end latency improvement: {report.improvement * 100.0:.1f}%")

for path in write_report(report, OUT_DIR):
    print("wrote", path)
