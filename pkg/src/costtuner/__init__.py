"""costtuner: adaptive optimizer cost parameters on a deterministic simulator.

The package has three layers:

* cost vocabulary and models — :mod:`costtuner.costmodel`,
  :mod:`costtuner.diskmodel`, :mod:`costtuner.cpumodel`;
* a mini storage engine and planner — :mod:`costtuner.bufsim`,
  :mod:`costtuner.planner`, :mod:`costtuner.catalog`;
* the experiment harness — :mod:`costtuner.workload`, :mod:`costtuner.replay`,
  :mod:`costtuner.report`, :mod:`costtuner.config` and the ``costtuner`` CLI.
"""

from .bufsim import (
    ExecutionRecord,
    LRUCache,
    OperatorExecution,
    Simulator,
    TimingProfile,
    execute_agg,
    execute_index_scan,
    execute_seq_scan,
)
from .catalog import (
    Catalog,
    TableDef,
    agg_group_count,
    index_entry_count,
    selected_tuples,
)
from .config import (
    AcmSettings,
    ExperimentConfig,
    calibration_config,
    config_from_dict,
    config_to_dict,
    default_benchmark_config,
    hot_table_config,
    load_config,
    save_config,
)
from .costmodel import (
    DEFAULT_COST_PARAMS,
    DEFAULT_CPU_PARAMS,
    CostParams,
    OperatorCounts,
    OperatorType,
    agg_cost,
    index_scan_cost,
    iter_plan_nodes,
    operator_cost,
    plan_cost,
    seq_scan_cost,
)
from .cpumodel import (
    CpuFit,
    CpuModel,
    CpuModelConfig,
    OperatorObservation,
    fit_cpu_params,
    smooth,
    solve_least_squares,
)
from .diskmodel import DiskModel, TableBufferStats, degradation_factor
from .errors import ConfigError, UndefinedCorrelationError, UnderdeterminedError
from .lsq_oracle import fit_observation_rows, normal_equations_solve
from .planner import (
    PlanNode,
    QuerySpec,
    describe_plan,
    enumerate_and_choose,
    estimated_vs_actual,
    plan_total_cost,
)
from .replay import (
    ACM,
    BASELINE,
    ModeResult,
    QueryResult,
    RunReport,
    compare,
    pearson,
    replay,
    summary_improvement,
)
from .report import write_report
from .workload import (
    PhaseConfig,
    TracedQuery,
    WorkloadConfig,
    WorkloadTrace,
    generate_workload,
    load_trace,
    save_trace,
)

__version__ = "0.1.0"
