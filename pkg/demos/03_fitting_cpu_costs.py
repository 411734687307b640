"""
Recovering CPU cost parameters from execution statistics
========================================================

Each executed operator contributes one observation row: its counts, the
disk share of its cost, and its measured time.  Fitting the three CPU
constants is then a small least-squares problem per operator type, and an
exponential moving average smooths the sequence of fits.

Here we synthesize observations from known "true" constants with noise and
watch the fitted and smoothed values approach the truth.
"""

import os
import random

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from costtuner import (
    CpuModel,
    CpuModelConfig,
    OperatorObservation,
    OperatorType,
    smooth,
)

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT_DIR, exist_ok=True)

TRUE_C_T, TRUE_C_O = 0.25, 1.5  # hidden per-tuple and per-operation cost
rng = random.Random(42)

model = CpuModel(
    CpuModelConfig(scale_factor=1.0, alpha=0.3, window_size=200, refit_every=10)
)

for _ in range(400):
    n_tuples = rng.randint(10, 5000)
    n_groups = rng.randint(1, 80)
    disk_share = rng.uniform(0.0, 20.0)
    clean = TRUE_C_T * n_tuples + TRUE_C_O * n_groups + disk_share
    noisy = clean * rng.lognormvariate(0.0, 0.05)
    model.ingest(
        OperatorObservation(
            op_type=OperatorType.AGG,
            n_tuples=n_tuples,
            n_operations=n_groups,
            n_index_entries=0,
            disk_cost=disk_share,
            exec_time_ms=noisy,
        )
    )

fits = [row for row in model.history_rows() if row["op_type"] == "Agg"]
print(f"{len(fits)} refits; final per-tuple estimate "
      f"raw={fits[-1]['c_t']:.4f} smoothed={fits[-1]['smoothed_c_t']:.4f} "
      f"(truth {TRUE_C_T})")
print(f"final per-operation estimate "
      f"raw={fits[-1]['c_o']:.4f} smoothed={fits[-1]['smoothed_c_o']:.4f} "
      f"(truth {TRUE_C_O})")

# The smoothing rule keeps weight alpha on the previous prediction:
print("\nsmoothing example: previous=4, latest=2, alpha=0.5 ->",
      smooth(4.0, 2.0, alpha=0.5))

fig, axis = plt.subplots(figsize=(7, 4))
steps = [row["step"] for row in fits]
axis.plot(steps, [row["c_t"] for row in fits], alpha=0.5, label="fitted per-tuple")
axis.plot(steps, [row["smoothed_c_t"] for row in fits], label="smoothed per-tuple")
axis.axhline(TRUE_C_T, linestyle="--", color="k", label="truth")
axis.set_xlabel("refit number")
axis.set_ylabel("cost units per tuple")
axis.legend()
axis.set_title("per-tuple cost estimate under 5% noise")
fig.tight_layout()
target = os.path.join(OUT_DIR, "cpu_fit_trajectory.svg")
fig.savefig(target)
print("wrote", target)
