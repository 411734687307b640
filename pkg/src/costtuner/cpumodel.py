"""Online fitting of the CPU cost parameters from operator execution statistics.

Per operator type the model keeps a bounded window of observations, refits
(cpu_tuple_cost, cpu_operator_cost, cpu_index_tuple_cost) by classical least
squares every ``refit_every`` new rows, and smooths the sequence of fits with
an exponential moving average.  The disk component of each observation enters
the regression target with a fixed coefficient of 1, so only the three CPU
parameters are free.

Same concurrency contract as the disk model: one writer (ingest), many
readers (current_params), serialized externally.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .costmodel import DEFAULT_CPU_PARAMS, OperatorType
from .errors import UnderdeterminedError

#: Column order of the free parameters in a fit: (c_t, c_o, c_i).
PARAM_NAMES = ("c_t", "c_o", "c_i")

OptTriple = Tuple[Optional[float], Optional[float], Optional[float]]


@dataclass(frozen=True)
class OperatorObservation:
    """One executed operator: counts, disk cost share and measured time."""

    op_type: OperatorType
    n_tuples: int
    n_operations: int
    n_index_entries: int
    disk_cost: float  # seq/random page cost priced with the disk model's parameters
    exec_time_ms: float

    def __post_init__(self) -> None:
        for name in ("n_tuples", "n_operations", "n_index_entries", "disk_cost", "exec_time_ms"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class CpuModelConfig:
    scale_factor: float  # converts measured milliseconds into cost units
    alpha: float = 0.3  # EMA weight kept on the previous prediction
    window_size: int = 512
    refit_every: int = 10
    epsilon_floor: float = 1e-6
    ridge_lambda: float = 0.0  # optional stabilizer; 0 keeps plain least squares
    default_params: Tuple[float, float, float] = DEFAULT_CPU_PARAMS

    def __post_init__(self) -> None:
        if self.scale_factor <= 0:
            raise ValueError("scale_factor must be > 0")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.window_size < 1 or self.refit_every < 1:
            raise ValueError("window_size and refit_every must be >= 1")
        if self.epsilon_floor <= 0:
            raise ValueError("epsilon_floor must be > 0")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be >= 0")


@dataclass
class CpuFit:
    """Latest fit state for one operator type; None means never fitted."""

    op_type: OperatorType
    c_t: Optional[float] = None
    c_o: Optional[float] = None
    c_i: Optional[float] = None
    smoothed_c_t: Optional[float] = None
    smoothed_c_o: Optional[float] = None
    smoothed_c_i: Optional[float] = None
    n_samples: int = 0
    step: int = 0  # number of successful fits so far


def smooth(previous_pred: float, latest_fit: float, alpha: float) -> float:
    """Exponential moving average update.

    The new prediction keeps weight ``alpha`` on the previous prediction and
    ``1 - alpha`` on the latest fitted value.  Note this is the mirror of the
    more common convention; passing ``alpha' = 1 - alpha`` recovers it.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    return (1 - alpha) * latest_fit + alpha * previous_pred


def solve_least_squares(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Unconstrained least-squares coefficients for ``design @ c ~ target``."""
    solution, *_ = np.linalg.lstsq(np.asarray(design, dtype=float),
                                   np.asarray(target, dtype=float), rcond=None)
    return solution


def fit_cpu_params(
    observations: Sequence[OperatorObservation], config: CpuModelConfig
) -> OptTriple:
    """Least-squares fit of the CPU parameter triple from one type's rows.

    The target for each row is ``exec_time * scale_factor - disk_cost``.
    Columns that are identically zero across all rows cannot be identified
    and come back as None (callers retain their previous values).  Fitted
    values are clamped below by ``epsilon_floor`` so costs stay positive.

    Raises :class:`UnderdeterminedError` when there are fewer rows than
    active columns.
    """
    if not observations:
        raise ValueError("observations must be nonempty")
    op_type = observations[0].op_type
    if any(obs.op_type != op_type for obs in observations):
        raise ValueError("all observations must share one operator type")

    columns = np.array(
        [[obs.n_tuples, obs.n_operations, obs.n_index_entries] for obs in observations],
        dtype=float,
    )
    target = np.array(
        [obs.exec_time_ms * config.scale_factor - obs.disk_cost for obs in observations],
        dtype=float,
    )
    active = [c for c in range(3) if np.any(columns[:, c] != 0.0)]
    result: List[Optional[float]] = [None, None, None]
    if not active:
        return tuple(result)  # type: ignore[return-value]
    if len(observations) < len(active):
        raise UnderdeterminedError(
            f"{len(observations)} rows cannot determine {len(active)} parameters"
        )
    design = columns[:, active]
    if config.ridge_lambda > 0:
        gram = design.T @ design + config.ridge_lambda * np.eye(len(active))
        solution = np.linalg.solve(gram, design.T @ target)
    else:
        solution = solve_least_squares(design, target)
    for col, value in zip(active, solution):
        result[col] = max(float(value), config.epsilon_floor)
    return tuple(result)  # type: ignore[return-value]


class CpuModel:
    """Observation store plus fit/smooth bookkeeping, per operator type."""

    def __init__(self, config: CpuModelConfig):
        self.config = config
        self._buffers: Dict[OperatorType, Deque[OperatorObservation]] = {}
        self._pending: Dict[OperatorType, int] = {}
        self._fits: Dict[OperatorType, CpuFit] = {}
        self.history: List[CpuFit] = []  # one entry per successful refit

    def observations(self, op_type: OperatorType) -> List[OperatorObservation]:
        return list(self._buffers.get(op_type, ()))

    def ingest(self, obs: OperatorObservation) -> None:
        """Append an observation and refit its type when the cadence is due."""
        buffer = self._buffers.get(obs.op_type)
        if buffer is None:
            buffer = deque(maxlen=self.config.window_size)
            self._buffers[obs.op_type] = buffer
        buffer.append(obs)
        self._pending[obs.op_type] = self._pending.get(obs.op_type, 0) + 1
        if self._pending[obs.op_type] >= self.config.refit_every:
            self._pending[obs.op_type] = 0
            self.refit(obs.op_type)

    def refit(self, op_type: OperatorType) -> Optional[CpuFit]:
        """Refit one type from its current window; keeps the old fit on failure."""
        rows = self.observations(op_type)
        if not rows:
            return None
        try:
            fitted = fit_cpu_params(rows, self.config)
        except UnderdeterminedError:
            return self._fits.get(op_type)
        state = self._fits.get(op_type)
        if state is None:
            state = CpuFit(op_type)
            self._fits[op_type] = state
        alpha = self.config.alpha
        for name, value in zip(PARAM_NAMES, fitted):
            if value is None:
                continue  # unidentified column: retain previous values
            setattr(state, name, value)
            previous = getattr(state, f"smoothed_{name}")
            smoothed = value if previous is None else smooth(previous, value, alpha)
            setattr(state, f"smoothed_{name}", smoothed)
        state.n_samples = len(rows)
        state.step += 1
        self.history.append(
            CpuFit(
                op_type=op_type,
                c_t=state.c_t,
                c_o=state.c_o,
                c_i=state.c_i,
                smoothed_c_t=state.smoothed_c_t,
                smoothed_c_o=state.smoothed_c_o,
                smoothed_c_i=state.smoothed_c_i,
                n_samples=state.n_samples,
                step=state.step,
            )
        )
        return state

    def latest_fit(self, op_type: OperatorType) -> Optional[CpuFit]:
        return self._fits.get(op_type)

    def current_params(self, op_type: OperatorType) -> Tuple[float, float, float]:
        """Smoothed CPU triple for pricing; configured defaults where unfitted."""
        defaults = self.config.default_params
        state = self._fits.get(op_type)
        if state is None:
            return defaults
        return (
            defaults[0] if state.smoothed_c_t is None else state.smoothed_c_t,
            defaults[1] if state.smoothed_c_o is None else state.smoothed_c_o,
            defaults[2] if state.smoothed_c_i is None else state.smoothed_c_i,
        )

    def history_rows(self) -> List[dict]:
        """Fit history as flat dicts, ready for CSV export."""
        return [
            {
                "op_type": fit.op_type.value,
                "step": fit.step,
                "c_t": fit.c_t,
                "c_o": fit.c_o,
                "c_i": fit.c_i,
                "smoothed_c_t": fit.smoothed_c_t,
                "smoothed_c_o": fit.smoothed_c_o,
                "smoothed_c_i": fit.smoothed_c_i,
                "n_samples": fit.n_samples,
            }
            for fit in self.history
        ]
