"""Experiment configuration: schema, JSON loading and the shipped scenarios.

One JSON document carries everything an experiment needs: the table catalog,
buffer-cache capacity, the simulator timing profile, the adaptive-model knobs
and (optionally) a workload recipe for trace generation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .bufsim import TimingProfile
from .catalog import Catalog, TableDef
from .errors import ConfigError
from .workload import PhaseConfig, QueryTemplate, WorkloadConfig

CONFIG_FORMAT = "costtuner.config"
CONFIG_VERSION = 1

#: Normalization anchor: one sequential page fetch costs one cost unit.
SEQ_PAGE_COST = 1.0


@dataclass(frozen=True)
class AcmSettings:
    """Knobs of the adaptive models."""

    alpha: float = 0.3
    scale_factor: Union[float, str] = "auto"  # "auto" = 1 / t_seq_page_ms
    min_observations: int = 3
    window_size: int = 512
    refit_every: int = 10
    epsilon_floor: float = 1e-6
    random_page_cost_default: float = 4.0
    ridge_lambda: float = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.scale_factor, str):
            if self.scale_factor != "auto":
                raise ConfigError(
                    f"scale_factor must be a number or 'auto', got {self.scale_factor!r}"
                )
        elif self.scale_factor <= 0:
            raise ConfigError("scale_factor must be > 0")
        if self.random_page_cost_default < SEQ_PAGE_COST:
            raise ConfigError("random_page_cost_default must be >= seq_page_cost")


@dataclass(frozen=True)
class ExperimentConfig:
    catalog: Catalog
    cache_pages: int
    profile: TimingProfile
    acm: AcmSettings = AcmSettings()
    workload: Optional[WorkloadConfig] = None

    def __post_init__(self) -> None:
        if self.cache_pages < 1:
            raise ConfigError("cache_pages must be >= 1")

    @property
    def seq_page_cost(self) -> float:
        return SEQ_PAGE_COST

    @property
    def scale_factor(self) -> float:
        """Time-to-cost conversion, resolved so cost 1.0 equals one sequential fetch."""
        if self.acm.scale_factor == "auto":
            return 1.0 / self.profile.t_seq_page_ms
        return float(self.acm.scale_factor)


def _require(mapping: dict, key: str, context: str):
    try:
        return mapping[key]
    except KeyError:
        raise ConfigError(f"{context}: missing key {key!r}") from None


def config_to_dict(config: ExperimentConfig) -> dict:
    data = {
        "format": CONFIG_FORMAT,
        "version": CONFIG_VERSION,
        "tables": [
            {
                "id": t.table_id,
                "pages": t.n_pages,
                "tuples_per_page": t.tuples_per_page,
                "has_index": t.has_index,
            }
            for t in config.catalog
        ],
        "cache_pages": config.cache_pages,
        "timing": {
            "t_seq_page_ms": config.profile.t_seq_page_ms,
            "t_rand_page_ms": config.profile.t_rand_page_ms,
            "t_hit_page_ms": config.profile.t_hit_page_ms,
            "t_tuple_ms": config.profile.t_tuple_ms,
            "t_op_ms": config.profile.t_op_ms,
            "t_index_entry_ms": config.profile.t_index_entry_ms,
            "noise_sigma": config.profile.noise_sigma,
            "seed": config.profile.seed,
        },
        "acm": {
            "alpha": config.acm.alpha,
            "scale_factor": config.acm.scale_factor,
            "min_observations": config.acm.min_observations,
            "window_size": config.acm.window_size,
            "refit_every": config.acm.refit_every,
            "epsilon_floor": config.acm.epsilon_floor,
            "random_page_cost_default": config.acm.random_page_cost_default,
            "ridge_lambda": config.acm.ridge_lambda,
        },
    }
    if config.workload is not None:
        data["workload"] = {
            "phases": [
                {
                    "length": phase.length,
                    "mix": [
                        {
                            "table": t.table_id,
                            "weight": t.weight,
                            "selectivity": list(t.selectivity_range),
                            "aggregate_prob": t.aggregate_prob,
                        }
                        for t in phase.mix
                    ],
                }
                for phase in config.workload.phases
            ]
        }
    return data


def config_from_dict(data: dict, context: str = "config") -> ExperimentConfig:
    if data.get("format", CONFIG_FORMAT) != CONFIG_FORMAT:
        raise ConfigError(f"{context}: unrecognized format {data.get('format')!r}")
    if data.get("version", CONFIG_VERSION) != CONFIG_VERSION:
        raise ConfigError(f"{context}: unsupported version {data.get('version')!r}")
    try:
        tables = [
            TableDef(
                table_id=str(_require(entry, "id", context)),
                n_pages=int(_require(entry, "pages", context)),
                tuples_per_page=int(_require(entry, "tuples_per_page", context)),
                has_index=bool(entry.get("has_index", False)),
            )
            for entry in _require(data, "tables", context)
        ]
        timing = _require(data, "timing", context)
        profile = TimingProfile(
            t_seq_page_ms=float(_require(timing, "t_seq_page_ms", context)),
            t_rand_page_ms=float(_require(timing, "t_rand_page_ms", context)),
            t_hit_page_ms=float(_require(timing, "t_hit_page_ms", context)),
            t_tuple_ms=float(_require(timing, "t_tuple_ms", context)),
            t_op_ms=float(_require(timing, "t_op_ms", context)),
            t_index_entry_ms=float(_require(timing, "t_index_entry_ms", context)),
            noise_sigma=float(timing.get("noise_sigma", 0.0)),
            seed=int(timing.get("seed", 0)),
        )
        acm_raw = data.get("acm", {})
        scale = acm_raw.get("scale_factor", "auto")
        acm = AcmSettings(
            alpha=float(acm_raw.get("alpha", 0.3)),
            scale_factor=scale if scale == "auto" else float(scale),
            min_observations=int(acm_raw.get("min_observations", 3)),
            window_size=int(acm_raw.get("window_size", 512)),
            refit_every=int(acm_raw.get("refit_every", 10)),
            epsilon_floor=float(acm_raw.get("epsilon_floor", 1e-6)),
            random_page_cost_default=float(acm_raw.get("random_page_cost_default", 4.0)),
            ridge_lambda=float(acm_raw.get("ridge_lambda", 0.0)),
        )
        workload = None
        if "workload" in data:
            phases = []
            for raw_phase in _require(data["workload"], "phases", context):
                templates = []
                for raw_template in _require(raw_phase, "mix", context):
                    selectivity = _require(raw_template, "selectivity", context)
                    templates.append(
                        QueryTemplate(
                            table_id=str(_require(raw_template, "table", context)),
                            weight=float(raw_template.get("weight", 1.0)),
                            selectivity_range=(float(selectivity[0]), float(selectivity[1])),
                            aggregate_prob=float(raw_template.get("aggregate_prob", 0.0)),
                        )
                    )
                phases.append(
                    PhaseConfig(
                        length=int(_require(raw_phase, "length", context)),
                        mix=tuple(templates),
                    )
                )
            workload = WorkloadConfig(phases=tuple(phases))
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"{context}: {exc}") from None
    return ExperimentConfig(
        catalog=Catalog(tables),
        cache_pages=int(_require(data, "cache_pages", context)),
        profile=profile,
        acm=acm,
        workload=workload,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path!r} must be a JSON object")
    return config_from_dict(data, context=f"config {path!r}")


def save_config(config: ExperimentConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(config_to_dict(config), handle, indent=2)
        handle.write("\n")


# ---------------------------------------------------------------------------
# Shipped scenarios.  The timing profiles are deliberately mistuned relative
# to the default cost parameters: processing one tuple really takes 0.3
# sequential-fetch equivalents (defaults assume 0.01), one operation 5.0
# (defaults 0.0025) and one index entry 0.1 (defaults 0.005).  A buffer hit
# costs the same as a sequential fetch, so sequential pricing stays honest and
# residency only matters for random probes -- which is exactly the part the
# disk model adapts.
# ---------------------------------------------------------------------------

_MISTUNED_TIMING = dict(
    t_seq_page_ms=0.1,
    t_rand_page_ms=0.4,
    t_hit_page_ms=0.1,
    t_tuple_ms=0.03,
    t_op_ms=0.5,
    t_index_entry_ms=0.01,
)


def default_benchmark_config(noise_sigma: float = 0.0, seed: int = 20240601) -> ExperimentConfig:
    """Three tables with mixed selectivities and a cache smaller than the data.

    ``hot`` is small, indexed and probed selectively, so it tends to stay
    resident; ``wide`` has many tuples per page (its scans are CPU-bound, far
    above what default pricing expects); ``thin`` has few tuples per page and
    exceeds the cache, so its scans flood and stay disk-bound.  Under default
    parameters the wide and thin tables price almost identically while their
    runtimes differ by an order of magnitude.
    """
    tables = [
        TableDef("hot", n_pages=200, tuples_per_page=50, has_index=True),
        TableDef("wide", n_pages=700, tuples_per_page=200, has_index=False),
        TableDef("thin", n_pages=4000, tuples_per_page=2, has_index=False),
    ]
    profile = TimingProfile(noise_sigma=noise_sigma, seed=seed, **_MISTUNED_TIMING)
    hot_template = QueryTemplate(
        "hot", weight=0.55, selectivity_range=(0.002, 0.018), aggregate_prob=0.3
    )
    wide_template = QueryTemplate(
        "wide", weight=0.25, selectivity_range=(0.05, 0.9), aggregate_prob=0.4
    )
    thin_template = QueryTemplate(
        "thin", weight=0.20, selectivity_range=(0.05, 0.9), aggregate_prob=0.4
    )
    workload = WorkloadConfig(
        phases=(
            # warm the hot table first
            PhaseConfig(length=40, mix=(hot_template,)),
            # steady mixed phase
            PhaseConfig(length=260, mix=(hot_template, wide_template, thin_template)),
        )
    )
    return ExperimentConfig(
        catalog=Catalog(tables),
        cache_pages=1100,
        profile=profile,
        acm=AcmSettings(window_size=256),
        workload=workload,
    )


def hot_table_config(seed: int = 20240602) -> ExperimentConfig:
    """Plan-flip scenario: once the indexed table is resident, index scans win.

    Queries on ``hot`` sit near selectivity 0.01, where default pricing
    prefers the sequential scan but hit-aware random-page pricing prefers the
    index.  ``cold`` interruptions keep the access counters moving.
    """
    tables = [
        TableDef("hot", n_pages=200, tuples_per_page=50, has_index=True),
        TableDef("cold", n_pages=1500, tuples_per_page=50, has_index=False),
    ]
    profile = TimingProfile(noise_sigma=0.0, seed=seed, **_MISTUNED_TIMING)
    workload = WorkloadConfig(
        phases=(
            PhaseConfig(
                length=20,
                mix=(QueryTemplate("hot", selectivity_range=(0.008, 0.015)),),
            ),
            PhaseConfig(
                length=100,
                mix=(
                    QueryTemplate("hot", weight=0.7, selectivity_range=(0.008, 0.015)),
                    QueryTemplate("cold", weight=0.3, selectivity_range=(0.05, 0.9)),
                ),
            ),
        )
    )
    return ExperimentConfig(
        catalog=Catalog(tables),
        cache_pages=800,
        profile=profile,
        acm=AcmSettings(window_size=256),
        workload=workload,
    )


def calibration_config(noise_sigma: float = 0.0, seed: int = 20240603) -> ExperimentConfig:
    """Single fully-cacheable table; isolates CPU parameter recovery.

    With zero noise every post-warm-up observation is an exact linear function
    of its counts, so fits reproduce the hidden per-unit times exactly.
    """
    tables = [TableDef("lab", n_pages=400, tuples_per_page=25, has_index=True)]
    profile = TimingProfile(noise_sigma=noise_sigma, seed=seed, **_MISTUNED_TIMING)
    workload = WorkloadConfig(
        phases=(
            PhaseConfig(
                length=400,
                mix=(
                    QueryTemplate(
                        "lab", weight=0.6, selectivity_range=(0.002, 0.038), aggregate_prob=0.5
                    ),
                    QueryTemplate(
                        "lab", weight=0.4, selectivity_range=(0.05, 0.9), aggregate_prob=0.5
                    ),
                ),
            ),
        )
    )
    return ExperimentConfig(
        catalog=Catalog(tables),
        cache_pages=500,
        profile=profile,
        acm=AcmSettings(window_size=128),
        workload=workload,
    )
