import pytest

from costtuner.errors import ConfigError
from costtuner.workload import (
    PhaseConfig,
    QueryTemplate,
    WorkloadConfig,
    generate_workload,
    load_trace,
    save_trace,
)


def single_table_workload(length, table="a", selectivity=(0.01, 0.5)):
    return WorkloadConfig(
        phases=(
            PhaseConfig(
                length=length,
                mix=(QueryTemplate(table, selectivity_range=selectivity),),
            ),
        )
    )


class TestGenerate:
    def test_zero_length_gives_empty_trace(self):
        trace = generate_workload(single_table_workload(0), seed=1)
        assert len(trace) == 0

    def test_same_seed_identical(self):
        config = WorkloadConfig(
            phases=(
                PhaseConfig(
                    length=50,
                    mix=(
                        QueryTemplate("a", weight=0.5, aggregate_prob=0.3),
                        QueryTemplate("b", weight=0.5, selectivity_range=(0.1, 0.9)),
                    ),
                ),
            )
        )
        assert generate_workload(config, seed=9) == generate_workload(config, seed=9)

    def test_different_seed_differs(self):
        config = single_table_workload(50)
        a = generate_workload(config, seed=1)
        b = generate_workload(config, seed=2)
        assert [q.query for q in a] != [q.query for q in b]

    def test_pure_single_table_mix(self):
        trace = generate_workload(single_table_workload(50, table="only"), seed=3)
        assert len(trace) == 50
        assert all(q.query.table_id == "only" for q in trace)

    def test_labels_are_sequential(self):
        trace = generate_workload(single_table_workload(3), seed=3)
        assert [q.label for q in trace] == ["q0001", "q0002", "q0003"]

    def test_selectivities_stay_in_range(self):
        trace = generate_workload(single_table_workload(200, selectivity=(0.02, 0.2)), seed=4)
        assert all(0.02 <= q.query.selectivity <= 0.2 for q in trace)

    def test_phases_run_in_order(self):
        config = WorkloadConfig(
            phases=(
                PhaseConfig(length=3, mix=(QueryTemplate("first"),)),
                PhaseConfig(length=2, mix=(QueryTemplate("second"),)),
            )
        )
        trace = generate_workload(config, seed=5)
        assert [q.query.table_id for q in trace] == ["first"] * 3 + ["second"] * 2


class TestValidation:
    def test_rejects_negative_weight(self):
        with pytest.raises(ConfigError):
            QueryTemplate("a", weight=-1.0)

    def test_rejects_all_zero_weights(self):
        with pytest.raises(ConfigError):
            PhaseConfig(length=1, mix=(QueryTemplate("a", weight=0.0),))

    def test_rejects_bad_selectivity_range(self):
        with pytest.raises(ConfigError):
            QueryTemplate("a", selectivity_range=(0.0, 0.5))
        with pytest.raises(ConfigError):
            QueryTemplate("a", selectivity_range=(0.6, 0.5))

    def test_rejects_empty_phase_mix(self):
        with pytest.raises(ConfigError):
            PhaseConfig(length=1, mix=())

    def test_rejects_empty_workload(self):
        with pytest.raises(ConfigError):
            WorkloadConfig(phases=())


class TestTraceFiles:
    def test_round_trip(self, tmp_path):
        trace = generate_workload(single_table_workload(25), seed=11)
        path = tmp_path / "trace.jsonl"
        save_trace(trace, str(path))
        loaded = load_trace(str(path))
        assert loaded.queries == trace.queries
        assert loaded.seed == 11

    def test_header_is_first_line(self, tmp_path):
        trace = generate_workload(single_table_workload(2), seed=11)
        path = tmp_path / "trace.jsonl"
        save_trace(trace, str(path))
        first = path.read_text().splitlines()[0]
        assert '"format": "costtuner.trace"' in first
        assert '"version": 1' in first

    def test_rejects_missing_header(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"label": "q1", "table": "a", "selectivity": 0.5, "aggregate": false}\n')
        with pytest.raises(ConfigError):
            load_trace(str(path))

    def test_rejects_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(ConfigError):
            load_trace(str(path))

    def test_rejects_bad_row(self, tmp_path):
        path = tmp_path / "bad_row.jsonl"
        path.write_text(
            '{"format": "costtuner.trace", "version": 1, "seed": 1}\n'
            '{"label": "q1", "table": "a"}\n'
        )
        with pytest.raises(ConfigError):
            load_trace(str(path))
