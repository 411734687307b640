import json

import pytest

from costtuner.config import (
    AcmSettings,
    calibration_config,
    config_from_dict,
    config_to_dict,
    default_benchmark_config,
    hot_table_config,
    load_config,
    save_config,
)
from costtuner.errors import ConfigError


BUILDERS = [default_benchmark_config, hot_table_config, calibration_config]


class TestRoundTrip:
    @pytest.mark.parametrize("builder", BUILDERS)
    def test_dict_round_trip(self, builder):
        config = builder()
        restored = config_from_dict(config_to_dict(config))
        assert config_to_dict(restored) == config_to_dict(config)

    @pytest.mark.parametrize("builder", BUILDERS)
    def test_file_round_trip(self, builder, tmp_path):
        config = builder()
        path = tmp_path / "config.json"
        save_config(config, str(path))
        restored = load_config(str(path))
        assert config_to_dict(restored) == config_to_dict(config)


class TestResolution:
    def test_auto_scale_factor(self):
        config = default_benchmark_config()
        assert config.acm.scale_factor == "auto"
        assert config.scale_factor == pytest.approx(1.0 / config.profile.t_seq_page_ms)

    def test_explicit_scale_factor(self):
        data = config_to_dict(default_benchmark_config())
        data["acm"]["scale_factor"] = 25.0
        assert config_from_dict(data).scale_factor == 25.0

    def test_seq_page_cost_is_normalized(self):
        assert default_benchmark_config().seq_page_cost == 1.0


class TestValidation:
    def test_missing_key(self):
        data = config_to_dict(default_benchmark_config())
        del data["cache_pages"]
        with pytest.raises(ConfigError):
            config_from_dict(data)

    def test_bad_scale_factor_string(self):
        with pytest.raises(ConfigError):
            AcmSettings(scale_factor="fast")

    def test_rpc_default_below_seq(self):
        with pytest.raises(ConfigError):
            AcmSettings(random_page_cost_default=0.5)

    def test_unknown_format(self):
        data = config_to_dict(default_benchmark_config())
        data["format"] = "something.else"
        with pytest.raises(ConfigError):
            config_from_dict(data)

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/config.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_non_object_json(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ConfigError):
            load_config(str(path))


class TestShippedFiles:
    @pytest.mark.parametrize(
        "builder,name",
        [
            (default_benchmark_config, "default_benchmark.json"),
            (hot_table_config, "hot_table.json"),
            (calibration_config, "calibration.json"),
        ],
    )
    def test_shipped_file_matches_builder(self, builder, name):
        # the files under configs/ are exports of the builders; keep in sync
        import pathlib

        path = pathlib.Path(__file__).resolve().parent.parent / "configs" / name
        with open(path) as handle:
            assert json.load(handle) == config_to_dict(builder())


class TestScenarioShapes:
    def test_default_benchmark_cache_smaller_than_data(self):
        config = default_benchmark_config()
        assert config.cache_pages < config.catalog.total_pages()
        assert len(config.catalog.table_ids()) == 3

    def test_hot_table_fits_in_cache(self):
        config = hot_table_config()
        assert config.catalog.get("hot").n_pages <= config.cache_pages

    def test_calibration_table_fits_in_cache(self):
        config = calibration_config()
        assert config.catalog.get("lab").n_pages <= config.cache_pages
