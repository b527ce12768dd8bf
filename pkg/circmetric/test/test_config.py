import json
import os

import pytest

from circmetric.config import RunConfig, build_config, load_config
from circmetric.errors import ConfigError, InvalidParams, NonFinite

SAMPLE_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "sample_config.json")


def test_defaults():
    cfg = RunConfig()
    assert cfg.metric == (3.0, 1.0, 2.0)
    assert cfg.params == (2.0, 1.0)
    assert cfg.vector == (1.0, 0.0, 0.0, 0.0)
    assert cfg.steps == 40
    assert cfg.tolerance == 1e-9
    assert cfg.output_format == "table"
    assert cfg.workers == 4
    assert cfg.conformal.alpha == 2.0


def test_load_sample_config():
    cfg = RunConfig.from_dict(load_config(SAMPLE_CONFIG))
    assert cfg.steps == 50
    assert cfg.output_format == "json"
    assert cfg.point == (0.3, 0.4, 0.2, 0.6)
    for subcommand in ("det", "posdef", "angles", "transform", "iterate", "check-fields", "sweep"):
        cfg.validate(subcommand)


def test_flags_override_file_values():
    cfg = build_config(load_config(SAMPLE_CONFIG), {"steps": 7, "metric": (5.0, 1.0, 2.0), "out": None})
    assert cfg.steps == 7
    assert cfg.metric == (5.0, 1.0, 2.0)
    assert cfg.output_format == "json"


def test_round_trips_through_dict():
    cfg = RunConfig(point=(0.1, 0.2, 0.3, 0.4), field_family="linear")
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    json.dumps(cfg.to_dict())


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(str(tmp_path / "missing.json"))
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(ConfigError, match="decode"):
        load_config(str(bad_json))
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"metric": [3, 1, 2], "colour": "red"}))
    with pytest.raises(ConfigError, match="colour"):
        load_config(str(unknown))
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"vector": [1, 0, 0]}))
    with pytest.raises(ConfigError, match="vector"):
        load_config(str(short))


def test_validate_per_subcommand():
    with pytest.raises(InvalidParams):
        RunConfig(params=(1.0, 2.0)).validate("transform")
    # det does not consume the conformal parameters
    RunConfig(params=(1.0, 2.0)).validate("det")
    with pytest.raises(ConfigError, match="steps"):
        RunConfig(steps=-1).validate("iterate")
    with pytest.raises(ConfigError, match="tolerance"):
        RunConfig(tolerance=0.0).validate("iterate")
    with pytest.raises(NonFinite):
        RunConfig(metric=(float("nan"), 1.0, 2.0)).validate("det")
    with pytest.raises(ConfigError, match="output_format"):
        RunConfig(output_format="xml").validate("det")
    with pytest.raises(ConfigError, match="subcommand"):
        RunConfig().validate("plot")


def test_validate_check_fields():
    with pytest.raises(ConfigError, match="family"):
        RunConfig().validate("check-fields")
    with pytest.raises(ConfigError, match="unknown field family"):
        RunConfig(field_family="sine", point=(0.3, 0.4, 0.2, 0.6)).validate("check-fields")
    with pytest.raises(ConfigError, match="--point"):
        RunConfig(field_family="linear").validate("check-fields")
    with pytest.raises(ConfigError, match="fd_step"):
        RunConfig(field_family="linear", samples=3, fd_step=-1.0).validate("check-fields")
    RunConfig(field_family="linear", samples=3).validate("check-fields")


def test_validate_sweep():
    with pytest.raises(ConfigError, match="count"):
        RunConfig(sweep_alpha=(1.0, 2.0, 0)).validate("sweep")
    with pytest.raises(ConfigError, match="workers"):
        RunConfig(workers=0).validate("sweep")


@pytest.mark.parametrize(
    "values, key",
    [
        ({"steps": "ten"}, "steps"),
        ({"steps": 2.5}, "steps"),
        ({"steps": True}, "steps"),
        ({"samples": [3]}, "samples"),
        ({"workers": "four"}, "workers"),
        ({"tolerance": "tiny"}, "tolerance"),
        ({"fd_step": {"h": 1e-4}}, "fd_step"),
        ({"output_format": 3}, "output_format"),
        ({"renormalize": "yes"}, "renormalize"),
        ({"steps": None}, "steps"),
    ],
)
def test_scalar_values_are_type_checked(tmp_path, values, key):
    path = tmp_path / "typed.json"
    path.write_text(json.dumps(values))
    with pytest.raises(ConfigError, match=key):
        load_config(str(path))


def test_numeric_strings_and_whole_floats_are_coerced():
    cfg = RunConfig.from_dict({"steps": 50.0, "workers": "2", "samples": 3, "tolerance": "1e-8", "fd_step": 1})
    assert (cfg.steps, cfg.workers, cfg.samples) == (50, 2, 3)
    assert isinstance(cfg.steps, int)
    assert cfg.tolerance == 1e-8
    assert cfg.fd_step == 1.0


def test_unreadable_config_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError, match="could not read"):
        load_config(str(tmp_path))
    binary = tmp_path / "binary.json"
    binary.write_bytes(b"\xff\xfe\x00garbage")
    with pytest.raises(ConfigError):
        load_config(str(binary))
