import json

import pytest

from src.hgspec.config_builder import build_run_config, split_known
from src.hgspec.errors import ParameterDomainError
from src.hgspec.run_configs import GramConfig, InvertConfig, MomentsConfig, ProductConfig
from src.hgspec.run_reader import COMMAND_DEFAULTS, RunReader


@pytest.fixture
def reader(session):
    return RunReader(session=session)


def test_single_run_file(tmp_path, reader):
    f = tmp_path / "one.yml"
    f.write_text("command: product\nm: 2\nn: 3\nr: \"1/4\"\n", encoding="utf-8")
    [run] = reader.read_path(f)
    assert run.command == "product"
    assert run.label == "one_01_product"
    assert run.raw_args == {"m": 2, "n": 3, "r": "1/4", "check": True}


def test_runs_list_with_defaults(tmp_path, reader):
    f = tmp_path / "many.yaml"
    f.write_text(
        "defaults:\n  r: \"1/3\"\n"
        "runs:\n"
        "  - command: table\n    label: t\n"
        "  - command: moments\n    lambda: \"3/2\"\n    r: \"1/4\"\n",
        encoding="utf-8",
    )
    first, second = reader.read_path(f)
    assert first.label == "t"
    assert first.raw_args == {"r": "1/3", "max_degree": 10}
    assert second.label == "many_02_moments"
    assert second.raw_args["r"] == "1/4"
    assert second.raw_args["max_n"] == COMMAND_DEFAULTS["moments"]["max_n"]


def test_json_run_file(tmp_path, reader):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"command": "gram", "lambda": "2", "radius": 1}), encoding="utf-8")
    [run] = reader.read_path(f)
    cfg = build_run_config(run.command, run.raw_args)
    assert isinstance(cfg, GramConfig)
    assert cfg.lam == "2"
    assert cfg.radius == 1
    assert cfg.twist is True


def test_directory_is_read_in_name_order(tmp_path, reader):
    (tmp_path / "b.yml").write_text("command: classify\nlambda: \"2\"\n", encoding="utf-8")
    (tmp_path / "a.yaml").write_text("command: table\n", encoding="utf-8")
    (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
    runs = reader.read_path(tmp_path)
    assert [r.command for r in runs] == ["table", "classify"]


def test_unknown_command(tmp_path, reader):
    f = tmp_path / "bad.yml"
    f.write_text("command: frobnicate\n", encoding="utf-8")
    with pytest.raises(ParameterDomainError):
        reader.read_path(f)


def test_malformed_yaml_is_a_domain_error(tmp_path, reader):
    f = tmp_path / "broken.yml"
    f.write_text("runs: [\n  - command: table\n", encoding="utf-8")
    with pytest.raises(ParameterDomainError):
        reader.read_path(f)


def test_top_level_must_be_a_mapping(tmp_path, reader):
    f = tmp_path / "list.yml"
    f.write_text("- command: table\n", encoding="utf-8")
    with pytest.raises(ParameterDomainError):
        reader.read_path(f)


def test_missing_path(reader):
    with pytest.raises(FileNotFoundError):
        reader.read_path("no/such/file.yml")


def test_ignored_keys_are_reported(tmp_path, session, caplog):
    session.logger.addHandler(caplog.handler)
    try:
        f = tmp_path / "extra.yml"
        f.write_text("command: table\nwobble: 3\n", encoding="utf-8")
        RunReader(session=session).read_path(f)
    finally:
        session.logger.removeHandler(caplog.handler)
    warnings = [r.getMessage() for r in caplog.records if r.levelname == "WARNING"]
    assert any("keys=wobble" in m for m in warnings)


# ---------- config building ----------

def test_aliases_and_coercion():
    cfg = build_run_config("moments", {"lambda": 1.5, "N": "12", "r": 0.25, "tol": "1e-6"})
    assert isinstance(cfg, MomentsConfig)
    assert cfg.functional == "1.5"
    assert cfg.max_n == 12
    assert cfg.r == "0.25"
    assert cfg.tol == 1e-6


def test_phi_alias_and_dashed_keys():
    cfg = build_run_config("invert", {"phi": "delta0", "end-band": 0.1, "strict": "yes"})
    assert isinstance(cfg, InvertConfig)
    assert cfg.functional == "delta0"
    assert cfg.end_band == 0.1
    assert cfg.strict is True


def test_bad_integer_is_a_domain_error():
    with pytest.raises(ParameterDomainError):
        build_run_config("product", {"m": "two", "n": 1})


def test_split_known_lists_dropped_keys():
    kwargs, ignored = split_known("product", {"m": 1, "n": 2, "colour": "red", "command": "product"})
    assert kwargs == {"m": 1, "n": 2}
    assert ignored == ["colour"]


def test_build_run_config_defaults():
    cfg = build_run_config("product", {"m": 1, "n": 1})
    assert cfg == ProductConfig(m=1, n=1)
