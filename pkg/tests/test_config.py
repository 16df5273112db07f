"""Tests for configuration loading, snapshots and the metrics writer.

Focus: precedence between file, environment and explicit overrides.
"""
import io
import json

import pytest

from jointparse.core.config import (
    DEFAULT_PUNCT_TAGS,
    build_config,
    config_snapshot,
    env_overrides,
    load_config,
    parse_config_text,
)
from jointparse.core.errors import ConfigError
from jointparse.core.logging import MetricsWriter


def test_defaults_without_sources():
    cfg = load_config(env={})
    assert cfg.train.lr == 0.05
    assert cfg.model.leaky_slope == 0.1
    assert cfg.train.objective == "joint"
    assert cfg.run.punct_tags == list(DEFAULT_PUNCT_TAGS)


def test_env_overrides_defaults(monkeypatch):
    monkeypatch.setenv("JOINTPARSE_LR", "0.2")
    monkeypatch.setenv("JOINTPARSE_SECOND_ORDER", "true")
    monkeypatch.setenv("JOINTPARSE_UNRELATED", "x")
    cfg = load_config()
    assert cfg.train.lr == 0.2
    assert cfg.train.second_order is True


def test_backward_compat_keys(monkeypatch):
    monkeypatch.setenv("JOINTPARSE_LEARNING_RATE", "0.3")
    cfg = load_config()
    assert cfg.train.lr == 0.3
    assert build_config({"n_epochs": 7, "epochs": 3}).train.epochs == 3


def test_file_then_env_then_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# training\nlr = 0.01\nepochs = 4\nbatch = 2\nmlp_dim = 16  # k\n", encoding="utf-8")
    cfg = load_config(str(path), overrides={"epochs": 9, "seed": None}, env={"JOINTPARSE_LR": "0.02"})
    assert cfg.train.lr == 0.02
    assert cfg.train.epochs == 9
    assert cfg.train.batch_size == 2
    assert cfg.model.mlp_dim == 16


def test_seed_sets_both_seeds():
    cfg = build_config({"seed": 42})
    assert cfg.model.seed == 42
    assert cfg.train.seed == 42


def test_punct_tags_split_on_whitespace():
    cfg = build_config({"punct_tags": ", . :"})
    assert cfg.run.punct_tags == [",", ".", ":"]


def test_decoder_choice(monkeypatch):
    assert build_config({}).run.decoder == "joint"
    monkeypatch.setenv("JOINTPARSE_DECODER", "Separate")
    assert load_config().run.decoder == "separate"
    with pytest.raises(ConfigError):
        build_config({"decoder": "greedy"})


def test_invalid_values_raise_config_error():
    with pytest.raises(ConfigError):
        build_config({"no_such_key": 1})
    with pytest.raises(ConfigError):
        build_config({"objective": "mtl", "second_order": True})
    with pytest.raises(ConfigError):
        build_config({"word_dim": 7})
    with pytest.raises(ConfigError):
        build_config({"lr": -1})
    with pytest.raises(ConfigError):
        parse_config_text("lr 0.1")


def test_env_only_picks_known_keys():
    found = env_overrides({"JOINTPARSE_EPOCHS": "3", "JOINTPARSE_NOPE": "1", "OTHER_LR": "9"})
    assert found == {"epochs": "3"}


def test_snapshot_is_flat():
    snap = config_snapshot(build_config({"lr": 0.1}))
    assert snap["train.lr"] == 0.1
    assert "model.word_dim" in snap
    assert all("." in key for key in snap)


def test_metrics_writer_emits_json_lines():
    buf = io.StringIO()
    with MetricsWriter(stream=buf) as sink:
        sink.write({"epoch": 1, "loss": 0.5})
        sink.write({"epoch": 2, "loss": 0.25})
    records = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert [r["epoch"] for r in records] == [1, 2]
    assert "elapsed_s" in records[0]


def test_metrics_writer_appends_to_file(tmp_path):
    path = str(tmp_path / "m.jsonl")
    with MetricsWriter(path) as sink:
        sink.write({"epoch": 1})
    with MetricsWriter(path) as sink:
        sink.write({"epoch": 2})
    with open(path, encoding="utf-8") as f:
        assert len(f.readlines()) == 2
