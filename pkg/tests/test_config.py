from __future__ import annotations

from datetime import date

import pytest

from newsstance.config import ConfigError, config_from_dict, load_config
from newsstance.labels import PartyLabel


def test_demo_config(demo_dir):
    cfg = load_config(demo_dir / "config.yaml")
    assert cfg.output_dir == demo_dir / "out"
    assert cfg.fixture_dir == demo_dir / "site"
    assert (cfg.since, cfg.until) == (date(2024, 6, 24), date(2024, 6, 27))
    assert [s.rubrique_id for s in cfg.sources] == [31, 52]
    assert cfg.mode == "lexicon" and cfg.fetch.min_interval_per_host == 0
    assert {g.name: g.members for g in cfg.grouping}["Izquierda"] == frozenset({PartyLabel.LFI, PartyLabel.PS})
    assert "de" in cfg.vocab.stopword_list


def test_defaults(tmp_path):
    cfg = config_from_dict({}, tmp_path)
    assert cfg.output_dir == tmp_path / "out"
    assert cfg.fetch.min_interval_per_host == 1.0 and cfg.fetch.respect_robots
    assert cfg.seed_size == 50 and cfg.table_format == "delimited"


@pytest.mark.parametrize("raw,message", [
    ({"window": {"since": "2024-06-28", "until": "2024-06-24"}}, "after"),
    ({"window": {"since": "yesterday"}}, "ISO date"),
    ({"classifier": {"mode": "remote"}}, "endpoint"),
    ({"classifier": {"mode": "oracle"}}, "mode"),
    ({"sources": [{"base_url": "nope", "rubrique_id": 31, "category_label": "x"}]}, "feed source"),
    ({"grouping": {"A": ["RN"], "B": ["Pirata"]}}, "grouping"),
    ({"fetch": {"min_interval": -2}}, "min_interval"),
    ({"report": {"format": "xlsx"}}, "format"),
])
def test_invalid_configs(tmp_path, raw, message):
    with pytest.raises(ConfigError, match=message):
        config_from_dict(raw, tmp_path).validate()


def test_unreadable_or_bad_yaml(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("sources: [unclosed", "utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)
    listy = tmp_path / "list.yaml"
    listy.write_text("- a\n- b\n", "utf-8")
    with pytest.raises(ConfigError):
        load_config(listy)


def test_remote_settings_never_hold_the_key(tmp_path):
    cfg = config_from_dict({"classifier": {"mode": "remote", "endpoint": {
        "url": "https://llm.example/v1/chat/completions", "model": "m", "api_key_env": "MY_KEY"}}},
        tmp_path).validate()
    assert cfg.endpoint.api_key_env == "MY_KEY"
    assert not hasattr(cfg.endpoint, "api_key")
