"""Config loading, validation, and preset tests."""

import json

import pytest

from loma import ConfigError, FeatureAugConfig, LomaConfig, PRESETS, load_config, preset


def test_defaults():
    cfg = LomaConfig()
    assert (cfg.p, cfg.r_min, cfg.r_max, cfg.a_min, cfg.a_max) == (0.5, 0.03, 0.7, 1.0, 3.0)
    assert cfg.shape.value == "rhombus"
    assert cfg.interp.value == "bilinear"
    fcfg = FeatureAugConfig()
    assert (fcfg.p_f, fcfg.gamma, fcfg.block_index, fcfg.per) == (0.5, 0.25, 2, "batch")


def test_empty_document_gives_defaults():
    for source in ({}, "", "{}"):
        cfg, fcfg = load_config(source)
        assert cfg == LomaConfig()
        assert fcfg == FeatureAugConfig()


def test_presets():
    assert PRESETS == ("cifar", "imagenet", "detection")
    cfg, fcfg = preset("cifar")
    assert cfg == LomaConfig() and fcfg == FeatureAugConfig()
    cfg, _ = preset("imagenet")
    assert cfg.p == 0.8
    assert (cfg.r_min, cfg.r_max, cfg.a_max) == (0.03, 0.7, 3.0)
    cfg, _ = preset("detection")
    assert (cfg.p, cfg.r_max, cfg.a_max) == (0.25, 0.5, 1.0)
    with pytest.raises(ConfigError, match="preset"):
        preset("mnist")


def test_load_from_path(tmp_path):
    doc = {"p": 0.9, "shape": "ellipse", "feature": {"gamma": 0.1}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    cfg, fcfg = load_config(path)
    assert cfg.p == 0.9 and cfg.shape.value == "ellipse"
    assert fcfg.gamma == 0.1 and fcfg.p_f == 0.5


def test_load_from_text_and_dict():
    cfg, _ = load_config('{"r_min": 0.1, "r_max": 0.2}')
    assert (cfg.r_min, cfg.r_max) == (0.1, 0.2)
    cfg2, _ = load_config({"r_min": 0.1, "r_max": 0.2})
    assert cfg2 == cfg


def test_errors_name_the_key():
    with pytest.raises(ConfigError, match="p:"):
        load_config({"p": 1.5})
    with pytest.raises(ConfigError, match="r_min/r_max"):
        load_config({"r_min": 0.8, "r_max": 0.5})
    with pytest.raises(ConfigError, match="r_min/r_max"):
        load_config({"r_min": 0.0})
    with pytest.raises(ConfigError, match="a_min"):
        load_config({"a_min": 0.5})
    with pytest.raises(ConfigError, match="a_max"):
        load_config({"a_min": 2.0, "a_max": 1.5})
    with pytest.raises(ConfigError, match="shape"):
        load_config({"shape": "hexagon"})
    with pytest.raises(ConfigError, match="interp"):
        load_config({"interp": "bicubic"})
    with pytest.raises(ConfigError, match="feature.p_f"):
        load_config({"feature": {"p_f": -0.1}})
    with pytest.raises(ConfigError, match="feature.gamma"):
        load_config({"feature": {"gamma": -1}})
    with pytest.raises(ConfigError, match="feature.per"):
        load_config({"feature": {"per": "sample"}})


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="unknown config key 'radius'"):
        load_config({"radius": 3})
    with pytest.raises(ConfigError, match="unknown config key 'feature.pf'"):
        load_config({"feature": {"pf": 0.5}})


def test_malformed_json_rejected():
    with pytest.raises(ConfigError, match="JSON"):
        load_config("{not json")
    with pytest.raises(ConfigError, match="object"):
        load_config("[1, 2]")


def test_config_is_immutable():
    cfg = LomaConfig()
    with pytest.raises(Exception):
        cfg.p = 0.9


def test_to_dict_round_trip():
    cfg, fcfg = load_config({"p": 0.8, "feature": {"p_f": 0.3}})
    doc = cfg.to_dict()
    doc["feature"] = fcfg.to_dict()
    cfg2, fcfg2 = load_config(doc)
    assert cfg2 == cfg and fcfg2 == fcfg
