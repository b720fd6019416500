import math

import jsonschema
import pytest

tistop = pytest.importorskip("tistop")


def test_report_matches_schema(put_config, schema):
    report = tistop.classify(put_config)
    jsonschema.validate(report, schema)
    assert report["verdicts"]["is_mild"] is False
    assert report["region"]["pieces"][0]["hi"] == 0.4


def test_threshold_region_is_weak(put_config, schema):
    t = tistop.solve_threshold(put_config)
    a = t["threshold"]
    assert 0.5 < a < 0.65
    cfg = dict(put_config)
    cfg["region"] = {"pieces": [f"(0,{a!r}]"]}
    report = tistop.classify(cfg)
    jsonschema.validate(report, schema)
    assert report["verdicts"]["is_weak"] is True


def test_values_equal_payoff_on_region(put_config):
    xs = [0.1, 0.3, 0.4]
    assert tistop.values(put_config, xs) == pytest.approx([1 - x for x in xs], abs=1e-12)
    far = tistop.values(put_config, [5.0])[0]
    assert 0.0 < far < 0.6 and math.isfinite(far)


def test_overrides_and_errors(put_config):
    r = tistop.classify(put_config, ["region.pieces=[\"(0,0.5795579979196972]\"]"])
    assert r["verdicts"]["is_weak"] is True
    with pytest.raises(tistop.ConfigError):
        tistop.classify(put_config, ["bogus=1"])
    bad = dict(put_config)
    bad["region"] = {"pieces": ["(0,0.4)"]}
    with pytest.raises(tistop.OpenPieceError):
        tistop.classify(bad)
    assert issubclass(tistop.OpenPieceError, tistop.Error)


def test_reproduce_without_mc():
    run = tistop.reproduce("ex62", mc=False)
    assert run["all_match"] is True
    assert len(run["candidates"]) == 3
