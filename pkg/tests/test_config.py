import pytest

from stoch_cond.config import (
    ExperimentConfig, OUT_ENV, parse_config, load_config, make_config, validate, check,
)
from stoch_cond.exceptions import ConfigError


def test_defaults_are_valid():
    config = ExperimentConfig()
    assert validate(config) == []
    assert config.study == "conjugate-check"
    assert config.algorithm == "pmmh"
    assert config.draws == 10000
    assert config.N == 16
    assert check(config) is config


def test_parse_config():
    text = """
    # a comment line
    study = commute     # trailing comment
    variant = averaged
    burn-in = 500
    n = 32
    exact = yes
    data = none
    """
    settings = parse_config(text)
    assert settings == {"study": "commute", "variant": "averaged", "burn_in": 500, "N": 32,
                        "exact": True, "data": None}


def test_parse_errors_are_collected():
    with pytest.raises(ConfigError) as info:
        parse_config("draws 10\nwarp = 9\nseed = 1\n")
    assert len(info.value.violations) == 2
    assert "line 1" in info.value.violations[0]
    assert "warp" in info.value.violations[1]


def test_bad_values():
    with pytest.raises(ConfigError):
        parse_config("draws = many")
    with pytest.raises(ConfigError):
        parse_config("draws = 2.5")
    with pytest.raises(ConfigError):
        parse_config("exact = maybe")
    # integral floats are fine
    assert parse_config("draws = 1e3") == {"draws": 1000}


def test_load_config_with_overrides(tmp_path):
    path = tmp_path / "experiment.cfg"
    path.write_text("study = nypopu\ndraws = 200\nseed = 4\n")
    config = load_config(str(path), draws=50, seed=None)
    assert config.study == "nypopu"
    assert config.draws == 50
    assert config.seed == 4


def test_make_config():
    config = make_config({"algorithm": "is"}, particles="300")
    assert config.algorithm == "is"
    assert config.particles == 300
    with pytest.raises(ConfigError):
        make_config(warp=9)


def violations_of(**settings):
    return validate(make_config(settings))


def test_violations_name_their_key():
    messages = violations_of(draws=0)
    assert len(messages) == 1
    assert messages[0].startswith("draws")

    for key, value in [("study", "weather"), ("algorithm", "nuts"), ("variant", "wet"),
                       ("format", "xml"), ("step_size", 0.0), ("lake_size", 1),
                       ("temperature", -1.0), ("theta", 1.5), ("sample", 3),
                       ("verbose", 5), ("seed", -1), ("burn_in", -1)]:
        messages = violations_of(**{key: value})
        assert len(messages) == 1, key
        assert messages[0].startswith(key), key


def test_pmmh_needs_two_draws_per_estimate():
    messages = violations_of(algorithm="pmmh", N=1)
    assert len(messages) == 1
    assert messages[0].startswith("N")
    assert violations_of(algorithm="pmmh", N=1, exact=True) == []
    assert violations_of(algorithm="sghmc", N=1) == []


def test_incompatible_combinations():
    assert violations_of(algorithm="bbvi", exact=True)[0].startswith("exact")
    assert violations_of(study="sailing", exact=True)[0].startswith("exact")
    assert violations_of(study="sailing", algorithm="sghmc")[0].startswith("algorithm")
    assert violations_of(study="commute", data="/nonexistent/days.csv")[0].startswith("data")
    with pytest.raises(ConfigError) as info:
        check(make_config(draws=0, chains=0))
    assert len(info.value.violations) == 2


def test_out_dir(monkeypatch):
    monkeypatch.delenv(OUT_ENV, raising=False)
    assert ExperimentConfig().out_dir == "."
    monkeypatch.setenv(OUT_ENV, "/tmp/runs")
    assert ExperimentConfig().out_dir == "/tmp/runs"
    assert ExperimentConfig(out="results").out_dir == "results"


if __name__ == '__main__':
    r"""
    CommandLine:
        python tests/test_config.py
    """
    pytest.main([__file__])
