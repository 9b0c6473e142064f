"""
Experiment configuration: one flat `key = value` file per experiment,
overridable from the command line.

    # conjugate check with PMMH
    study = conjugate-check
    algorithm = pmmh
    draws = 10000
    seed = 1

Blank lines and `#` comments are ignored. Keys are the ExperimentConfig
fields; dashes and underscores are interchangeable.
"""
import os
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .exceptions import ConfigError

STUDIES = ("conjugate-check", "commute", "nypopu", "sailing")
ALGORITHMS = ("is", "pmmh", "sghmc", "bbvi")
VARIANTS = ("deterministic", "averaged", "stochastic", "intensity")
FORMATS = ("csv", "json")
OUT_ENV = "STOCH_COND_OUT"


def _bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError("not a boolean: {!r}".format(text))


def _optional(coerce):
    def _coerce(text):
        if text is None or str(text).strip().lower() in ("", "none"):
            return None
        return coerce(text)
    return _coerce


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError("not an integer: {!r}".format(text))
    return int(value)


def _knob(default, coerce):
    return field(default=default, metadata={"coerce": coerce})


@dataclass
class ExperimentConfig:
    """Every knob of one experiment run, with its default."""
    study: str = _knob("conjugate-check", str)
    variant: str = _knob("stochastic", str)
    algorithm: str = _knob("pmmh", str)
    draws: int = _knob(10000, _int)
    burn_in: Optional[int] = _knob(None, _optional(_int))
    N: int = _knob(16, _int)
    seed: int = _knob(1, _int)
    chains: int = _knob(1, _int)
    exact: bool = _knob(False, _bool)

    # algorithm hyperparameters
    step_size: float = _knob(0.05, float)
    friction: float = _knob(1.0, float)
    leapfrog_steps: int = _knob(10, _int)
    proposal_scale: float = _knob(0.5, float)
    particles: int = _knob(1000, _int)
    iterations: int = _knob(1000, _int)
    batch: int = _knob(10, _int)
    learning_rate: float = _knob(0.1, float)

    # studies
    theta: float = _knob(0.6, float)
    days: int = _knob(30, _int)
    data: Optional[str] = _knob(None, _optional(str))
    sample: int = _knob(1, _int)
    reps: int = _knob(10000, _int)
    lake_size: int = _knob(25, _int)
    temperature: float = _knob(0.2, float)
    episodes: int = _knob(1000, _int)

    # output
    out: Optional[str] = _knob(None, _optional(str))
    format: str = _knob("csv", str)
    verbose: int = _knob(0, _int)

    @property
    def out_dir(self):
        """`out`, else $STOCH_COND_OUT, else the working directory."""
        if self.out is not None:
            return self.out
        return os.environ.get(OUT_ENV, ".")


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}


def _coerce(key, value):
    try:
        return _FIELDS[key].metadata["coerce"](value)
    except (TypeError, ValueError) as e:
        raise ConfigError("{}: cannot read {!r} ({})".format(key, value, e))


def _key(name):
    key = name.strip().replace("-", "_")
    if key not in _FIELDS:
        # case matters only for N
        lowered = {k.lower(): k for k in _FIELDS}
        key = lowered.get(key.lower(), key)
    return key


def parse_config(text):
    """Settings from flat `key = value` text, as a dictionary of coerced values."""
    settings = {}
    violations = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            violations.append("line {}: expected 'key = value', got {!r}".format(number, line))
            continue
        name, value = line.split("=", 1)
        key = _key(name)
        if key not in _FIELDS:
            violations.append("line {}: unknown key {!r}".format(number, name.strip()))
            continue
        settings[key] = value.strip()
    if violations:
        raise ConfigError(violations)
    return {key: _coerce(key, value) for key, value in settings.items()}


def load_config(path, **overrides):
    """
    Read a config file and apply overrides (None values are skipped).

    Raises
    ------
    ConfigError
        On unknown keys, malformed lines or values of the wrong type.
    """
    with open(path) as f:
        settings = parse_config(f.read())
    return make_config(settings, **overrides)


def make_config(settings=None, **overrides):
    """ExperimentConfig from a settings dictionary, overrides taking precedence."""
    config = ExperimentConfig()
    merged = dict(settings or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    unknown = sorted(set(merged) - set(_FIELDS))
    if unknown:
        raise ConfigError(["unknown key {!r}".format(key) for key in unknown])
    return replace(config, **{key: _coerce(key, value) for key, value in merged.items()})


def _at_least(config, name, lower):
    value = getattr(config, name)
    if value < lower:
        return ["{} must be >= {}, got {!r}".format(name, lower, value)]
    return []


def _positive(config, name):
    value = getattr(config, name)
    if not value > 0:
        return ["{} must be > 0, got {!r}".format(name, value)]
    return []


def _one_of(config, name, choices):
    value = getattr(config, name)
    if value not in choices:
        return ["{} must be one of {}, got {!r}".format(name, ", ".join(choices), value)]
    return []


def validate(config):
    """
    Everything that would stop `run` before inference starts.

    Returns
    -------
    list of str
        One message per violation, each naming the offending key; empty when
        the config is runnable.
    """
    violations = []
    violations += _one_of(config, "study", STUDIES)
    violations += _one_of(config, "algorithm", ALGORITHMS)
    violations += _one_of(config, "variant", VARIANTS)
    violations += _one_of(config, "format", FORMATS)

    for name in ("draws", "chains", "leapfrog_steps", "particles", "iterations", "batch",
                 "days", "reps", "episodes"):
        violations += _at_least(config, name, 1)
    for name in ("step_size", "proposal_scale", "learning_rate", "temperature"):
        violations += _positive(config, name)
    violations += _at_least(config, "friction", 0)
    violations += _at_least(config, "N", 1)
    violations += _at_least(config, "lake_size", 2)
    if config.burn_in is not None:
        violations += _at_least(config, "burn_in", 0)
    if not 0 <= config.seed < 2 ** 64:
        violations.append("seed must be in [0, 2**64), got {!r}".format(config.seed))
    if not 0 <= config.theta <= 1:
        violations.append("theta must be in [0, 1], got {!r}".format(config.theta))
    if config.sample not in (1, 2):
        violations.append("sample must be 1 or 2, got {!r}".format(config.sample))
    if config.verbose not in (0, 1, 2):
        violations.append("verbose must be 0, 1 or 2, got {!r}".format(config.verbose))

    if config.algorithm in ("is", "pmmh") and not config.exact and config.N < 2:
        violations.append(
            "N must be >= 2 for {} (the bias adjustment needs a variance), got {}".format(
                config.algorithm, config.N)
        )
    if config.exact and config.algorithm not in ("is", "pmmh"):
        violations.append("exact is only supported by algorithm is or pmmh")
    if config.exact and config.study == "sailing":
        violations.append("exact is not available for the sailing study")
    if config.study == "sailing" and config.algorithm == "sghmc":
        violations.append("algorithm sghmc needs gradients, which the sailing study lacks")
    if config.data is not None and config.study == "commute" and not os.path.exists(config.data):
        violations.append("data file {!r} does not exist".format(config.data))
    return violations


def check(config):
    """Raise ConfigError listing the violations, if any."""
    violations = validate(config)
    if violations:
        raise ConfigError(violations)
    return config
