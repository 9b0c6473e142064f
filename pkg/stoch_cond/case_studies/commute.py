"""
Commute to work.

On dry days the commuter rides a motorcycle (15 +- 2 minutes). When rain is
forecast they take a taxi (30 +- 4 minutes). Rain without a forecast catches
them in the saddle and the ride takes 60 +- 8 minutes. With rain probability
p_r and forecast rates p_t (true positive, rainy days) and p_f (false
positive, dry days):

    rain ~ Bernoulli(p_r)
    willRain | rain ~ Bernoulli(p_t if rain else p_f)
    duration ~ Normal(30, 4) if willRain, Normal(15, 2) if not rain,
               Normal(60, 8) otherwise

In the intensity variant a rainy day also has an intensity ~ Uniform(0, 1),
and the ride in rain takes Normal(30 + 30 * intensity, 8) minutes.

Four ways of conditioning on the observed days are supported:

    deterministic  paired (rain, duration) observations
    averaged       durations only, with the evidence averaged analytically
                   over the observed rain frequency
    stochastic     rain, duration ~ Rains x Durations, correspondence unknown
    intensity      (rain, intensity), duration ~ Rains x Durations
"""
from collections import namedtuple

import numpy as np
import pandas as pd

from ..model import Model
from ..observed import Empirical, ProductEmpirical
from ..util import ensure_rng

VARIANTS = ("deterministic", "averaged", "stochastic", "intensity")

DRY = (15.0, 2.0)
TAXI = (30.0, 4.0)
WET = (60.0, 8.0)
WET_INTENSITY = (30.0, 30.0, 8.0)

LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)

CommuteParams = namedtuple("CommuteParams", ["p_r", "p_t", "p_f"])


class CommuteData(object):
    """
    Observed days.

    Parameters
    ----------
    rains: array-like of bool

    durations: array-like of float
        Minutes.

    intensities: array-like of float, optional(default=None)
        Rain intensity in [0, 1], 0 on dry days.

    paired: bool, optional(default=True)
        Whether rains[i] and durations[i] were observed on the same day.
    """
    def __init__(self, rains, durations, intensities=None, paired=True):
        self.rains = np.asarray(rains, dtype=bool)
        self.durations = np.asarray(durations, dtype=float)
        self.intensities = None if intensities is None else np.asarray(intensities, dtype=float)
        self.paired = paired
        if paired and len(self.rains) != len(self.durations):
            raise ValueError(
                "Paired data needs as many rains ({}) ".format(len(self.rains)) +
                "as durations ({}).".format(len(self.durations))
            )
        if self.intensities is not None and len(self.intensities) != len(self.rains):
            raise ValueError("Every rain observation needs an intensity.")

    def __len__(self):
        return len(self.durations)

    @property
    def rain_frequency(self):
        return float(self.rains.mean())

    def to_frame(self):
        frame = pd.DataFrame({
            "day": np.arange(1, len(self) + 1),
            "rain": self.rains.astype(int),
            "duration": self.durations,
        })
        frame["intensity"] = 0.0 if self.intensities is None else self.intensities
        return frame


def simulate_commute(days, p_r, p_t, p_f, with_intensity=False, random_state=None):
    """
    Draw `days` days from the generative model.

    Returns
    -------
    CommuteData
        Paired observations; intensities are included (0 on dry days) when
        `with_intensity` is set.
    """
    if days < 1:
        raise ValueError("simulate_commute needs days >= 1, got {}.".format(days))
    random_state = ensure_rng(random_state)

    rains = random_state.random(days) < p_r
    will_rain = random_state.random(days) < np.where(rains, p_t, p_f)
    intensities = np.where(rains, random_state.random(days), 0.0)
    if with_intensity:
        wet_mean = WET_INTENSITY[0] + WET_INTENSITY[1] * intensities
        wet_sd = WET_INTENSITY[2]
    else:
        wet_mean, wet_sd = WET
    mean = np.where(will_rain, TAXI[0], np.where(rains, wet_mean, DRY[0]))
    sd = np.where(will_rain, TAXI[1], np.where(rains, wet_sd, DRY[1]))
    durations = mean + sd * random_state.standard_normal(days)
    return CommuteData(rains, durations, intensities if with_intensity else None)


def load_commute_csv(path):
    """Read days from a CSV with columns day, rain, duration, intensity."""
    frame = pd.read_csv(path)
    intensities = frame["intensity"].to_numpy() if "intensity" in frame else None
    return CommuteData(frame["rain"].to_numpy() != 0, frame["duration"].to_numpy(), intensities)


def save_commute_csv(data, path):
    data.to_frame().to_csv(path, index=False, lineterminator="\n", float_format="%.17g")


def _log_normal(y, mean, sd):
    z = (y - mean) / sd
    return -0.5 * z * z - np.log(sd) - LOG_SQRT_2PI


def _branches(p_r, p_t, p_f, durations, intensities=None):
    """
    log p(rain, duration) for rain = 1 and rain = 0, willRain summed out,
    and their gradients in (p_f, p_r, p_t) order.
    """
    d = np.asarray(durations, dtype=float)
    taxi = _log_normal(d, *TAXI)
    dry = _log_normal(d, *DRY)
    if intensities is None:
        wet = _log_normal(d, *WET)
    else:
        mean = WET_INTENSITY[0] + WET_INTENSITY[1] * np.asarray(intensities, dtype=float)
        wet = _log_normal(d, mean, WET_INTENSITY[2])

    with np.errstate(divide="ignore"):
        forecast_wet = np.logaddexp(np.log(p_t) + taxi, np.log1p(-p_t) + wet)
        forecast_dry = np.logaddexp(np.log(p_f) + taxi, np.log1p(-p_f) + dry)
        l1 = np.log(p_r) + forecast_wet
        l0 = np.log1p(-p_r) + forecast_dry

    zero = np.zeros_like(d)
    g1 = np.stack([zero, zero + 1 / p_r,
                   np.exp(taxi - forecast_wet) - np.exp(wet - forecast_wet)], axis=-1)
    g0 = np.stack([np.exp(taxi - forecast_dry) - np.exp(dry - forecast_dry),
                   zero - 1 / (1 - p_r), zero], axis=-1)
    return l1, l0, g1, g0


def _as_params(params):
    if isinstance(params, dict):
        return params["p_r"], params["p_t"], params["p_f"]
    return tuple(params)


def _log_cond_and_grad(variant, p_r, p_t, p_f, obs):
    obs = np.atleast_2d(np.asarray(obs, dtype=float))
    if variant in ("deterministic", "stochastic"):
        rain, intensity, duration = obs[:, 0], None, obs[:, 1]
    elif variant == "intensity":
        rain, intensity, duration = obs[:, 0], obs[:, 1], obs[:, 2]
    elif variant == "averaged":
        if obs.shape[1] == 1:
            # plain marginal of the duration, rain summed out
            l1, l0, g1, g0 = _branches(p_r, p_t, p_f, obs[:, 0])
            value = np.logaddexp(l1, l0)
            w1 = np.exp(l1 - value)[:, None]
            return value, w1 * g1 + (1 - w1) * g0
        q, duration = obs[:, 0], obs[:, 1]
        l1, l0, g1, g0 = _branches(p_r, p_t, p_f, duration)
        return q * l1 + (1 - q) * l0, q[:, None] * g1 + (1 - q[:, None]) * g0
    else:
        raise ValueError(
            "Unknown commute variant {!r}; expected one of {}.".format(variant, VARIANTS)
        )
    l1, l0, g1, g0 = _branches(p_r, p_t, p_f, duration, intensity)
    wet = (rain == 1)
    return np.where(wet, l1, l0), np.where(wet[:, None], g1, g0)


def commute_log_cond(variant, params, obs):
    """
    Log-density of one observation under a commute variant.

    Parameters
    ----------
    variant: str
        One of 'deterministic', 'averaged', 'stochastic', 'intensity'.

    params: CommuteParams, dict or (p_r, p_t, p_f)

    obs: array-like
        (rain, duration) for 'deterministic' and 'stochastic';
        (rain, intensity, duration) for 'intensity';
        (rain_frequency, duration) for 'averaged', which averages
        log p(rain, duration) over rain with the observed rain frequency, or
        (duration,) for the marginal log sum_rain p(rain) p(duration | rain).
    """
    p_r, p_t, p_f = _as_params(params)
    value, _ = _log_cond_and_grad(variant, p_r, p_t, p_f, obs)
    return float(value[0])


class CommuteModel(Model):
    """p_r, p_t, p_f ~ Beta(1, 1), each on the logit scale."""
    def __init__(self, variant="stochastic"):
        if variant not in VARIANTS:
            raise ValueError(
                "Unknown commute variant {!r}; expected one of {}.".format(variant, VARIANTS)
            )
        super(CommuteModel, self).__init__({"p_f": "logit", "p_r": "logit", "p_t": "logit"})
        self.variant = variant

    def _split(self, x):
        p_f, p_r, p_t = x
        return p_r, p_t, p_f

    def _log_prior(self, x):
        inside = np.all((x >= 0) & (x <= 1))
        return 0.0 if inside else -np.inf

    def _grad_log_prior(self, x):
        return np.zeros(3)

    def _log_cond_many(self, x, ys):
        ys = np.asarray(ys, dtype=float).reshape(len(ys), -1)
        return _log_cond_and_grad(self.variant, *self._split(x), ys)[0]

    def _grad_log_cond_many(self, x, ys):
        ys = np.asarray(ys, dtype=float).reshape(len(ys), -1)
        return _log_cond_and_grad(self.variant, *self._split(x), ys)[1]

    def _log_cond(self, x, y):
        return self._log_cond_many(x, np.atleast_1d(y)[None, :])[0]

    def _grad_log_cond(self, x, y):
        return self._grad_log_cond_many(x, np.atleast_1d(y)[None, :])[0]


def commute_observed(variant, data):
    """The observed distribution each variant conditions on, observed len(data) times."""
    days = len(data)
    if variant == "deterministic":
        if not data.paired:
            raise ValueError("The deterministic variant needs paired observations.")
        return Empirical(np.column_stack([data.rains, data.durations]), count=days)
    if variant == "averaged":
        frequency = np.full(days, data.rain_frequency)
        return Empirical(np.column_stack([frequency, data.durations]), count=days)
    if variant == "stochastic":
        return ProductEmpirical([data.rains, data.durations], count=days)
    if variant == "intensity":
        if data.intensities is None:
            raise ValueError("The intensity variant needs rain intensities.")
        return ProductEmpirical([np.column_stack([data.rains, data.intensities]),
                                 data.durations], count=days)
    raise ValueError(
        "Unknown commute variant {!r}; expected one of {}.".format(variant, VARIANTS)
    )


def commute_problem(variant, data):
    """Model and observed distribution for a variant, ready for inference."""
    return CommuteModel(variant), commute_observed(variant, data)
