"""
Population of New York State from published summaries.

Only the mean, standard deviation and quantiles of two samples of 100 of the
804 municipalities (1960) are available. With m the mean and s2 the
variance of a municipality's population:

    y_1..n ~ PiecewiseUniform(quantiles)
    m ~ Normal(mean, sd / sqrt(n)),  log s2 ~ Uniform(-inf, inf)
    y_1..n | m, s2 ~ LogNormal(mu, sigma),
        sigma = sqrt(log(s2 / m**2 + 1)),  mu = log(m) - sigma**2 / 2

The quantile table defines the observed distribution, conditioned on n
times; the posterior predictive of the sum over 804 municipalities
estimates the state total.
"""
import numpy as np

from ..distributions import Normal, piecewise_uniform_from_quantiles
from ..model import Model
from ..observed import Parametric
from ..param_space import ParamSpace
from ..util import ensure_rng

TOWNS = 804
TRUE_TOTAL = 13776663
QUANTILE_LEVELS = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)

PUBLISHED_SAMPLES = {
    "population": {
        "total": 13776663, "mean": 17135, "sd": 139147, "n": 804,
        "quantiles": (19, 336, 800, 1668, 5050, 30295, 2627319),
    },
    1: {
        "total": 1966745, "mean": 19667, "sd": 142218, "n": 100,
        "quantiles": (164, 308, 891, 2081, 6049, 25130, 1424815),
    },
    2: {
        "total": 3850502, "mean": 38505, "sd": 228625, "n": 100,
        "quantiles": (162, 315, 863, 1740, 5239, 41718, 1809578),
    },
}

# 95% predictive intervals reported for the two samples
REFERENCE_INTERVALS = {1: (9.6e6, 17.2e6), 2: (12.1e6, 28.1e6)}


def published_summary(sample):
    """Summary and (level, value) quantile pairs of a published sample."""
    row = PUBLISHED_SAMPLES[sample]
    summary = {"mean": row["mean"], "sd": row["sd"], "n": row["n"]}
    return summary, list(zip(QUANTILE_LEVELS, row["quantiles"]))


def lognormal_params(m, s2):
    """(mu, sigma) of the log-normal with mean m and variance s2."""
    sigma2 = np.log1p(s2 / np.square(m))
    return np.log(m) - 0.5 * sigma2, np.sqrt(sigma2)


class NyPopuModel(Model):
    """
    Log-normal municipality populations with a normal prior on the mean and a
    flat prior on the log-variance. Both latents are on the log scale.

    Parameters
    ----------
    mean, sd: float
        Sample mean and standard deviation; the prior on m is
        Normal(mean, sd / sqrt(n)).

    n: int
        Sample size, the number of times the quantile distribution is
        observed.

    quantiles: list of (level, value), optional(default=None)
        When given, `observed` holds the piecewise-uniform distribution they
        define.
    """
    def __init__(self, mean, sd, n=100, quantiles=None, order=16):
        for name, value in (("mean", mean), ("sd", sd), ("n", n)):
            if not value > 0:
                raise ValueError("NY population summary needs {} > 0, got {!r}.".format(name, value))
        super(NyPopuModel, self).__init__({"m": "log", "s2": "log"})
        self.n = int(n)
        self.prior_m = Normal(mean, sd / np.sqrt(n))
        self.observed = None
        if quantiles is not None:
            self.observed = Parametric(piecewise_uniform_from_quantiles(quantiles),
                                       count=self.n, order=order)

    def _log_prior(self, x):
        m, s2 = x
        if not (m > 0 and s2 > 0):
            return -np.inf
        # flat in log s2 is density 1 / s2 in s2
        return self.prior_m.log_pdf(m) - np.log(s2)

    def _grad_log_prior(self, x):
        m, s2 = x
        return np.array([-(m - self.prior_m.mean) / self.prior_m.sd ** 2, -1.0 / s2])

    def _log_cond_many(self, x, ys):
        m, s2 = x
        mu, sigma = lognormal_params(m, s2)
        logy = np.log(np.asarray(ys, dtype=float).ravel())
        z = (logy - mu) / sigma
        return -0.5 * z * z - np.log(sigma) - 0.5 * np.log(2 * np.pi) - logy

    def _log_cond(self, x, y):
        return self._log_cond_many(x, np.atleast_1d(y))[0]

    def _grad_log_cond_many(self, x, ys):
        m, s2 = x
        mu, sigma = lognormal_params(m, s2)
        sigma2 = sigma * sigma
        a = s2 / (m * m)
        dsigma2_dm = -2 * a / (m * (1 + a))
        dsigma2_ds2 = 1 / (m * m * (1 + a))
        dmu_dm = 1 / m - 0.5 * dsigma2_dm
        dmu_ds2 = -0.5 * dsigma2_ds2

        r = np.log(np.asarray(ys, dtype=float).ravel()) - mu
        dlog_dmu = r / sigma2
        dlog_dsigma2 = 0.5 * r * r / sigma2 ** 2 - 0.5 / sigma2
        return np.stack([dlog_dmu * dmu_dm + dlog_dsigma2 * dsigma2_dm,
                         dlog_dmu * dmu_ds2 + dlog_dsigma2 * dsigma2_ds2], axis=-1)

    def _grad_log_cond(self, x, y):
        return self._grad_log_cond_many(x, np.atleast_1d(y))[0]


def nypopu_model(summary, quantiles):
    """
    Model for one published sample.

    Parameters
    ----------
    summary: dict
        'mean', 'sd' and 'n' of the sample.

    quantiles: list of (level, value)
        Quantile table, lowest (level 0) to highest (level 1).

    Returns
    -------
    NyPopuModel
        With `observed` set to the piecewise-uniform distribution of the
        quantiles, observed n times.
    """
    try:
        mean, sd, n = summary["mean"], summary["sd"], summary["n"]
    except (KeyError, TypeError):
        raise ValueError("Summary must provide 'mean', 'sd' and 'n', got {!r}.".format(summary))
    return NyPopuModel(mean, sd, n, quantiles=quantiles)


_SPACE = ParamSpace({"m": "log", "s2": "log"})


def _moments(posterior):
    m, s2, w = [], [], []
    for draw in posterior:
        if isinstance(draw, dict):
            params, weight = draw, 1.0
        else:
            params, weight = _SPACE.constrained_params(draw.x), draw.weight
        m.append(params["m"])
        s2.append(params["s2"])
        w.append(weight)
    return np.array(m), np.array(s2), np.array(w)


def posterior_predictive_total(posterior, towns=TOWNS, reps=10000, random_state=None):
    """
    Totals over `towns` municipalities drawn from the posterior predictive:
    each repetition picks a posterior draw of (m, s2) by weight and sums
    `towns` log-normal populations.

    Parameters
    ----------
    posterior: list of PosteriorSample or dict
        Unconstrained NyPopuModel samples, or dictionaries with 'm' and 's2'.

    Returns
    -------
    ndarray
        `reps` totals.
    """
    if len(posterior) == 0:
        raise ValueError("posterior_predictive_total needs a nonempty posterior.")
    random_state = ensure_rng(random_state)
    m, s2, w = _moments(posterior)
    pick = random_state.choice(len(m), size=reps, p=w / w.sum())
    mu, sigma = lognormal_params(m[pick], s2[pick])
    totals = np.empty(reps)
    # blocks keep memory bounded for large reps
    for start in range(0, reps, 1000):
        block = slice(start, min(start + 1000, reps))
        draws = random_state.lognormal(mu[block, None], sigma[block, None],
                                       size=(len(mu[block]), towns))
        totals[block] = draws.sum(axis=1)
    return totals


def predictive_interval(totals, level=0.95):
    """Central interval of the predictive totals."""
    tail = 0.5 * (1 - level)
    lo, hi = np.quantile(totals, [tail, 1 - tail])
    return float(lo), float(hi)
