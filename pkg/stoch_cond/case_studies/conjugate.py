"""
Small reference models with closed-form posteriors, used to check the
likelihoods, estimators and samplers.
"""
import numpy as np
from scipy.special import xlogy, xlog1py

from ..distributions import Beta
from ..model import Model

LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)


class BetaBernoulli(Model):
    """
    x ~ Beta(alpha, beta), y | x ~ Bernoulli(x), with x on the logit scale.

    The likelihood x**y (1 - x)**(1 - y) is also evaluated for fractional y,
    which is what conditioning on Bernoulli(theta) averages to.
    """
    def __init__(self, alpha=1.0, beta=1.0):
        super(BetaBernoulli, self).__init__({"x": "logit"})
        self.prior = Beta(alpha, beta)

    def posterior(self, theta, count=1):
        """Exact posterior after conditioning `count` times on Bernoulli(theta)."""
        return Beta(self.prior.alpha + count * theta, self.prior.beta + count * (1 - theta))

    def _log_prior(self, x):
        return self.prior.log_pdf(x[0])

    def _grad_log_prior(self, x):
        p = x[0]
        return np.array([(self.prior.alpha - 1) / p - (self.prior.beta - 1) / (1 - p)])

    def _log_cond_many(self, x, ys):
        y = np.asarray(ys, dtype=float).ravel()
        p = x[0]
        return xlogy(y, p) + xlog1py(1 - y, -p)

    def _log_cond(self, x, y):
        return self._log_cond_many(x, np.atleast_1d(y))[0]

    def _grad_log_cond_many(self, x, ys):
        y = np.asarray(ys, dtype=float).ravel()
        p = x[0]
        return (y / p - (1 - y) / (1 - p))[:, None]

    def _grad_log_cond(self, x, y):
        return self._grad_log_cond_many(x, np.atleast_1d(y))[0]


class NormalMean(Model):
    """
    theta ~ Normal(prior_mean, prior_sd), y | theta ~ Normal(theta, noise_sd).
    """
    def __init__(self, prior_mean=0.0, prior_sd=1.0, noise_sd=1.0):
        super(NormalMean, self).__init__({"theta": None})
        self.prior_mean = float(prior_mean)
        self.prior_sd = float(prior_sd)
        self.noise_sd = float(noise_sd)

    def posterior(self, y0, count=1):
        """Mean and sd of the posterior after observing y0 `count` times."""
        precision = 1 / self.prior_sd ** 2 + count / self.noise_sd ** 2
        mean = (self.prior_mean / self.prior_sd ** 2 + count * y0 / self.noise_sd ** 2) / precision
        return mean, precision ** -0.5

    def _log_prior(self, x):
        z = (x[0] - self.prior_mean) / self.prior_sd
        return -0.5 * z * z - np.log(self.prior_sd) - LOG_SQRT_2PI

    def _grad_log_prior(self, x):
        return np.array([-(x[0] - self.prior_mean) / self.prior_sd ** 2])

    def _log_cond_many(self, x, ys):
        z = (np.asarray(ys, dtype=float).ravel() - x[0]) / self.noise_sd
        return -0.5 * z * z - np.log(self.noise_sd) - LOG_SQRT_2PI

    def _log_cond(self, x, y):
        return self._log_cond_many(x, np.atleast_1d(y))[0]

    def _grad_log_cond_many(self, x, ys):
        r = np.asarray(ys, dtype=float).ravel() - x[0]
        return (r / self.noise_sd ** 2)[:, None]

    def _grad_log_cond(self, x, y):
        return self._grad_log_cond_many(x, np.atleast_1d(y))[0]


class TabularModel(Model):
    """
    A finite family of categorical distributions over {0, ..., k - 1}:
    latent `index` selects row `round(index)` of `table`, under a uniform
    prior over rows. Useful for exhaustive likelihood comparisons; it has no
    gradient.
    """
    def __init__(self, table):
        super(TabularModel, self).__init__({"index": None})
        table = np.asarray(table, dtype=float)
        if table.ndim != 2 or np.any(table < 0) or not np.allclose(table.sum(axis=1), 1):
            raise ValueError("Every row of the table must be a probability vector.")
        with np.errstate(divide="ignore"):
            self._log_table = np.log(table)
        self.table = table

    def grid(self):
        return [np.array([float(i)]) for i in range(len(self.table))]

    def _row(self, x):
        i = int(round(x[0]))
        if not 0 <= i < len(self.table):
            return None
        return self._log_table[i]

    def _log_prior(self, x):
        return -np.log(len(self.table)) if self._row(x) is not None else -np.inf

    def _log_cond_many(self, x, ys):
        row = self._row(x)
        ys = np.asarray(ys, dtype=float).ravel().astype(int)
        if row is None:
            return np.full(len(ys), -np.inf)
        return row[ys]

    def _log_cond(self, x, y):
        return self._log_cond_many(x, np.atleast_1d(y))[0]
