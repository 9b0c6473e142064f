"""
Monte Carlo estimates of the stochastic-conditioning log-likelihood and of
the log-joint gradient, the interface every inference algorithm consumes.
"""
import numpy as np

from .exceptions import InsufficientSamplesError
from .observed import Empirical, as_observed
from .util import ensure_rng


class LogLikEstimate(object):
    """
    Summary of N Monte Carlo log-likelihood draws.

    Attributes
    ----------
    m: float
        Sample mean of the draws.

    s2: float
        Unbiased (N - 1 denominator) sample variance of the draws, 0 for N = 1.

    N: int
        Number of draws.

    scale: float
        Subsampling factor K / N, 1 when the draws come from D itself.

    seed: int or None
        Seed of the generator that produced the draws, when it was given as
        an integer. Re-estimating with the same seed reuses the same draws.

    subsampled: bool
        Whether the draws are a subsample of K stored observations, in which
        case the quantity estimated is the full-data sum K * m.
    """
    def __init__(self, m, s2, N, scale=1.0, seed=None, subsampled=False):
        if N < 1:
            raise InsufficientSamplesError("An estimate needs N >= 1 draws, got {}.".format(N))
        if scale < 1:
            raise ValueError("Subsampling scale must be >= 1, got {!r}.".format(scale))
        self.m = float(m)
        self.s2 = float(s2)
        self.N = int(N)
        self.scale = float(scale)
        self.seed = seed
        self.subsampled = bool(subsampled)

    @property
    def factor(self):
        return self.scale * self.N if self.subsampled else 1.0

    @property
    def total(self):
        """The log-likelihood estimate: m, or K * m for a subsample."""
        return self.factor * self.m

    def __repr__(self):
        return "LogLikEstimate(m={:.6g}, s2={:.6g}, N={}, scale={:.6g})".format(
            self.m, self.s2, self.N, self.scale)


def _summarize(draws, **kwargs):
    draws = np.asarray(draws, dtype=float)
    if not np.all(np.isfinite(draws)):
        return LogLikEstimate(-np.inf, 0.0, len(draws), **kwargs)
    s2 = draws.var(ddof=1) if len(draws) > 1 else 0.0
    return LogLikEstimate(draws.mean(), s2, len(draws), **kwargs)


def estimate_loglik(model, x, D, N, random_state=None, include_prior=False,
                    subsample=False):
    """
    Unbiased Monte Carlo estimate of log p(y ~ D | x).

    Each draw is count * log p(y_j | x) for y_j ~ D, plus log p(x) when
    `include_prior` is set, in which case the estimate targets the log-joint.

    Parameters
    ----------
    N: int
        Number of draws, at least 1.

    random_state: int, numpy.random.Generator or None
        An integer seed is recorded on the estimate so that another state can
        be evaluated on the very same draws.

    include_prior: bool, optional(default=False)
        Add log p(x) to every draw.

    subsample: bool, optional(default=False)
        D must be Empirical with K >= N stored observations; the draws are N
        of them taken without replacement and the estimate targets the
        full-data sum of the K log-likelihoods (see LogLikEstimate.total).
    """
    if N < 1:
        raise InsufficientSamplesError("estimate_loglik needs N >= 1, got {}.".format(N))
    D = as_observed(D)
    if not D.samplable:
        raise TypeError("{} cannot be sampled.".format(type(D).__name__))
    seed = int(random_state) if isinstance(random_state, (int, np.integer)) else None
    random_state = ensure_rng(random_state)
    x = model.space._as_array(x)

    prior = model.log_prior(x) if include_prior else 0.0
    if subsample:
        if not isinstance(D, Empirical):
            raise TypeError("Subsampling needs stored observations (Empirical).")
        ys = D.subsample(N, random_state)
        draws = prior / len(D) + D.count * model.log_cond_many(x, ys)
        return _summarize(draws, scale=len(D) / N, seed=seed, subsampled=True)

    ys = D.sample(random_state, size=N)
    with np.errstate(invalid="ignore"):
        draws = prior + D.count * model.log_cond_many(x, ys)
    return _summarize(draws, seed=seed)


def log_bias_adjusted_lik(est):
    """
    Log of the bias-adjusted likelihood estimate, m - s2 / 2N for plain
    estimates. For a subsample the full-data estimate c * m (c = K) has
    variance c**2 s2 / N and the correction scales accordingly.
    """
    if est.N < 2:
        raise InsufficientSamplesError(
            "Bias adjustment needs N >= 2 draws, got N = {}.".format(est.N)
        )
    c = est.factor
    return c * est.m - c * c * est.s2 / (2 * est.N)


def bias_adjusted_lik(est):
    """exp(m - s2 / 2N)."""
    return float(np.exp(log_bias_adjusted_lik(est)))


def estimate_grad_loglik(model, x, D, random_state=None, batch=1):
    """
    Unbiased estimate of the gradient of log p(x) + log p(y ~ D | x) with
    respect to the unconstrained x, from `batch` draws y_b ~ D (a single draw
    by default).

    Returns
    -------
    ndarray
        grad log p(x) + count * mean_b grad log p(y_b | x).
    """
    if batch < 1:
        raise InsufficientSamplesError("Gradient batch must be >= 1, got {}.".format(batch))
    D = as_observed(D)
    if not D.samplable:
        raise TypeError("{} cannot be sampled.".format(type(D).__name__))
    random_state = ensure_rng(random_state)
    x = model.space._as_array(x)
    ys = D.sample(random_state, size=batch)
    grads = model.grad_log_cond_many(x, ys)
    return model.grad_log_prior(x) + D.count * grads.mean(axis=0)
