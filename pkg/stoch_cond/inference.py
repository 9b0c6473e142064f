"""
Inference algorithms for models conditioned on an observed distribution:
importance sampling, pseudo-marginal Metropolis-Hastings, stochastic-gradient
Hamiltonian Monte Carlo and black-box variational inference with the score
function estimator.

Every algorithm is an Observable emitting the events of `event.Events`, so
the loggers in `logger` can follow a run. The functions at the bottom of the
module are one-call wrappers returning the samples.
"""
import warnings
from collections import namedtuple

import numpy as np
from scipy.special import logsumexp

from .event import Events, DEFAULT_EVENTS
from .estimators import estimate_loglik, estimate_grad_loglik, log_bias_adjusted_lik
from .exceptions import (
    DegenerateProposalError, DivergenceError, InsufficientSamplesError, ParameterDomainError,
)
from .likelihood import exact_stochastic_loglik
from .logger import _get_default_logger
from .observed import as_observed
from .util import ensure_rng, derive_seed

PosteriorSample = namedtuple("PosteriorSample", ["x", "weight", "iteration", "log_weight"])
PosteriorSample.__new__.__defaults__ = (0.0,)


class Observable(object):
    """Keeps, per event name, the subscribers to call back when the event is dispatched."""
    def __init__(self, events):
        # maps event names to subscribers
        # str -> dict
        self._events = {event: dict() for event in events}

    def get_subscribers(self, event):
        return self._events[event]

    def subscribe(self, event, subscriber, callback=None):
        if callback is None:
            callback = getattr(subscriber, 'update')
        self.get_subscribers(event)[subscriber] = callback

    def unsubscribe(self, event, subscriber):
        del self.get_subscribers(event)[subscriber]

    def dispatch(self, event):
        for _, callback in self.get_subscribers(event).items():
            callback(event, self)


def default_burn_in(draws):
    """Twenty percent of the requested draws."""
    return int(round(0.2 * draws))


class Sampler(Observable):
    """
    Shared plumbing: the model and observed distribution, a random source,
    the collected samples, and the step records read by the loggers.

    Parameters
    ----------
    model: Model

    D: ObservedDistribution or DistSpec
        What the model is conditioned on.

    random_state: int or numpy.random.Generator, optional(default=None)
        If the value is an integer, it is used as the seed for creating a
        numpy.random.Generator. Otherwise the generator provided is used.
        When set to None, an unseeded generator is created.

    verbose: int, optional(default=0)
        The level of verbosity of the default screen logger.
    """
    def __init__(self, model, D, random_state=None, verbose=0, log_every=100):
        self._model = model
        self._D = as_observed(D)
        self._random_state = ensure_rng(random_state)
        # separate stream for progress figures, so logging never moves the chain
        self._monitor_rng = np.random.Generator(self._random_state.bit_generator.jumped())
        self._verbose = verbose
        self._log_every = log_every

        self._samples = []
        self._last = None
        self._best = None
        super(Sampler, self).__init__(events=DEFAULT_EVENTS)

    @property
    def model(self):
        return self._model

    @property
    def D(self):
        return self._D

    @property
    def space(self):
        return self._model.space

    @property
    def samples(self):
        return self._samples

    @property
    def last(self):
        return self._last

    @property
    def best(self):
        return self._best

    def _prime_subscriptions(self):
        if not any([len(subs) for subs in self._events.values()]):
            _logger = _get_default_logger(self._verbose, self._log_every)
            self.subscribe(Events.INFERENCE_START, _logger)
            self.subscribe(Events.INFERENCE_STEP, _logger)
            self.subscribe(Events.INFERENCE_END, _logger)

    def _record(self, iteration, u, log_density, accepted=True):
        self._last = {
            "iteration": iteration,
            "log_density": float(log_density),
            "params": self.space.constrained_params(u),
            "accepted": bool(accepted),
        }
        if self._best is None or self._last["log_density"] > self._best["log_density"]:
            self._best = dict(self._last)
        self.dispatch(Events.INFERENCE_STEP)

    def _monitor_log_density(self, u):
        """One-draw log-joint estimate, from the monitoring stream."""
        with np.errstate(all="ignore"):
            return estimate_loglik(self._model, u, self._D, 1, self._monitor_rng,
                                   include_prior=True).m

    def _initial_point(self, init, attempts=100):
        if init is not None:
            if isinstance(init, dict):
                return self.space.unconstrain(init)
            return self.space._as_array(init).copy()
        for _ in range(attempts):
            u = self.space.random_sample(self._random_state)
            if np.isfinite(self._model.log_prior(u)):
                return u
        raise ParameterDomainError(
            "No starting point with finite prior density found in {} attempts.".format(attempts)
        )


class ImportanceSampler(Sampler):
    """
    Importance sampling with bias-adjusted likelihood estimates.

    Particle x_i drawn from the proposal u gets the raw log weight
    m_i - s_i**2 / 2N - log u(x_i), m_i and s_i**2 being the mean and variance
    of N log-joint draws at x_i.

    Parameters
    ----------
    proposal: dict or list of DistSpec
        Independent proposal for every parameter, in constrained space; a
        dictionary keyed by parameter name or a list in `space.keys` order.

    particles: int, optional(default=1000)

    N: int, optional(default=16)
        Draws from D per particle, at least 2.

    exact: bool, optional(default=False)
        Use the exact likelihood (D with a finite support or a quadrature rule).
    """
    def __init__(self, model, D, proposal, particles=1000, N=16, exact=False,
                 random_state=None, verbose=0, log_every=100):
        super(ImportanceSampler, self).__init__(model, D, random_state, verbose, log_every)
        if isinstance(proposal, dict):
            proposal = [proposal[key] for key in self.space.keys]
        if len(proposal) != self.space.dim:
            raise ValueError(
                "Proposal has {} components for {} parameters.".format(
                    len(proposal), self.space.dim)
            )
        if particles < 1:
            raise ValueError("Importance sampling needs particles >= 1, got {}.".format(particles))
        self._proposal = list(proposal)
        self._particles = int(particles)
        self._N = int(N)
        self._exact = exact

    def _log_weight(self, x, seed):
        log_u = sum(spec.log_pdf(v) for spec, v in zip(self._proposal, x))
        try:
            u = self.space.unconstrain(x)
        except ParameterDomainError:
            return -np.inf, None
        # proposal density moved to unconstrained coordinates
        log_u += self.space.log_det_jacobian(u)
        if self._exact:
            log_target = self._model.log_prior(u)
            if np.isfinite(log_target):
                log_target += exact_stochastic_loglik(self._model, u, self._D)
        else:
            est = estimate_loglik(self._model, u, self._D, self._N, seed, include_prior=True)
            log_target = log_bias_adjusted_lik(est)
        return log_target - log_u, u

    def run(self):
        if not self._exact and self._N < 2:
            raise InsufficientSamplesError(
                "Importance weights need N >= 2 draws per particle, got N = {}.".format(self._N)
            )
        self._prime_subscriptions()
        self.dispatch(Events.INFERENCE_START)

        log_weights = np.empty(self._particles)
        points = []
        for i in range(self._particles):
            x = np.array([spec.sample(self._random_state) for spec in self._proposal])
            log_weights[i], u = self._log_weight(x, derive_seed(self._random_state))
            points.append(u)
            if u is not None:
                self._record(i, u, log_weights[i])

        if not np.any(np.isfinite(log_weights)):
            raise DegenerateProposalError(
                "All {} importance weights are zero.".format(self._particles)
            )
        weights = np.exp(log_weights - logsumexp(log_weights))
        self._samples = [
            PosteriorSample(u, float(w), i, float(lw))
            for i, (u, w, lw) in enumerate(zip(points, weights, log_weights))
            if u is not None
        ]
        self.dispatch(Events.INFERENCE_END)
        return self._samples

    @property
    def effective_sample_size(self):
        w = np.array([s.weight for s in self._samples])
        return float(1.0 / np.sum(w ** 2))


class GaussianRandomWalk(object):
    """Symmetric Gaussian random-walk proposal in unconstrained space."""
    symmetric = True

    def __init__(self, scale=0.5):
        if scale < 0:
            raise ValueError("Proposal scale must be nonnegative, got {!r}.".format(scale))
        self.scale = float(scale)

    def propose(self, u, random_state):
        return u + self.scale * random_state.standard_normal(len(u))

    def log_density(self, to, frm):
        """log u(to | frm), up to a constant."""
        return 0.0

    def adapt(self, acceptance_rate, target):
        self.scale *= np.exp(acceptance_rate - target)


class PseudoMarginalMH(Sampler):
    """
    Metropolis-Hastings with bias-adjusted likelihood estimates.

    Every step draws y_1, ..., y_N ~ D once and evaluates both the current
    and the proposed state on them, accepting with probability

        min(1, u(x|x') / u(x'|x) * exp(m' - m - (s'**2 - s**2) / 2N)).

    Parameters
    ----------
    draws: int, optional(default=1000)
        Samples kept after burn-in.

    burn_in: int, optional(default=None)
        Discarded leading iterations, 20% of `draws` when None. The proposal
        scale adapts toward `target_acceptance` during burn-in only.

    N: int, optional(default=16)
        Draws from D per likelihood estimate, at least 2.

    kernel: proposal, optional(default=GaussianRandomWalk(0.5))
        Anything with `propose(u, random_state)` and `log_density(to, frm)`.

    exact: bool, optional(default=False)
        Use the exact likelihood; the chain is then plain Metropolis-Hastings.

    init: dict or array, optional(default=None)
        Constrained parameters (dict) or an unconstrained point to start from.
    """
    def __init__(self, model, D, draws=1000, burn_in=None, N=16, kernel=None, exact=False,
                 init=None, adapt=True, target_acceptance=0.3, adapt_interval=50,
                 random_state=None, verbose=0, log_every=100):
        super(PseudoMarginalMH, self).__init__(model, D, random_state, verbose, log_every)
        if draws < 1:
            raise ValueError("PMMH needs draws >= 1, got {}.".format(draws))
        if not exact and N < 2:
            raise InsufficientSamplesError(
                "Pseudo-marginal estimates need N >= 2 draws, got N = {}.".format(N)
            )
        self._draws = int(draws)
        self._burn_in = default_burn_in(draws) if burn_in is None else int(burn_in)
        self._N = int(N)
        self._kernel = GaussianRandomWalk() if kernel is None else kernel
        self._exact = exact
        self._init = init
        self._adapt = adapt and hasattr(self._kernel, "adapt")
        self._target_acceptance = target_acceptance
        self._adapt_interval = adapt_interval
        self._accepted = 0

    @property
    def burn_in(self):
        return self._burn_in

    @property
    def kernel(self):
        return self._kernel

    @property
    def acceptance_rate(self):
        """Fraction of accepted proposals among the kept iterations."""
        if not self._samples:
            return 0.0
        return self._accepted / len(self._samples)

    def log_target(self, u, seed=None):
        """Log prior plus the log of the bias-adjusted likelihood estimate."""
        log_prior = self._model.log_prior(u)
        if not np.isfinite(log_prior):
            return -np.inf
        if self._exact:
            return log_prior + exact_stochastic_loglik(self._model, u, self._D)
        est = estimate_loglik(self._model, u, self._D, self._N, seed)
        return log_prior + log_bias_adjusted_lik(est)

    def run(self):
        self._prime_subscriptions()
        self.dispatch(Events.INFERENCE_START)

        u = self._initial_point(self._init)
        current = self.log_target(u) if self._exact else None
        accepted_total = 0
        window = 0
        self._samples = []
        self._accepted = 0
        for t in range(self._burn_in + self._draws):
            seed = None if self._exact else derive_seed(self._random_state)
            proposal = self._kernel.propose(u, self._random_state)
            with np.errstate(invalid="ignore", over="ignore"):
                proposed = self.log_target(proposal, seed)
                if not self._exact:
                    current = self.log_target(u, seed)
                log_alpha = proposed - current
                if not getattr(self._kernel, "symmetric", False):
                    log_alpha += (self._kernel.log_density(u, proposal) -
                                  self._kernel.log_density(proposal, u))
            accept = bool(np.log(self._random_state.random()) < log_alpha)
            if accept:
                u, current = proposal, proposed
                accepted_total += 1
                window += 1

            if t < self._burn_in:
                if self._adapt and (t + 1) % self._adapt_interval == 0:
                    self._kernel.adapt(window / self._adapt_interval, self._target_acceptance)
                    window = 0
            else:
                self._accepted += accept
                self._samples.append(PosteriorSample(u.copy(), 1.0, t))
            self._record(t, u, current, accept)

        if accepted_total == 0:
            warnings.warn(
                "PMMH chain never accepted a proposal in {} iterations; ".format(t + 1) +
                "consider a smaller proposal scale or more draws per estimate.",
                RuntimeWarning,
            )
        self.dispatch(Events.INFERENCE_END)
        return self._samples


class SGHMC(Sampler):
    """
    Stochastic-gradient Hamiltonian Monte Carlo driven by single-draw
    gradient estimates. Momentum r is resampled for every draw, followed by
    `leapfrog_steps` updates

        x <- x + step_size * r
        r <- r + step_size * g(x) - step_size * friction * r + N(0, 2 friction step_size)

    with g an unbiased estimate of the log-joint gradient.

    Parameters
    ----------
    step_size: float, optional(default=0.05)

    friction: float, optional(default=1.0)

    leapfrog_steps: int, optional(default=10)

    batch: int, optional(default=1)
        Draws from D per gradient estimate.

    overflow: float, optional(default=1e8)
        Trajectories leaving the box |x| < overflow raise DivergenceError.
    """
    def __init__(self, model, D, draws=1000, step_size=0.05, friction=1.0, leapfrog_steps=10,
                 burn_in=None, batch=1, init=None, overflow=1e8,
                 random_state=None, verbose=0, log_every=100):
        super(SGHMC, self).__init__(model, D, random_state, verbose, log_every)
        if step_size < 0:
            raise ValueError("SGHMC step size must be nonnegative, got {!r}.".format(step_size))
        if friction < 0:
            raise ValueError("SGHMC friction must be nonnegative, got {!r}.".format(friction))
        if leapfrog_steps < 1:
            raise ValueError("SGHMC needs leapfrog_steps >= 1, got {}.".format(leapfrog_steps))
        self._draws = int(draws)
        self._burn_in = default_burn_in(draws) if burn_in is None else int(burn_in)
        self._step_size = float(step_size)
        self._friction = float(friction)
        self._leapfrog_steps = int(leapfrog_steps)
        self._batch = int(batch)
        self._init = init
        self._overflow = overflow

    @property
    def burn_in(self):
        return self._burn_in

    def run(self):
        self._prime_subscriptions()
        self.dispatch(Events.INFERENCE_START)

        eps, friction = self._step_size, self._friction
        noise = np.sqrt(2 * friction * eps)
        u = self._initial_point(self._init)
        dim = len(u)
        self._samples = []
        for t in range(self._burn_in + self._draws):
            r = self._random_state.standard_normal(dim)
            for _ in range(self._leapfrog_steps):
                u = u + eps * r
                with np.errstate(all="ignore"):
                    g = estimate_grad_loglik(self._model, u, self._D, self._random_state,
                                             batch=self._batch)
                r = r + eps * g - eps * friction * r + noise * self._random_state.standard_normal(dim)
                if not (np.all(np.isfinite(u)) and np.all(np.isfinite(r)) and
                        np.max(np.abs(u)) < self._overflow):
                    raise DivergenceError("SGHMC trajectory diverged", iteration=t)
            if t >= self._burn_in:
                self._samples.append(PosteriorSample(u.copy(), 1.0, t))
            self._record(t, u, self._monitor_log_density(u))

        self.dispatch(Events.INFERENCE_END)
        return self._samples


class VariationalParams(object):
    """
    Mean-field Gaussian q(x | lambda) over the unconstrained parameters,
    lambda = (mean, log_sd).
    """
    def __init__(self, mean, log_sd):
        self.mean = np.array(mean, dtype=float).ravel()
        self.log_sd = np.array(log_sd, dtype=float).ravel()
        if self.mean.shape != self.log_sd.shape:
            raise ValueError(
                "Variational mean ({}) and log-sd ({}) sizes differ.".format(
                    self.mean.size, self.log_sd.size)
            )

    @classmethod
    def from_array(cls, lam):
        lam = np.asarray(lam, dtype=float)
        return cls(lam[:len(lam) // 2], lam[len(lam) // 2:])

    @property
    def lam(self):
        return np.concatenate([self.mean, self.log_sd])

    @property
    def sd(self):
        return np.exp(self.log_sd)

    @property
    def finite(self):
        return bool(np.all(np.isfinite(self.lam)))

    def sample(self, random_state, size):
        return self.mean + self.sd * random_state.standard_normal((size, len(self.mean)))

    def log_density(self, z):
        r = (np.atleast_2d(z) - self.mean) / self.sd
        return -0.5 * np.sum(r * r, axis=1) - np.sum(self.log_sd) - 0.5 * len(self.mean) * np.log(2 * np.pi)

    def score(self, z):
        """Rows of grad_lambda log q(z | lambda)."""
        r = (np.atleast_2d(z) - self.mean) / self.sd
        return np.hstack([r / self.sd, r * r - 1])

    def __repr__(self):
        return "VariationalParams(mean={}, log_sd={})".format(self.mean.tolist(), self.log_sd.tolist())


def adaptive_step_size(k, s, eta, tau=1.0):
    """eta * k**(-1/2) / (tau + sqrt(s)), coordinate-wise."""
    return eta * k ** -0.5 / (tau + np.sqrt(s))


class AdaptiveStepSchedule(object):
    """
    Per-coordinate step sizes from a running average s_k of squared
    gradients, s_k = alpha g_k**2 + (1 - alpha) s_{k-1} (s_1 = g_1**2),
    with decay k**(-1/2).
    """
    def __init__(self, eta=0.1, alpha=0.1, tau=1.0):
        self.eta = eta
        self.alpha = alpha
        self.tau = tau
        self._k = 0
        self._s = None

    def __call__(self, g):
        self._k += 1
        g2 = np.square(g)
        self._s = g2 if self._s is None else self.alpha * g2 + (1 - self.alpha) * self._s
        return adaptive_step_size(self._k, self._s, self.eta, self.tau)


def score_terms(model, D, variational, batch, random_state):
    """
    Per-sample score-function terms of the ELBO gradient,
    grad log q(x_s | lambda) * (log p(x_s) + log p(y_s | x_s) - log q(x_s | lambda))
    with x_s ~ q and y_s ~ D, together with the bracketed objective values.

    Returns
    -------
    (ndarray, ndarray)
        Terms of shape (batch, 2 * dim) and objective values of shape (batch,).
    """
    D = as_observed(D)
    z = variational.sample(random_state, batch)
    ys = D.sample(random_state, size=batch)
    with np.errstate(all="ignore"):
        log_p = np.array([
            model.log_prior(zs) + D.count * model.log_cond(zs, y) for zs, y in zip(z, ys)
        ])
        f = log_p - variational.log_density(z)
        return variational.score(z) * f[:, None], f


def elbo_gradient(model, D, variational, batch, random_state=None):
    """Score-function estimate of the ELBO gradient from `batch` samples."""
    terms, _ = score_terms(model, D, variational, batch, ensure_rng(random_state))
    return terms.mean(axis=0)


class BBVI(Sampler):
    """
    Black-box variational inference: stochastic ascent on the ELBO with the
    score-function gradient estimator and an adaptive step schedule.

    Parameters
    ----------
    init: VariationalParams, optional(default=None)
        Starting point; a standard normal q when None.

    iterations: int, optional(default=1000)

    batch: int, optional(default=10)
        Samples per gradient estimate, at least 1.

    schedule: callable, optional(default=AdaptiveStepSchedule())
        Maps a gradient estimate to the per-coordinate step sizes.
    """
    def __init__(self, model, D, init=None, iterations=1000, batch=10, schedule=None,
                 random_state=None, verbose=0, log_every=100):
        super(BBVI, self).__init__(model, D, random_state, verbose, log_every)
        if batch < 1:
            raise ValueError("BBVI needs batch >= 1, got {}.".format(batch))
        if init is None:
            init = VariationalParams(np.zeros(model.dim), np.zeros(model.dim))
        self._init = init
        self._iterations = int(iterations)
        self._batch = int(batch)
        self._schedule = AdaptiveStepSchedule() if schedule is None else schedule
        self._trajectory = []

    @property
    def trajectory(self):
        return self._trajectory

    def averaged(self, fraction=0.25):
        """Average of lambda over the final `fraction` of the trajectory."""
        tail = max(int(round(fraction * (len(self._trajectory) - 1))), 1)
        lam = np.mean([v.lam for v in self._trajectory[-tail:]], axis=0)
        return VariationalParams.from_array(lam)

    def run(self):
        self._prime_subscriptions()
        self.dispatch(Events.INFERENCE_START)

        current = VariationalParams(self._init.mean, self._init.log_sd)
        self._trajectory = [current]
        for k in range(1, self._iterations + 1):
            terms, f = score_terms(self._model, self._D, current, self._batch, self._random_state)
            g = terms.mean(axis=0)
            current = VariationalParams.from_array(current.lam + self._schedule(g) * g)
            if not current.finite:
                raise DivergenceError("BBVI variational parameters became non-finite",
                                      iteration=k)
            self._trajectory.append(current)
            self._record(k, current.mean, np.mean(f))

        self.dispatch(Events.INFERENCE_END)
        return self._trajectory

    def draws(self, n, variational=None):
        """n samples from q (the tail-averaged q by default) as posterior draws."""
        variational = self.averaged() if variational is None else variational
        z = variational.sample(self._monitor_rng, n)
        return [PosteriorSample(zs, 1.0, i) for i, zs in enumerate(z)]


def importance_sampling(model, D, proposal, particles, N, random_state=None, **kwargs):
    return ImportanceSampler(model, D, proposal, particles=particles, N=N,
                             random_state=random_state, **kwargs).run()


def pmmh(model, D, kernel=None, draws=1000, burn_in=None, N=16, random_state=None, **kwargs):
    return PseudoMarginalMH(model, D, draws=draws, burn_in=burn_in, N=N, kernel=kernel,
                            random_state=random_state, **kwargs).run()


def sghmc(model, D, draws=1000, step_size=0.05, friction=1.0, leapfrog_steps=10,
          random_state=None, **kwargs):
    return SGHMC(model, D, draws=draws, step_size=step_size, friction=friction,
                 leapfrog_steps=leapfrog_steps, random_state=random_state, **kwargs).run()


def bbvi(model, D, init=None, iterations=1000, batch=10, schedule=None, random_state=None,
         **kwargs):
    return BBVI(model, D, init=init, iterations=iterations, batch=batch, schedule=schedule,
                random_state=random_state, **kwargs).run()
