"""
Exact likelihoods for conditioning on an observed distribution D with a
finite support or a quadrature rule.

With q the density of D, the stochastic-conditioning log-likelihood is

    log p(y ~ D | x) = count * sum_y q(y) log p(y | x),

the mixture alternative is count * log sum_y q(y) p(y | x), and the power
mean interpolates between the two.
"""
import numpy as np
from scipy.integrate import trapezoid
from scipy.special import logsumexp

from .distributions import DistSpec
from .observed import DiracObs, as_observed


def _log_cond_chunks(model, x, D):
    for ys, weights in D.iter_support():
        keep = weights > 0
        # 0 * log 0 = 0: atoms without mass are never evaluated
        yield model.log_cond_many(x, ys[keep]), weights[keep]


def exact_stochastic_loglik(model, x, D):
    """
    Parameters
    ----------
    model: Model

    x: array-like
        Unconstrained point.

    D: ObservedDistribution
        Must have a finite support or a quadrature rule, otherwise
        UnsupportedExactError is raised.

    Returns
    -------
    float
        -inf when some atom with positive mass has zero density under the model.
    """
    D = as_observed(D)
    if isinstance(D, DiracObs) and D.count == 1:
        return model.log_cond(x, D.value)

    total = 0.0
    for log_p, weights in _log_cond_chunks(model, x, D):
        if np.any(log_p == -np.inf):
            return -np.inf
        total += np.dot(weights, log_p)
    return D.count * float(total)


def _log_power_sum(model, x, D, alpha):
    """log sum_y q(y) p(y|x)**alpha, accumulated over support chunks."""
    acc = -np.inf
    for log_p, weights in _log_cond_chunks(model, x, D):
        with np.errstate(invalid="ignore"):
            terms = alpha * log_p + np.log(weights)
        acc = np.logaddexp(acc, logsumexp(terms))
    return acc


def alternative_loglik_p1(model, x, D):
    """Log of the mixture likelihood sum_y q(y) p(y|x), times `count`."""
    D = as_observed(D)
    return D.count * float(_log_power_sum(model, x, D, 1.0))


def power_mean_loglik(model, x, D, alpha):
    """
    Log of the power mean (sum_y q(y) p(y|x)**alpha)**(1/alpha), times
    `count`. alpha = 0 is the geometric-mean limit, i.e. the exact
    stochastic-conditioning likelihood; alpha = 1 is the mixture.
    """
    D = as_observed(D)
    if alpha == 0:
        return exact_stochastic_loglik(model, x, D)
    return D.count * float(_log_power_sum(model, x, D, alpha) / alpha)


def _grid_point(model, point):
    if isinstance(point, dict):
        return model.space.unconstrain(point)
    return model.space._as_array(point)


def kl_divergence(model, x, D):
    """KL(q || p(.|x)) for a single observation from D."""
    D = as_observed(D)
    cross = 0.0
    for log_p, weights in _log_cond_chunks(model, x, D):
        if np.any(log_p == -np.inf):
            return np.inf
        cross -= np.dot(weights, log_p)
    return float(cross - D.entropy())


def kl_argmax_check(model, grid, D, loglik=None):
    """
    Scan a grid of latent values for the maximizer of the likelihood and
    the minimizer of KL(q || p(.|x)).

    Parameters
    ----------
    grid: list
        Unconstrained points, or dictionaries of constrained values.

    loglik: callable, optional(default=exact_stochastic_loglik)
        loglik(model, x, D); pass `alternative_loglik_p1` to see the mixture
        likelihood disagree with the KL minimizer.

    Returns
    -------
    (int, int)
        Index of the likelihood maximizer and of the KL minimizer. They agree
        for the exact stochastic-conditioning likelihood.
    """
    if len(grid) == 0:
        raise ValueError("kl_argmax_check needs a nonempty grid.")
    loglik = exact_stochastic_loglik if loglik is None else loglik
    D = as_observed(D)
    points = [_grid_point(model, g) for g in grid]
    values = np.array([loglik(model, x, D) for x in points])
    kls = np.array([kl_divergence(model, x, D) for x in points])
    return int(np.argmax(values)), int(np.argmin(kls))


def _family_loglik(model, x, family, theta):
    D = family(*np.atleast_1d(theta))
    if isinstance(D, DistSpec) and D.discrete and len(D.support()[0]) == 1:
        D = DiracObs(D.support()[0][0])
    return exact_stochastic_loglik(model, x, as_observed(D))


def normalization_probe(model, x, family, theta_grid):
    """
    Running integral of exp(log p(y ~ D_theta | x)) over growing windows of a
    family of observed distributions.

    Parameters
    ----------
    family: callable
        Maps grid coordinates to a DistSpec or ObservedDistribution.

    theta_grid: array-like or tuple of array-like
        A 1-d grid for a one-parameter family, or one 1-d grid per family
        argument. Windows grow symmetrically around the middle of every grid
        at once, one grid step per side per window.

    Returns
    -------
    ndarray
        Trapezoid integral over each window, smallest window first. A family
        with a finite normalization constant plateaus.
    """
    if np.ndim(theta_grid[0]) == 0:
        axes = [np.asarray(theta_grid, dtype=float)]
    else:
        axes = [np.asarray(a, dtype=float) for a in theta_grid]
    axes = [np.sort(a) for a in axes]

    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    values = np.array([np.exp(_family_loglik(model, x, family, p)) for p in points])
    values = values.reshape(mesh[0].shape)

    centers = [len(a) // 2 for a in axes]
    steps = max(max(c, len(a) - 1 - c) for c, a in zip(centers, axes))
    running = []
    for k in range(1, steps + 1):
        window = tuple(
            slice(max(c - k, 0), min(c + k, len(a) - 1) + 1) for c, a in zip(centers, axes)
        )
        integral = values[window]
        for axis in reversed(range(len(axes))):
            integral = trapezoid(integral, axes[axis][window[axis]], axis=axis)
        running.append(float(integral))
    return np.array(running)
