"""
Gradients of model log-joint densities in unconstrained coordinates, and a
central finite-difference checker to hold the hand-written ones to account.
"""
import warnings
from collections import namedtuple

import numpy as np

GradResult = namedtuple("GradResult", ["value", "grad", "finite"])
GradResult.__doc__ = """
Log-joint value and its gradient at a point. `finite` is False when the
log-joint is not finite, in which case value is -inf and grad is all zeros.
"""


def grad_log_joint(model, x, y):
    """
    Gradient of log p(x) + log p(y|x) with respect to the unconstrained x,
    log-Jacobian of the constraining transforms included.

    Returns
    -------
    GradResult
    """
    x = model.space._as_array(x)
    with np.errstate(all="ignore"):
        value = model.log_joint(x, y)
        if not np.isfinite(value):
            return GradResult(-np.inf, np.zeros(model.dim), False)
        grad = np.asarray(model.grad_log_joint(x, y), dtype=float)
    return GradResult(float(value), grad, bool(np.all(np.isfinite(grad))))


def finite_difference_check(model, x, y, h=1e-5, tolerance=None):
    """
    Largest absolute difference, over coordinates, between the analytic
    gradient of the log-joint and its central finite difference with step h.

    Parameters
    ----------
    h: float, optional(default=1e-5)
        Finite-difference step, must be positive.

    tolerance: float, optional(default=None)
        When given, errors above it raise a RuntimeWarning. Non-smooth points
        (a step landing outside the support) give an infinite error.

    Returns
    -------
    float
    """
    if not h > 0:
        raise ValueError("Finite-difference step must be positive, got {!r}.".format(h))
    x = model.space._as_array(x)
    analytic = grad_log_joint(model, x, y)

    error = 0.0
    with np.errstate(all="ignore"):
        for i in range(model.dim):
            step = np.zeros(model.dim)
            step[i] = h
            numeric = (model.log_joint(x + step, y) - model.log_joint(x - step, y)) / (2 * h)
            diff = abs(analytic.grad[i] - numeric)
            if not (analytic.finite and np.isfinite(diff)):
                diff = np.inf
            error = max(error, diff)

    if tolerance is not None and error > tolerance:
        warnings.warn(
            "Gradient check at {} failed: error {:.3g} exceeds {:.3g}.".format(
                model.space.array_to_params(x), error, tolerance),
            RuntimeWarning,
        )
    return float(error)
