import numpy as np

from .param_space import ParamSpace


class Model(object):
    """
    A probabilistic model p(x) p(y|x) over named latents x.

    Subclasses write the model in constrained space by implementing
    `_log_prior`, `_log_cond` and, for gradient-based inference, their
    derivatives `_grad_log_prior` and `_grad_log_cond`. The public methods
    take unconstrained points u and apply the transform ledger of `space`:
    the prior picks up the log-Jacobian, gradients go through the chain rule.

    Observations y are floats or 1-d float arrays; `_log_cond_many` may be
    overridden to evaluate a stacked batch of them at once.

    Parameters
    ----------
    space: ParamSpace or dict
        The latent variables and their transforms.
    """
    def __init__(self, space):
        if not isinstance(space, ParamSpace):
            space = ParamSpace(space)
        self._space = space

    @property
    def space(self):
        return self._space

    @property
    def dim(self):
        return self._space.dim

    # constrained-space hooks

    def _log_prior(self, x):
        raise NotImplementedError

    def _grad_log_prior(self, x):
        raise NotImplementedError

    def _log_cond(self, x, y):
        raise NotImplementedError

    def _grad_log_cond(self, x, y):
        raise NotImplementedError

    def _log_cond_many(self, x, ys):
        return np.array([self._log_cond(x, y) for y in ys], dtype=float)

    def _grad_log_cond_many(self, x, ys):
        return np.array([self._grad_log_cond(x, y) for y in ys], dtype=float)

    # unconstrained-space interface

    def log_prior(self, u):
        """log p(u): constrained prior density plus the log-Jacobian."""
        u = self._space._as_array(u)
        return float(self._log_prior(self._space.constrain(u)) +
                     self._space.log_det_jacobian(u))

    def grad_log_prior(self, u):
        u = self._space._as_array(u)
        x = self._space.constrain(u)
        return (np.asarray(self._grad_log_prior(x), dtype=float) * self._space.dx_du(u) +
                self._space.grad_log_det_jacobian(u))

    def log_cond(self, u, y):
        """log p(y|u)."""
        return float(self._log_cond(self._space.constrain(u), y))

    def grad_log_cond(self, u, y):
        u = self._space._as_array(u)
        x = self._space.constrain(u)
        return np.asarray(self._grad_log_cond(x, y), dtype=float) * self._space.dx_du(u)

    def log_cond_many(self, u, ys):
        """log p(y|u) for every observation in the batch ys."""
        return np.asarray(self._log_cond_many(self._space.constrain(u), ys), dtype=float)

    def grad_log_cond_many(self, u, ys):
        """Rows of gradients of log p(y|u), one per observation in ys."""
        u = self._space._as_array(u)
        x = self._space.constrain(u)
        grads = np.asarray(self._grad_log_cond_many(x, ys), dtype=float)
        return grads.reshape(len(ys), self.dim) * self._space.dx_du(u)

    def log_joint(self, u, y):
        lp = self.log_prior(u)
        if not np.isfinite(lp):
            return lp
        return lp + self.log_cond(u, y)

    def grad_log_joint(self, u, y):
        return self.grad_log_prior(u) + self.grad_log_cond(u, y)
