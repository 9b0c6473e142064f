import numpy as np
from scipy.special import expit, logit

from .exceptions import ParameterDomainError
from .util import ensure_rng


class Identity(object):
    """Unconstrained coordinate."""
    kind = "identity"

    def to_constrained(self, u):
        return u

    def to_unconstrained(self, x):
        return x

    def dx_du(self, u):
        return np.ones_like(u)

    def log_det_jacobian(self, u):
        return np.zeros_like(u)

    def grad_log_det_jacobian(self, u):
        return np.zeros_like(u)

    def contains(self, x):
        return np.isfinite(x)

    def __repr__(self):
        return "identity"


class Log(object):
    """Positive coordinate, x = exp(u)."""
    kind = "log"

    def to_constrained(self, u):
        return np.exp(u)

    def to_unconstrained(self, x):
        return np.log(x)

    def dx_du(self, u):
        return np.exp(u)

    def log_det_jacobian(self, u):
        return u

    def grad_log_det_jacobian(self, u):
        return np.ones_like(u)

    def contains(self, x):
        return x > 0

    def __repr__(self):
        return "log"


class Logit(object):
    """Coordinate on the open interval (lo, hi), x = lo + (hi - lo) * expit(u)."""
    kind = "logit"

    def __init__(self, lo=0.0, hi=1.0):
        if not lo < hi:
            raise ParameterDomainError(
                "Logit transform needs lo < hi, got ({!r}, {!r}).".format(lo, hi)
            )
        self.lo = float(lo)
        self.hi = float(hi)

    def to_constrained(self, u):
        return self.lo + (self.hi - self.lo) * expit(u)

    def to_unconstrained(self, x):
        return logit((np.asarray(x, dtype=float) - self.lo) / (self.hi - self.lo))

    def dx_du(self, u):
        s = expit(u)
        return (self.hi - self.lo) * s * (1 - s)

    def log_det_jacobian(self, u):
        # log(hi - lo) + log expit(u) + log expit(-u), stable for large |u|
        return np.log(self.hi - self.lo) - np.logaddexp(0, -u) - np.logaddexp(0, u)

    def grad_log_det_jacobian(self, u):
        return 1 - 2 * expit(u)

    def contains(self, x):
        return (x > self.lo) & (x < self.hi)

    def __repr__(self):
        if (self.lo, self.hi) == (0.0, 1.0):
            return "logit"
        return "logit({}, {})".format(self.lo, self.hi)


def as_transform(spec):
    """Accepts a transform, one of its names, or an (lo, hi) interval."""
    if isinstance(spec, (Identity, Log, Logit)):
        return spec
    if spec is None or spec == "identity":
        return Identity()
    if spec == "log":
        return Log()
    if spec == "logit":
        return Logit()
    try:
        lo, hi = spec
    except (TypeError, ValueError):
        raise ValueError("Unknown transform {!r}.".format(spec))
    return Logit(lo, hi)


class ParamSpace(object):
    """
    Names the latent variables of a model and maps them between the
    constrained space the model is written in and the unconstrained real
    vector the inference algorithms move in.

    Example
    -------
    >>> space = ParamSpace({'p_r': 'logit', 'scale': 'log', 'shift': None})
    >>> space.keys
    ['p_r', 'scale', 'shift']
    >>> u = space.unconstrain({'p_r': 0.5, 'scale': 1.0, 'shift': -2.0})
    >>> u
    array([ 0.,  0., -2.])
    """
    def __init__(self, transforms):
        """
        Parameters
        ----------
        transforms : dict
            Dictionary with parameter names as keys and, as values, the
            transform into unconstrained space: None or 'identity', 'log',
            'logit', or an (lo, hi) interval for a scaled logit.
        """
        self._keys = sorted(transforms)
        self._transforms = [as_transform(transforms[key]) for key in self._keys]

    def __len__(self):
        return len(self._keys)

    @property
    def dim(self):
        return len(self._keys)

    @property
    def keys(self):
        return self._keys

    @property
    def transforms(self):
        return dict(zip(self._keys, self._transforms))

    def params_to_array(self, params):
        try:
            assert set(params) == set(self.keys)
        except AssertionError:
            raise ValueError(
                "Parameters' keys ({}) do ".format(sorted(params)) +
                "not match the expected set of keys ({}).".format(self.keys)
            )
        return np.asarray([params[key] for key in self.keys], dtype=float)

    def array_to_params(self, x):
        try:
            assert len(x) == len(self.keys)
        except AssertionError:
            raise ValueError(
                "Size of array ({}) is different than the ".format(len(x)) +
                "expected number of parameters ({}).".format(len(self.keys))
            )
        return dict(zip(self.keys, map(float, x)))

    def _as_array(self, x):
        if isinstance(x, dict):
            x = self.params_to_array(x)
        x = np.asarray(x, dtype=float).ravel()
        try:
            assert x.size == self.dim
        except AssertionError:
            raise ValueError(
                "Size of array ({}) is different than the ".format(len(x)) +
                "expected number of parameters ({}).".format(len(self.keys))
            )
        return x

    def constrain(self, u):
        u = self._as_array(u)
        return np.array([t.to_constrained(v) for t, v in zip(self._transforms, u)])

    def unconstrain(self, x):
        x = self._as_array(x)
        for key, t, v in zip(self._keys, self._transforms, x):
            if not t.contains(v):
                raise ParameterDomainError(
                    "Value {!r} of '{}' lies outside the ".format(v, key) +
                    "support of its {!r} transform.".format(t)
                )
        return np.array([t.to_unconstrained(v) for t, v in zip(self._transforms, x)])

    def constrained_params(self, u):
        """Dictionary of constrained values at the unconstrained point u."""
        return self.array_to_params(self.constrain(u))

    def dx_du(self, u):
        u = self._as_array(u)
        return np.array([t.dx_du(v) for t, v in zip(self._transforms, u)])

    def log_det_jacobian(self, u):
        u = self._as_array(u)
        return float(sum(t.log_det_jacobian(v) for t, v in zip(self._transforms, u)))

    def grad_log_det_jacobian(self, u):
        u = self._as_array(u)
        return np.array([t.grad_log_det_jacobian(v) for t, v in zip(self._transforms, u)])

    def random_sample(self, random_state=None, radius=2.0):
        """
        A random unconstrained point, uniform on [-radius, radius] in every
        coordinate. Used to start chains.
        """
        random_state = ensure_rng(random_state)
        return random_state.uniform(-radius, radius, size=self.dim)
