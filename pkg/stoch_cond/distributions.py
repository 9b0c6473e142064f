"""
Elementary distributions backing model densities p(y|x) and observed
distributions q(y).

Every family is a small immutable object with vectorised `log_pdf`, `cdf` and
`sample`; the module level `log_pdf` and `sample` functions are the
functional entry points used throughout the package.
"""
import numpy as np
from scipy import special, stats

from .exceptions import ParameterDomainError, ConstructionError, UnsupportedExactError

LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)


def _as_output(values, y):
    """Scalars in, scalar out."""
    if np.ndim(y) == 0:
        return float(np.asarray(values).reshape(()))
    return values


class DistSpec(object):
    """Base class for the distribution families."""
    name = None
    discrete = False

    def log_pdf(self, y):
        raise NotImplementedError

    def cdf(self, y):
        raise NotImplementedError

    def sample(self, random_state, size=None):
        raise NotImplementedError

    @property
    def mean(self):
        raise NotImplementedError

    def support(self):
        """Atoms and their probabilities, for finite-support families."""
        raise UnsupportedExactError(
            "{} has no finite support.".format(self.name)
        )

    def quadrature(self, order=64):
        """Nodes and weights integrating expectations under the distribution."""
        raise UnsupportedExactError(
            "No quadrature rule available for {}.".format(self.name)
        )

    def __repr__(self):
        return "{}({})".format(
            self.name,
            ", ".join("{}={!r}".format(k, v) for k, v in self._params().items()),
        )

    def __eq__(self, other):
        return type(self) is type(other) and repr(self) == repr(other)

    def __hash__(self):
        return hash(repr(self))

    def _params(self):
        return {}


def _check_positive(name, value, family):
    if not value > 0 or not np.isfinite(value):
        raise ParameterDomainError(
            "{} requires {} > 0, got {!r}.".format(family, name, value)
        )


class Normal(DistSpec):
    name = "Normal"

    def __init__(self, mean, sd):
        _check_positive("sd", sd, self.name)
        self.loc = float(mean)
        self.sd = float(sd)

    def _params(self):
        return {"mean": self.loc, "sd": self.sd}

    @property
    def mean(self):
        return self.loc

    def log_pdf(self, y):
        z = (np.asarray(y, dtype=float) - self.loc) / self.sd
        return _as_output(-0.5 * z * z - np.log(self.sd) - LOG_SQRT_2PI, y)

    def cdf(self, y):
        return stats.norm.cdf(y, loc=self.loc, scale=self.sd)

    def sample(self, random_state, size=None):
        return random_state.normal(self.loc, self.sd, size=size)

    def quadrature(self, order=64):
        nodes, weights = special.roots_hermitenorm(order)
        return self.loc + self.sd * nodes, weights / weights.sum()

    def grad_log_pdf_params(self, y):
        """Derivatives of log_pdf(y) with respect to (mean, sd)."""
        r = np.asarray(y, dtype=float) - self.loc
        return r / self.sd ** 2, r * r / self.sd ** 3 - 1.0 / self.sd


class LogNormal(DistSpec):
    name = "LogNormal"

    def __init__(self, mu, sigma):
        _check_positive("sigma", sigma, self.name)
        self.mu = float(mu)
        self.sigma = float(sigma)

    @classmethod
    def from_moments(cls, mean, variance):
        """
        The log-normal whose mean and variance are `mean` and `variance`:
        sigma = sqrt(log(variance / mean**2 + 1)), mu = log(mean) - sigma**2 / 2.
        """
        _check_positive("mean", mean, cls.name)
        _check_positive("variance", variance, cls.name)
        sigma2 = np.log1p(variance / mean ** 2)
        return cls(np.log(mean) - 0.5 * sigma2, np.sqrt(sigma2))

    def _params(self):
        return {"mu": self.mu, "sigma": self.sigma}

    @property
    def mean(self):
        return float(np.exp(self.mu + 0.5 * self.sigma ** 2))

    @property
    def variance(self):
        s2 = self.sigma ** 2
        return float(np.expm1(s2) * np.exp(2 * self.mu + s2))

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            logy = np.log(np.where(y > 0, y, 1.0))
            z = (logy - self.mu) / self.sigma
            out = -0.5 * z * z - np.log(self.sigma) - LOG_SQRT_2PI - logy
        return _as_output(np.where(y > 0, out, -np.inf), y)

    def cdf(self, y):
        return stats.lognorm.cdf(y, s=self.sigma, scale=np.exp(self.mu))

    def sample(self, random_state, size=None):
        return random_state.lognormal(self.mu, self.sigma, size=size)

    def quadrature(self, order=64):
        nodes, weights = special.roots_hermitenorm(order)
        return np.exp(self.mu + self.sigma * nodes), weights / weights.sum()

    def grad_log_pdf_params(self, y):
        """
        Derivatives of log_pdf(y) with respect to (mu, sigma); zero where y <= 0,
        outside the support.
        """
        y = np.asarray(y, dtype=float)
        inside = y > 0
        r = np.log(np.where(inside, y, 1.0)) - self.mu
        d_mu = np.where(inside, r / self.sigma ** 2, 0.0)
        d_sigma = np.where(inside, r * r / self.sigma ** 3 - 1.0 / self.sigma, 0.0)
        return _as_output(d_mu, y), _as_output(d_sigma, y)


class Beta(DistSpec):
    name = "Beta"

    def __init__(self, alpha, beta):
        _check_positive("alpha", alpha, self.name)
        _check_positive("beta", beta, self.name)
        self.alpha = float(alpha)
        self.beta = float(beta)

    def _params(self):
        return {"alpha": self.alpha, "beta": self.beta}

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self):
        a, b = self.alpha, self.beta
        return a * b / ((a + b) ** 2 * (a + b + 1))

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y >= 0) & (y <= 1)
        yc = np.clip(y, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (special.xlogy(self.alpha - 1, yc) +
                   special.xlog1py(self.beta - 1, -yc) -
                   special.betaln(self.alpha, self.beta))
        return _as_output(np.where(inside, out, -np.inf), y)

    def cdf(self, y):
        return stats.beta.cdf(y, self.alpha, self.beta)

    def sample(self, random_state, size=None):
        return random_state.beta(self.alpha, self.beta, size=size)

    def quadrature(self, order=64):
        # Jacobi weight (1 - t)**(beta - 1) (1 + t)**(alpha - 1) on [-1, 1]
        nodes, weights = special.roots_jacobi(order, self.beta - 1, self.alpha - 1)
        return 0.5 * (nodes + 1), weights / weights.sum()


class Bernoulli(DistSpec):
    name = "Bernoulli"
    discrete = True

    def __init__(self, p):
        if not 0 <= p <= 1:
            raise ParameterDomainError(
                "Bernoulli requires 0 <= p <= 1, got {!r}.".format(p)
            )
        self.p = float(p)

    def _params(self):
        return {"p": self.p}

    @property
    def mean(self):
        return self.p

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        # exact 0 / -inf at the endpoints, never 0 * log 0
        log_p = np.log(self.p) if self.p > 0 else -np.inf
        log_q = np.log1p(-self.p) if self.p < 1 else -np.inf
        out = np.where(y == 1, log_p, np.where(y == 0, log_q, -np.inf))
        return _as_output(out, y)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y < 0, 0.0, np.where(y < 1, 1 - self.p, 1.0))

    def sample(self, random_state, size=None):
        draw = np.asarray(random_state.random(size) < self.p, dtype=float)
        return float(draw) if size is None else draw

    def support(self):
        return np.array([0.0, 1.0]), np.array([1 - self.p, self.p])


class Uniform(DistSpec):
    name = "Uniform"

    def __init__(self, lo, hi):
        if not lo < hi:
            raise ParameterDomainError(
                "Uniform requires lo < hi, got lo={!r}, hi={!r}.".format(lo, hi)
            )
        self.lo = float(lo)
        self.hi = float(hi)

    def _params(self):
        return {"lo": self.lo, "hi": self.hi}

    @property
    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y >= self.lo) & (y <= self.hi)
        return _as_output(np.where(inside, -np.log(self.hi - self.lo), -np.inf), y)

    def cdf(self, y):
        return np.clip((np.asarray(y, dtype=float) - self.lo) / (self.hi - self.lo), 0, 1)

    def sample(self, random_state, size=None):
        return random_state.uniform(self.lo, self.hi, size=size)

    def quadrature(self, order=64):
        nodes, weights = special.roots_legendre(order)
        half = 0.5 * (self.hi - self.lo)
        return self.lo + half * (nodes + 1), weights / weights.sum()


class Dirac(DistSpec):
    name = "Dirac"
    discrete = True

    def __init__(self, value):
        self.value = float(value)

    def _params(self):
        return {"value": self.value}

    @property
    def mean(self):
        return self.value

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        return _as_output(np.where(y == self.value, 0.0, -np.inf), y)

    def cdf(self, y):
        return np.where(np.asarray(y, dtype=float) < self.value, 0.0, 1.0)

    def sample(self, random_state, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)

    def support(self):
        return np.array([self.value]), np.array([1.0])


class PiecewiseUniform(DistSpec):
    """
    Density that is constant between consecutive breakpoints.

    Parameters
    ----------
    breakpoints: array-like
        Strictly increasing segment boundaries, one more than `masses`.

    masses: array-like
        Probability of each segment. Nonnegative, summing to one.

    levels: array-like, optional(default=None)
        Cumulative probabilities at the breakpoints. Derived from `masses`
        when omitted; passing them keeps quantile levels bit-exact.
    """
    name = "PiecewiseUniform"

    def __init__(self, breakpoints, masses, levels=None):
        breakpoints = np.asarray(breakpoints, dtype=float)
        masses = np.asarray(masses, dtype=float)
        if breakpoints.ndim != 1 or len(breakpoints) != len(masses) + 1:
            raise ParameterDomainError(
                "PiecewiseUniform needs one more breakpoint ({}) ".format(len(breakpoints)) +
                "than segment masses ({}).".format(len(masses))
            )
        if len(masses) == 0 or np.any(np.diff(breakpoints) <= 0):
            raise ParameterDomainError(
                "PiecewiseUniform breakpoints must be strictly increasing, "
                "got {}.".format(breakpoints.tolist())
            )
        if np.any(masses < 0) or abs(masses.sum() - 1) > 1e-12:
            raise ParameterDomainError(
                "PiecewiseUniform masses must be nonnegative and sum to 1, "
                "got {} (sum {!r}).".format(masses.tolist(), masses.sum())
            )
        if levels is None:
            levels = np.concatenate([[0.0], np.cumsum(masses)])
            levels[-1] = 1.0
        self.breakpoints = breakpoints
        self.masses = masses
        self.levels = np.asarray(levels, dtype=float)
        self._log_density = np.log(masses / np.diff(breakpoints), where=masses > 0,
                                   out=np.full(len(masses), -np.inf))

    def _params(self):
        return {"breakpoints": self.breakpoints.tolist(), "masses": self.masses.tolist()}

    @property
    def n_segments(self):
        return len(self.masses)

    @property
    def mean(self):
        mids = 0.5 * (self.breakpoints[1:] + self.breakpoints[:-1])
        return float(np.dot(self.masses, mids))

    def segment(self, y):
        """Index of the segment holding y; the top breakpoint closes the last one."""
        index = np.searchsorted(self.breakpoints, y, side="right") - 1
        return np.minimum(index, self.n_segments - 1)

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y >= self.breakpoints[0]) & (y <= self.breakpoints[-1])
        out = np.where(inside, self._log_density[np.clip(self.segment(y), 0, None)], -np.inf)
        return _as_output(out, y)

    def cdf(self, y):
        return np.interp(y, self.breakpoints, self.levels)

    def ppf(self, u):
        return np.interp(u, self.levels, self.breakpoints)

    def quantiles(self, levels):
        return self.ppf(np.asarray(levels, dtype=float))

    def sample(self, random_state, size=None):
        draw = self.ppf(random_state.random(size))
        return float(draw) if size is None else draw

    def quadrature(self, order=16):
        nodes, weights = special.roots_legendre(order)
        lo, hi = self.breakpoints[:-1, None], self.breakpoints[1:, None]
        points = lo + 0.5 * (hi - lo) * (nodes + 1)
        w = self.masses[:, None] * weights / weights.sum()
        keep = self.masses > 0
        return points[keep].ravel(), w[keep].ravel()


def log_pdf(spec, y):
    """Natural-log density (or mass) of `spec` at y, -inf outside the support."""
    return spec.log_pdf(y)


def sample(spec, random_state, size=None):
    """Draw from `spec` using the explicitly passed generator."""
    return spec.sample(random_state, size=size)


def piecewise_uniform_from_quantiles(qs):
    """
    Build the piecewise-uniform distribution interpolating a quantile table.

    Parameters
    ----------
    qs: sequence of (level, value)
        Quantile levels and values. Levels must start at 0 and end at 1, both
        columns strictly increasing.

    Returns
    -------
    PiecewiseUniform
        Breakpoints at the quantile values, segment masses equal to the
        differences between consecutive levels.
    """
    try:
        levels, values = map(np.asarray, zip(*qs))
        levels = levels.astype(float)
        values = values.astype(float)
    except (TypeError, ValueError):
        raise ConstructionError("Quantiles must be a sequence of (level, value) pairs.")
    if len(levels) < 2 or levels[0] != 0 or levels[-1] != 1:
        raise ConstructionError(
            "Quantile levels must start at 0 and end at 1, got {}.".format(levels.tolist())
        )
    if np.any(np.diff(levels) <= 0) or np.any(np.diff(values) <= 0):
        raise ConstructionError(
            "Quantile levels and values must be strictly increasing, "
            "got levels {} and values {}.".format(levels.tolist(), values.tolist())
        )
    masses = np.diff(levels)
    # rounding in np.diff can leave the sum a hair off one
    masses = masses / masses.sum()
    return PiecewiseUniform(values, masses, levels=levels)
