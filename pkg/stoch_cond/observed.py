"""
Observed distributions D: the objects a model is stochastically conditioned
on. Each one can be sampled, and those with a finite support (or a
quadrature rule) can also be enumerated as weighted atoms for exact
evaluation.

Observations are floats or 1-d float arrays. `count` is how many times the
distribution is observed, i.e. conditioning on y_1, ..., y_count ~ D.
"""
import numpy as np
from scipy.special import xlogy

from .distributions import DistSpec
from .exceptions import ConstructionError, UnsupportedExactError

DEFAULT_CHUNK = 2 ** 16


def _check_count(count):
    if int(count) != count or count < 1:
        raise ConstructionError("count must be a positive integer, got {!r}.".format(count))
    return int(count)


def _entropy_of_atoms(ys, weights):
    """Entropy of a weighted atom list, merging repeated atoms."""
    ys = np.asarray(ys, dtype=float).reshape(len(weights), -1)
    _, inverse = np.unique(ys, axis=0, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=weights)
    return float(-xlogy(merged, merged).sum())


class ObservedDistribution(object):
    samplable = True
    exact = False

    def __init__(self, count=1):
        self.count = _check_count(count)

    def sample(self, random_state, size=None):
        raise NotImplementedError

    def support(self):
        """Atoms and weights of a finite support, materialized."""
        raise UnsupportedExactError(
            "{} has no finite support; use a Monte Carlo estimate.".format(
                type(self).__name__)
        )

    def iter_support(self, chunk_size=DEFAULT_CHUNK):
        """Atoms and weights in chunks, for supports too large to hold at once."""
        yield self.support()

    def entropy(self):
        ys, weights = self.support()
        return _entropy_of_atoms(ys, weights)


class Empirical(ObservedDistribution):
    """
    Uniform distribution over a stored sample set.

    Parameters
    ----------
    samples: array-like
        Shape (K,) for scalar observations or (K, d) for vectors.
    """
    exact = True

    def __init__(self, samples, count=1):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 0 or len(samples) == 0:
            raise ConstructionError("Empirical sample set must be nonempty.")
        super(Empirical, self).__init__(count)
        self.samples = samples

    def __len__(self):
        return len(self.samples)

    def sample(self, random_state, size=None):
        index = random_state.integers(len(self.samples), size=size)
        return self.samples[index]

    def subsample(self, n, random_state):
        """n stored observations drawn without replacement."""
        if n > len(self.samples):
            raise ValueError(
                "Cannot subsample {} of {} stored observations.".format(n, len(self.samples))
            )
        index = random_state.choice(len(self.samples), size=n, replace=False)
        return self.samples[index]

    def support(self):
        k = len(self.samples)
        return self.samples, np.full(k, 1.0 / k)


class ProductEmpirical(ObservedDistribution):
    """
    Product of independent empirical marginals. An atom concatenates one
    stored observation from every component, so its support is the Cartesian
    product of the components; it is enumerated chunk by chunk and never
    materialized whole.

    Parameters
    ----------
    components: list of array-like
        Each of shape (K_i,) or (K_i, d_i).
    """
    exact = True

    def __init__(self, components, count=1):
        self.components = []
        for i, component in enumerate(components):
            component = np.asarray(component, dtype=float)
            if component.ndim == 0 or len(component) == 0:
                raise ConstructionError(
                    "ProductEmpirical component {} must be nonempty.".format(i)
                )
            self.components.append(component.reshape(len(component), -1))
        if not self.components:
            raise ConstructionError("ProductEmpirical needs at least one component.")
        super(ProductEmpirical, self).__init__(count)

    @property
    def shape(self):
        return tuple(len(c) for c in self.components)

    @property
    def size(self):
        return int(np.prod(self.shape, dtype=np.int64))

    def _atoms(self, indices):
        return np.hstack([c[i] for c, i in zip(self.components, indices)])

    def sample(self, random_state, size=None):
        n = 1 if size is None else size
        indices = [random_state.integers(len(c), size=n) for c in self.components]
        atoms = self._atoms(indices)
        return atoms[0] if size is None else atoms

    def iter_support(self, chunk_size=DEFAULT_CHUNK):
        weight = 1.0 / self.size
        for start in range(0, self.size, chunk_size):
            flat = np.arange(start, min(start + chunk_size, self.size))
            indices = np.unravel_index(flat, self.shape)
            yield self._atoms(indices), np.full(len(flat), weight)

    def support(self):
        return next(self.iter_support(chunk_size=self.size))

    def entropy(self):
        return sum(
            _entropy_of_atoms(c, np.full(len(c), 1.0 / len(c))) for c in self.components
        )


class Parametric(ObservedDistribution):
    """
    A distribution given in closed form. Discrete families enumerate their
    atoms; continuous ones are integrated with a Gauss rule of `order` nodes
    when the family has one.
    """
    def __init__(self, spec, count=1, order=64):
        if not isinstance(spec, DistSpec):
            raise ConstructionError("Parametric needs a DistSpec, got {!r}.".format(spec))
        super(Parametric, self).__init__(count)
        self.spec = spec
        self.order = order

    @property
    def exact(self):
        try:
            self.support()
        except UnsupportedExactError:
            return False
        return True

    def sample(self, random_state, size=None):
        return self.spec.sample(random_state, size=size)

    def support(self):
        if self.spec.discrete:
            return self.spec.support()
        return self.spec.quadrature(self.order)

    def entropy(self):
        if self.spec.discrete:
            return super(Parametric, self).entropy()
        nodes, weights = self.spec.quadrature(self.order)
        return float(-np.dot(weights, self.spec.log_pdf(nodes)))


class Simulator(ObservedDistribution):
    """
    A black-box source of samples.

    Parameters
    ----------
    sample_fn: callable
        sample_fn(random_state, size) returns `size` observations.
    """
    def __init__(self, sample_fn, count=1):
        super(Simulator, self).__init__(count)
        self.sample_fn = sample_fn

    def sample(self, random_state, size=None):
        if size is None:
            return self.sample_fn(random_state, 1)[0]
        return np.asarray(self.sample_fn(random_state, size), dtype=float)


class DiracObs(ObservedDistribution):
    """Conditioning on a single observed value."""
    exact = True

    def __init__(self, value, count=1):
        super(DiracObs, self).__init__(count)
        self.value = np.asarray(value, dtype=float) if np.ndim(value) else float(value)

    def sample(self, random_state, size=None):
        if size is None:
            return self.value
        return np.repeat(np.asarray(self.value)[None, ...], size, axis=0)

    def support(self):
        return np.asarray(self.value)[None, ...], np.array([1.0])

    def entropy(self):
        return 0.0


def as_observed(D):
    """Wrap a bare DistSpec as a Parametric observed distribution."""
    if isinstance(D, DistSpec):
        return Parametric(D)
    return D
