"""
Errors raised by stoch_cond. Each one subclasses the builtin a caller would
already be catching, so `except ValueError` keeps working around parameter
and construction problems.
"""


class ParameterDomainError(ValueError):
    """A distribution or model parameter lies outside its domain."""


class ConstructionError(ValueError):
    """An object could not be built from the given inputs."""


class UnsupportedExactError(NotImplementedError):
    """The exact likelihood is not available for this observed distribution."""


class InsufficientSamplesError(ValueError):
    """Too few Monte Carlo draws for the requested estimate."""


class DegenerateProposalError(RuntimeError):
    """Every importance weight vanished."""


class DivergenceError(RuntimeError):
    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = "{} (iteration {})".format(message, iteration)
        super(DivergenceError, self).__init__(message)
        self.iteration = iteration


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of sweeps."""


class RolloutCapError(RuntimeError):
    def __init__(self, position, steps, cost):
        super(RolloutCapError, self).__init__(
            "Rollout stopped at {} after {} steps ".format(tuple(position), steps) +
            "without reaching the goal (cost so far {:.4g}).".format(cost)
        )
        self.position = tuple(position)
        self.steps = steps
        self.cost = cost


class ConfigError(ValueError):
    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super(ConfigError, self).__init__("; ".join(self.violations))
