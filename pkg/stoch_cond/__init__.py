from .distributions import (
    Normal, LogNormal, Beta, Bernoulli, Uniform, Dirac, PiecewiseUniform,
    piecewise_uniform_from_quantiles,
)
from .param_space import ParamSpace
from .model import Model
from .observed import Empirical, ProductEmpirical, Parametric, Simulator, DiracObs
from .likelihood import exact_stochastic_loglik, kl_divergence, normalization_probe
from .estimators import estimate_loglik, estimate_grad_loglik, log_bias_adjusted_lik
from .inference import (
    ImportanceSampler, PseudoMarginalMH, SGHMC, BBVI,
    importance_sampling, pmmh, sghmc, bbvi,
)
from .event import Events
from .logger import ScreenLogger, JSONLogger

__all__ = [
    "Normal",
    "LogNormal",
    "Beta",
    "Bernoulli",
    "Uniform",
    "Dirac",
    "PiecewiseUniform",
    "piecewise_uniform_from_quantiles",
    "ParamSpace",
    "Model",
    "Empirical",
    "ProductEmpirical",
    "Parametric",
    "Simulator",
    "DiracObs",
    "exact_stochastic_loglik",
    "kl_divergence",
    "normalization_probe",
    "estimate_loglik",
    "estimate_grad_loglik",
    "log_bias_adjusted_lik",
    "ImportanceSampler",
    "PseudoMarginalMH",
    "SGHMC",
    "BBVI",
    "importance_sampling",
    "pmmh",
    "sghmc",
    "bbvi",
    "Events",
    "ScreenLogger",
    "JSONLogger",
]
