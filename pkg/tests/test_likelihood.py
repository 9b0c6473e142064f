import pytest
import numpy as np

from stoch_cond.case_studies.commute import CommuteModel
from stoch_cond.case_studies.conjugate import BetaBernoulli, NormalMean, TabularModel
from stoch_cond.distributions import Bernoulli, Normal
from stoch_cond.exceptions import UnsupportedExactError
from stoch_cond.likelihood import (
    exact_stochastic_loglik, alternative_loglik_p1, power_mean_loglik, kl_divergence,
    kl_argmax_check, normalization_probe,
)
from stoch_cond.observed import DiracObs, Empirical, Parametric, Simulator
from stoch_cond.util import ensure_rng

LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)


def counterexample():
    """Row 0 reproduces q exactly, row 1 puts all mass on the most likely atom."""
    q = np.array([0.5, 0.3, 0.2])
    model = TabularModel([q, [1.0, 0.0, 0.0]])
    D = Empirical([0.0] * 5 + [1.0] * 3 + [2.0] * 2)
    return model, D


def test_exact_loglik_of_empirical():
    model = NormalMean(noise_sd=1.0)
    D = Empirical([0.0, 1.0, 3.0], count=2)
    x = np.array([0.5])
    expected = 2 * np.mean([Normal(0.5, 1).log_pdf(y) for y in (0.0, 1.0, 3.0)])
    assert exact_stochastic_loglik(model, x, D) == pytest.approx(expected)


def test_exact_loglik_by_quadrature():
    model = NormalMean(noise_sd=1.0)
    x = np.array([0.3])
    D = Parametric(Normal(1.2, 0.5))
    expected = -0.5 * ((1.2 - 0.3) ** 2 + 0.25) - LOG_SQRT_2PI
    assert exact_stochastic_loglik(model, x, D) == pytest.approx(expected, rel=1e-10)


def test_exact_loglik_bernoulli_average():
    model = BetaBernoulli()
    x = model.space.unconstrain({"x": 0.7})
    expected = 0.6 * np.log(0.7) + 0.4 * np.log(0.3)
    assert exact_stochastic_loglik(model, x, Parametric(Bernoulli(0.6))) == pytest.approx(expected)
    # Bernoulli(1) has a zero-mass atom at 0, never evaluated
    assert exact_stochastic_loglik(model, x, Parametric(Bernoulli(1.0))) == pytest.approx(np.log(0.7))


def test_zero_density_atom_gives_minus_inf():
    model, D = counterexample()
    assert exact_stochastic_loglik(model, [1.0], D) == -np.inf
    assert np.isfinite(exact_stochastic_loglik(model, [0.0], D))


def test_exact_needs_a_support():
    D = Simulator(lambda rs, size: rs.normal(size=size))
    with pytest.raises(UnsupportedExactError):
        exact_stochastic_loglik(NormalMean(), [0.0], D)


def test_dirac_reduces_to_deterministic_conditioning():
    rs = ensure_rng(11)
    models = [NormalMean(0.0, 2.0, 0.7), BetaBernoulli(2.0, 3.0), CommuteModel("deterministic")]
    for i in range(1000):
        model = models[i % len(models)]
        x = rs.uniform(-2, 2, size=model.dim)
        if isinstance(model, NormalMean):
            y0 = rs.normal(0, 3)
        elif isinstance(model, BetaBernoulli):
            y0 = float(rs.integers(2))
        else:
            y0 = np.array([float(rs.integers(2)), rs.uniform(5, 80)])
        assert exact_stochastic_loglik(model, x, DiracObs(y0)) == model.log_cond(x, y0)


def test_dirac_count_multiplies():
    model = NormalMean()
    x = np.array([0.2])
    assert exact_stochastic_loglik(model, x, DiracObs(1.5, count=4)) == pytest.approx(
        4 * model.log_cond(x, 1.5))


def test_power_mean_endpoints():
    model = NormalMean(noise_sd=1.5)
    D = Empirical([-1.0, 0.5, 2.0, 2.5])
    x = np.array([0.4])
    assert power_mean_loglik(model, x, D, 0) == exact_stochastic_loglik(model, x, D)
    assert power_mean_loglik(model, x, D, 1) == pytest.approx(alternative_loglik_p1(model, x, D))
    assert power_mean_loglik(model, x, D, 1e-7) == pytest.approx(
        exact_stochastic_loglik(model, x, D), abs=1e-5)
    # power means increase with alpha
    values = [power_mean_loglik(model, x, D, a) for a in (0, 0.25, 0.5, 1.0)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_p1_counterexample():
    model, D = counterexample()
    assert np.exp(alternative_loglik_p1(model, [1.0], D)) == pytest.approx(0.5)
    assert np.exp(alternative_loglik_p1(model, [0.0], D)) == pytest.approx(0.38)
    assert alternative_loglik_p1(model, [1.0], D) > alternative_loglik_p1(model, [0.0], D)
    assert exact_stochastic_loglik(model, [0.0], D) > exact_stochastic_loglik(model, [1.0], D)

    assert kl_argmax_check(model, model.grid(), D) == (0, 0)
    argmax, argmin = kl_argmax_check(model, model.grid(), D, loglik=alternative_loglik_p1)
    assert (argmax, argmin) == (1, 0)


def test_kl_divergence():
    model, D = counterexample()
    assert kl_divergence(model, [0.0], D) == pytest.approx(0.0, abs=1e-12)
    assert kl_divergence(model, [1.0], D) == np.inf


def test_likelihood_maximizer_minimizes_kl():
    rs = ensure_rng(3)
    for _ in range(100):
        k = int(rs.integers(2, 6))
        rows = int(rs.integers(2, 6))
        model = TabularModel(rs.dirichlet(np.ones(k), size=rows))
        D = Empirical(rs.integers(0, k, size=20).astype(float), count=int(rs.integers(1, 4)))
        argmax, argmin = kl_argmax_check(model, model.grid(), D)
        assert argmax == argmin


def test_kl_argmax_check_accepts_constrained_grid():
    model, D = counterexample()
    assert kl_argmax_check(model, [{"index": 1.0}, {"index": 0.0}], D) == (1, 1)
    with pytest.raises(ValueError):
        kl_argmax_check(model, [], D)


def test_normalization_plateaus_for_fixed_variance_family():
    model = NormalMean(noise_sd=1.0)
    x = np.array([0.3])
    grid = np.linspace(0.3 - 20, 0.3 + 20, 401)
    running = normalization_probe(model, x, lambda theta: Normal(theta, 1.0), grid)
    assert np.all(np.diff(running) >= -1e-12)
    assert abs(running[-1] - running[-50]) < 1e-3
    # integral of exp(-(theta - x)**2 / 2 - 1/2) / sqrt(2 pi)
    assert running[-1] == pytest.approx(np.exp(-0.5), abs=1e-3)


def test_normalization_grows_for_free_variance_family():
    model = NormalMean(noise_sd=1.0)
    x = np.array([0.0])
    thetas = np.linspace(-8, 8, 81)

    def family(theta, log_sd):
        return Normal(theta, np.exp(log_sd))

    totals = []
    for decades in (1, 3, 5):
        log_sds = np.linspace(-decades * np.log(10), decades * np.log(10), 81)
        running = normalization_probe(model, x, family, (thetas, log_sds))
        # no plateau: every late window still adds a visible amount
        assert np.all(np.diff(running)[-10:] > 1e-2)
        totals.append(running[-1])
    assert totals[0] < totals[1] < totals[2]
    assert totals[2] - totals[1] > 3.0


if __name__ == '__main__':
    r"""
    CommandLine:
        python tests/test_likelihood.py
    """
    pytest.main([__file__])
