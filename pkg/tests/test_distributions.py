import pytest
import numpy as np
from scipy import stats

from stoch_cond.distributions import (
    Normal, LogNormal, Beta, Bernoulli, Uniform, Dirac, PiecewiseUniform,
    log_pdf, sample, piecewise_uniform_from_quantiles,
)
from stoch_cond.exceptions import ParameterDomainError, ConstructionError, UnsupportedExactError
from stoch_cond.util import ensure_rng


CONTINUOUS = [
    Normal(1.5, 2.0),
    LogNormal(0.3, 0.7),
    Beta(2.0, 5.0),
    Uniform(-1.0, 3.0),
    PiecewiseUniform([0.0, 1.0, 3.0, 10.0], [0.2, 0.5, 0.3]),
]


def test_normal_log_pdf():
    assert log_pdf(Normal(0, 1), 0.0) == pytest.approx(-0.918938533, abs=1e-9)
    ys = np.linspace(-3, 3, 7)
    assert np.allclose(Normal(0.5, 2).log_pdf(ys), stats.norm.logpdf(ys, 0.5, 2))


def test_reference_log_pdfs():
    ys = np.array([0.1, 0.5, 0.9])
    assert np.allclose(LogNormal(0.3, 0.7).log_pdf(ys), stats.lognorm.logpdf(ys, 0.7, scale=np.exp(0.3)))
    assert np.allclose(Beta(2, 5).log_pdf(ys), stats.beta.logpdf(ys, 2, 5))
    assert np.allclose(Uniform(0, 2).log_pdf(ys), np.log(0.5))


def test_outside_support():
    assert Bernoulli(0.3).log_pdf(2.0) == -np.inf
    assert Uniform(0, 1).log_pdf(1.5) == -np.inf
    assert LogNormal(0, 1).log_pdf(-1.0) == -np.inf
    assert Beta(2, 2).log_pdf(1.2) == -np.inf
    assert Dirac(3.0).log_pdf(2.0) == -np.inf
    assert Dirac(3.0).log_pdf(3.0) == 0.0


def test_bernoulli_endpoints_are_exact():
    assert Bernoulli(1.0).log_pdf(0.0) == -np.inf
    assert Bernoulli(1.0).log_pdf(1.0) == 0.0
    assert Bernoulli(0.0).log_pdf(0.0) == 0.0
    assert Bernoulli(0.0).log_pdf(1.0) == -np.inf
    assert Bernoulli(0.25).log_pdf(1.0) == pytest.approx(np.log(0.25))


def test_invalid_parameters():
    with pytest.raises(ParameterDomainError):
        Normal(0, -1)
    with pytest.raises(ParameterDomainError):
        Normal(0, 0)
    with pytest.raises(ParameterDomainError):
        Bernoulli(1.5)
    with pytest.raises(ParameterDomainError):
        Uniform(2, 1)
    with pytest.raises(ParameterDomainError):
        Beta(0, 1)
    with pytest.raises(ParameterDomainError):
        LogNormal(0, -0.1)
    with pytest.raises(ParameterDomainError):
        PiecewiseUniform([0, 1, 1], [0.5, 0.5])
    with pytest.raises(ParameterDomainError):
        PiecewiseUniform([0, 1, 2], [0.5, 0.6])
    # invalid parameters are a ValueError for callers
    with pytest.raises(ValueError):
        Normal(0, -1)


def test_sample_shapes_and_scalars():
    rs = ensure_rng(0)
    for spec in CONTINUOUS + [Bernoulli(0.4), Dirac(2.0)]:
        assert np.ndim(sample(spec, rs)) == 0
        draws = sample(spec, rs, size=10)
        assert draws.shape == (10,)
        assert np.all(np.isfinite(spec.log_pdf(draws)))


def test_samples_match_cdf():
    rs = ensure_rng(1)
    for spec in CONTINUOUS:
        draws = spec.sample(rs, size=5000)
        statistic, pvalue = stats.kstest(draws, spec.cdf)
        assert pvalue > 1e-3, spec


def test_bernoulli_sample_frequency():
    draws = Bernoulli(0.3).sample(ensure_rng(2), size=20000)
    assert set(np.unique(draws)) <= {0.0, 1.0}
    assert abs(draws.mean() - 0.3) < 4 * np.sqrt(0.3 * 0.7 / 20000)


def test_same_seed_same_draws():
    spec = Normal(0, 1)
    assert np.all(spec.sample(ensure_rng(5), size=4) == spec.sample(ensure_rng(5), size=4))


def test_quadrature_integrates_moments():
    for spec in CONTINUOUS:
        nodes, weights = spec.quadrature()
        assert weights.sum() == pytest.approx(1.0)
        assert np.dot(weights, nodes) == pytest.approx(spec.mean, rel=1e-6)

    nodes, weights = Normal(1.0, 2.0).quadrature()
    assert np.dot(weights, (nodes - 1.0) ** 2) == pytest.approx(4.0)
    nodes, weights = Beta(2.0, 5.0).quadrature()
    assert np.dot(weights, nodes ** 2) == pytest.approx(
        Beta(2.0, 5.0).variance + Beta(2.0, 5.0).mean ** 2)


def test_discrete_support():
    ys, ps = Bernoulli(0.3).support()
    assert list(ys) == [0.0, 1.0]
    assert np.allclose(ps, [0.7, 0.3])
    with pytest.raises(UnsupportedExactError):
        Normal(0, 1).support()


def test_lognormal_from_moments():
    spec = LogNormal.from_moments(19667.0, 142218.0 ** 2)
    assert spec.mean == pytest.approx(19667.0)
    assert spec.variance == pytest.approx(142218.0 ** 2)


def test_grad_log_pdf_params():
    h = 1e-6
    spec = Normal(0.4, 1.3)
    d_mean, d_sd = spec.grad_log_pdf_params(1.1)
    assert d_mean == pytest.approx(
        (Normal(0.4 + h, 1.3).log_pdf(1.1) - Normal(0.4 - h, 1.3).log_pdf(1.1)) / (2 * h), abs=1e-6)
    assert d_sd == pytest.approx(
        (Normal(0.4, 1.3 + h).log_pdf(1.1) - Normal(0.4, 1.3 - h).log_pdf(1.1)) / (2 * h), abs=1e-6)

    spec = LogNormal(0.2, 0.5)
    d_mu, d_sigma = spec.grad_log_pdf_params(2.0)
    assert d_mu == pytest.approx(
        (LogNormal(0.2 + h, 0.5).log_pdf(2.0) - LogNormal(0.2 - h, 0.5).log_pdf(2.0)) / (2 * h), abs=1e-6)
    assert d_sigma == pytest.approx(
        (LogNormal(0.2, 0.5 + h).log_pdf(2.0) - LogNormal(0.2, 0.5 - h).log_pdf(2.0)) / (2 * h), abs=1e-6)


def test_lognormal_gradient_vanishes_outside_support():
    spec = LogNormal(0.2, 0.5)
    assert spec.grad_log_pdf_params(0.0) == (0.0, 0.0)
    assert spec.grad_log_pdf_params(-3.0) == (0.0, 0.0)

    d_mu, d_sigma = spec.grad_log_pdf_params(np.array([-1.0, 0.0, 2.0]))
    assert np.all(np.isfinite(d_mu)) and np.all(np.isfinite(d_sigma))
    assert np.all(d_mu[:2] == 0) and np.all(d_sigma[:2] == 0)
    assert d_mu[2] == pytest.approx(spec.grad_log_pdf_params(2.0)[0])
    assert d_sigma[2] == pytest.approx(spec.grad_log_pdf_params(2.0)[1])


def test_equality_and_repr():
    assert Normal(0, 1) == Normal(0.0, 1.0)
    assert Normal(0, 1) != Normal(0, 2)
    assert Normal(0, 1) != Uniform(0, 1)
    assert repr(Normal(0, 1)) == "Normal(mean=0.0, sd=1.0)"
    assert len({Normal(0, 1), Normal(0.0, 1.0)}) == 1


def test_piecewise_uniform_from_quantiles():
    qs = [(0.0, 0.0), (0.25, 1.0), (0.5, 2.0), (1.0, 10.0)]
    spec = piecewise_uniform_from_quantiles(qs)
    assert np.allclose(spec.masses, [0.25, 0.25, 0.5])
    # quantiles are reproduced exactly at the input levels
    assert np.all(spec.quantiles([0.0, 0.25, 0.5, 1.0]) == np.array([0.0, 1.0, 2.0, 10.0]))
    assert spec.log_pdf(0.5) == pytest.approx(np.log(0.25))
    assert spec.log_pdf(5.0) == pytest.approx(np.log(0.5 / 8))
    assert spec.log_pdf(10.0) == pytest.approx(np.log(0.5 / 8))
    assert spec.log_pdf(11.0) == -np.inf
    assert spec.cdf(1.5) == pytest.approx(0.375)
    assert spec.ppf(0.375) == pytest.approx(1.5)


def test_piecewise_uniform_from_population_quantiles():
    values = (164, 308, 891, 2081, 6049, 25130, 1424815)
    levels = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)
    spec = piecewise_uniform_from_quantiles(list(zip(levels, values)))
    assert np.all(spec.quantiles(levels) == np.array(values, dtype=float))
    draws = spec.sample(ensure_rng(3), size=20000)
    assert draws.min() >= 164 and draws.max() <= 1424815
    assert abs(np.mean(draws < 2081) - 0.5) < 0.02


def test_piecewise_uniform_bad_quantiles():
    with pytest.raises(ConstructionError):
        piecewise_uniform_from_quantiles([(0.0, 1.0), (0.5, 1.0), (1.0, 2.0)])
    with pytest.raises(ConstructionError):
        piecewise_uniform_from_quantiles([(0.1, 1.0), (1.0, 2.0)])
    with pytest.raises(ConstructionError):
        piecewise_uniform_from_quantiles([(0.0, 1.0), (0.7, 3.0), (0.5, 4.0), (1.0, 5.0)])
    with pytest.raises(ConstructionError):
        piecewise_uniform_from_quantiles([(0.0, 1.0)])
    with pytest.raises(ConstructionError):
        piecewise_uniform_from_quantiles([1, 2, 3])


if __name__ == '__main__':
    r"""
    CommandLine:
        python tests/test_distributions.py
    """
    pytest.main([__file__])
