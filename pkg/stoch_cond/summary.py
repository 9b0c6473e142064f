"""
Posterior summaries: moments, quantiles and effective sample sizes of a set
of (possibly weighted) draws. MCMC diagnostics come from arviz; importance
samples are summarized from their weights.
"""
import arviz as az
import numpy as np

QUANTILE_LEVELS = (0.025, 0.25, 0.5, 0.75, 0.975)


def constrained_draws(space, samples):
    """Constrained parameter values of the samples, shape (n, dim), and their weights."""
    values = np.array([space.constrain(s.x) for s in samples]).reshape(len(samples), space.dim)
    weights = np.array([s.weight for s in samples], dtype=float)
    return values, weights


def weighted_quantiles(values, weights, levels=QUANTILE_LEVELS):
    """
    Quantiles of a weighted sample: the weighted empirical CDF is placed at
    the midpoints of the cumulative weights and interpolated linearly. With
    equal weights this is numpy's 'hazen' rule.
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    order = np.argsort(values, kind="mergesort")
    values, weights = values[order], weights[order]
    cumulative = (np.cumsum(weights) - 0.5 * weights) / weights.sum()
    return np.interp(levels, cumulative, values)


def chain_ess(chains):
    """
    Bulk effective sample size of one chain, or of several stacked as
    (chains, draws), from arviz. Constant or very short chains count every
    draw.
    """
    chains = np.atleast_2d(np.asarray(chains, dtype=float))
    if chains.shape[1] < 4 or np.ptp(chains) == 0:
        return float(chains.size)
    ess = float(az.ess(chains, method="bulk"))
    return ess if np.isfinite(ess) else float(chains.size)


def kish_ess(weights):
    weights = np.asarray(weights, dtype=float)
    return float(weights.sum() ** 2 / np.sum(weights ** 2))


def geweke_z(chain, first=0.1, last=0.5):
    """
    Difference between the means of the first and last stretches of a
    chain, in units of its standard error (from the arviz ESS of each
    stretch).
    """
    chain = np.asarray(chain, dtype=float)
    n = len(chain)
    a = chain[:max(int(first * n), 2)]
    b = chain[n - max(int(last * n), 2):]
    se2 = np.var(a, ddof=1) / chain_ess(a) + np.var(b, ddof=1) / chain_ess(b)
    if se2 == 0:
        return 0.0
    return float((a.mean() - b.mean()) / np.sqrt(se2))


def _mcmc_table(keys, values, chains):
    n = len(values)
    if n % chains:
        raise ValueError("{} draws do not split into {} equal chains.".format(n, chains))
    stacked = values.reshape(chains, n // chains, len(keys))
    posterior = {key: stacked[:, :, j] for j, key in enumerate(keys)}
    return az.summary(posterior, kind="all", round_to="none")


def summarize(keys, values, weights=None, mcmc=True, chains=1):
    """
    Per-parameter summary.

    Parameters
    ----------
    keys: list of str
        Parameter names, one per column of `values`.

    values: ndarray
        Draws of shape (n, len(keys)); with several chains, chain after
        chain in equal blocks.

    weights: ndarray, optional(default=None)
        Importance weights; equal weights when None.

    mcmc: bool, optional(default=True)
        Summarize the draws as MCMC chains with arviz (mean, sd, bulk and
        tail ESS, Monte Carlo standard error, R-hat) or as importance
        samples (weighted moments, Kish ESS).

    chains: int, optional(default=1)
        Number of chains stacked in `values` when `mcmc` is set.

    Returns
    -------
    dict
        name -> {"mean", "sd", "q2.5", "q25", "q50", "q75", "q97.5", "ess"},
        plus "ess_tail", "mcse_mean" and "r_hat" for MCMC draws.
    """
    values = np.asarray(values, dtype=float).reshape(-1, len(keys))
    if weights is None:
        weights = np.ones(len(values))
    weights = np.asarray(weights, dtype=float)
    w = weights / weights.sum()
    table = _mcmc_table(keys, values, chains) if mcmc else None

    out = {}
    for j, key in enumerate(keys):
        column = values[:, j]
        if mcmc:
            row = table.loc[key]
            entry = {"mean": float(row["mean"]), "sd": float(row["sd"])}
        else:
            mean = float(np.dot(w, column))
            entry = {"mean": mean, "sd": float(np.sqrt(np.dot(w, (column - mean) ** 2)))}
        for level, q in zip(QUANTILE_LEVELS, weighted_quantiles(column, weights)):
            entry["q{:g}".format(100 * level)] = float(q)
        if mcmc:
            entry["ess"] = chain_ess(column.reshape(chains, -1))
            entry["ess_tail"] = float(row["ess_tail"])
            entry["mcse_mean"] = float(row["mcse_mean"])
            entry["r_hat"] = float(row["r_hat"])
        else:
            entry["ess"] = kish_ess(weights)
        out[key] = entry
    return out
