"""
Command-line experiment runner.

    stoch-cond run --study conjugate-check --algorithm pmmh --seed 1
    stoch-cond run --config experiments/nypopu.cfg --sample 2
    stoch-cond validate --config experiments/nypopu.cfg
    stoch-cond golden regenerate --out tests/data/golden

`run` writes the posterior draws (draws.csv, or draws.json as JSON lines
with --format json) and summary.json to --out, $STOCH_COND_OUT or the
working directory. Exit status is 0 on success, 2 for configuration errors
and 1 when inference fails.
"""
from __future__ import print_function
import argparse
import json
import os
import sys

import numpy as np
import pandas as pd

from .case_studies.commute import (
    CommuteModel, commute_observed, load_commute_csv, save_commute_csv, simulate_commute,
)
from .case_studies.conjugate import BetaBernoulli
from .case_studies.nypopu import (
    TRUE_TOTAL, nypopu_model, posterior_predictive_total, predictive_interval, published_summary,
)
from .case_studies.sailing import (
    GreedyPolicy, SailingModel, WindHistory, compare_policies, rollout, start_value, travel_cost,
    value_iteration, wind_histories,
)
from .config import OUT_ENV, ExperimentConfig, check, load_config, make_config, validate
from .distributions import Bernoulli, LogNormal, Uniform
from .exceptions import ConfigError, RolloutCapError
from .inference import (
    AdaptiveStepSchedule, BBVI, GaussianRandomWalk, ImportanceSampler, PseudoMarginalMH, SGHMC,
)
from .observed import Parametric
from .summary import constrained_draws, geweke_z, summarize
from .util import split_rng

# streams split off the run seed next to the chain streams 0, 1, ...
DATA_STREAM = 2 ** 31
PREDICTIVE_STREAM = 2 ** 31 + 1
EVALUATION_STREAM = 2 ** 31 + 2

COMMUTE_TRUTH = {"p_r": 0.2, "p_t": 0.8, "p_f": 0.1}


class Problem(object):
    """A model, what it is conditioned on, and an importance proposal."""
    def __init__(self, model, D, proposal, extra=None):
        self.model = model
        self.D = D
        self.proposal = proposal
        self.extra = extra or {}


def build_problem(config):
    if config.study == "conjugate-check":
        model = BetaBernoulli(1.0, 1.0)
        posterior = model.posterior(config.theta)
        extra = {"exact_posterior": {"mean": float(posterior.mean),
                                     "sd": float(np.sqrt(posterior.variance))}}
        return Problem(model, Parametric(Bernoulli(config.theta)), {"x": Uniform(0, 1)}, extra)

    if config.study == "commute":
        if config.data is not None:
            data = load_commute_csv(config.data)
        else:
            data = simulate_commute(config.days, with_intensity=config.variant == "intensity",
                                    random_state=split_rng(config.seed, DATA_STREAM),
                                    **COMMUTE_TRUTH)
        uniform = Uniform(0, 1)
        return Problem(CommuteModel(config.variant), commute_observed(config.variant, data),
                       {"p_f": uniform, "p_r": uniform, "p_t": uniform},
                       {"days": len(data), "rain_frequency": data.rain_frequency})

    if config.study == "nypopu":
        summary, quantiles = published_summary(config.sample)
        model = nypopu_model(summary, quantiles)
        proposal = {"m": LogNormal(np.log(summary["mean"]), 0.5),
                    "s2": LogNormal(2 * np.log(summary["sd"]), 1.0)}
        return Problem(model, model.observed, proposal)

    if config.study == "sailing":
        model = SailingModel(config.lake_size, config.temperature)
        return Problem(model, wind_histories(), {"unit_cost": Uniform(*model.unit_cost_range)})

    raise ConfigError("study must be one of conjugate-check, commute, nypopu, sailing, "
                      "got {!r}".format(config.study))


def make_sampler(config, problem, random_state):
    common = dict(random_state=random_state, verbose=config.verbose)
    if config.algorithm == "is":
        return ImportanceSampler(problem.model, problem.D, problem.proposal,
                                 particles=config.particles, N=config.N, exact=config.exact,
                                 **common)
    if config.algorithm == "pmmh":
        return PseudoMarginalMH(problem.model, problem.D, draws=config.draws,
                                burn_in=config.burn_in, N=config.N,
                                kernel=GaussianRandomWalk(config.proposal_scale),
                                exact=config.exact, **common)
    if config.algorithm == "sghmc":
        return SGHMC(problem.model, problem.D, draws=config.draws, step_size=config.step_size,
                     friction=config.friction, leapfrog_steps=config.leapfrog_steps,
                     burn_in=config.burn_in, batch=config.batch, **common)
    if config.algorithm == "bbvi":
        return BBVI(problem.model, problem.D, iterations=config.iterations, batch=config.batch,
                    schedule=AdaptiveStepSchedule(eta=config.learning_rate), **common)
    raise ConfigError("algorithm must be one of is, pmmh, sghmc, bbvi, "
                      "got {!r}".format(config.algorithm))


def run_chain(config, problem, random_state):
    """Samples of one chain and the algorithm's own diagnostics."""
    sampler = make_sampler(config, problem, random_state)
    samples = sampler.run()
    info = {}
    if config.algorithm == "bbvi":
        q = sampler.averaged()
        samples = sampler.draws(config.draws, q)
        info["variational_mean"] = q.mean.tolist()
        info["variational_sd"] = q.sd.tolist()
    elif config.algorithm == "pmmh":
        info["acceptance_rate"] = sampler.acceptance_rate
        info["proposal_scale"] = sampler.kernel.scale
    elif config.algorithm == "is":
        info["effective_sample_size"] = sampler.effective_sample_size
    if config.algorithm in ("pmmh", "sghmc"):
        space = problem.model.space
        values, _ = constrained_draws(space, samples)
        info["geweke_z"] = {key: geweke_z(values[:, j]) for j, key in enumerate(space.keys)}
    return samples, info


def draws_frame(space, samples, chain=None):
    values, weights = constrained_draws(space, samples)
    frame = pd.DataFrame(values, columns=space.keys)
    frame.insert(0, "weight", weights)
    frame.insert(0, "iteration", [s.iteration for s in samples])
    if chain is not None:
        frame.insert(0, "chain", chain)
    return frame


def _summary(config, problem, frame, infos, samples):
    keys = problem.model.space.keys
    mcmc = config.algorithm in ("pmmh", "sghmc")
    parameters = summarize(keys, frame[keys].to_numpy(), frame["weight"].to_numpy(), mcmc=mcmc,
                           chains=config.chains if mcmc else 1)

    summary = {
        "study": config.study,
        "algorithm": config.algorithm,
        "seed": config.seed,
        "chains": config.chains,
        "draws": int(len(frame)),
        "parameters": parameters,
    }
    if config.study == "commute":
        summary["variant"] = config.variant
    if config.algorithm == "pmmh":
        summary["acceptance_rate"] = float(np.mean([i["acceptance_rate"] for i in infos]))
    summary["chain_diagnostics"] = infos
    summary.update(problem.extra)

    if config.study == "nypopu":
        totals = posterior_predictive_total(samples, reps=config.reps,
                                            random_state=split_rng(config.seed, PREDICTIVE_STREAM))
        lo, hi = predictive_interval(totals)
        summary["predictive_total"] = {
            "sample": config.sample,
            "median": float(np.median(totals)),
            "q2.5": lo,
            "q97.5": hi,
            "true_total": TRUE_TOTAL,
            "contains_true_total": bool(lo <= TRUE_TOTAL <= hi),
        }

    if config.study == "sailing":
        summary["policy_evaluation"] = compare_policies(
            frame["unit_cost"].to_numpy(), config.lake_size, config.episodes,
            random_state=split_rng(config.seed, EVALUATION_STREAM),
            weights=frame["weight"].to_numpy(),
        )
    return summary


def write_draws(frame, path, fmt):
    if fmt == "json":
        frame.to_json(path, orient="records", lines=True, double_precision=15)
    else:
        frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")


def run(config):
    """
    Run one experiment and write its artifacts.

    Returns
    -------
    dict
        The summary, also written to summary.json.
    """
    check(config)
    problem = build_problem(config)
    frames, infos, samples = [], [], []
    for chain in range(config.chains):
        chain_samples, info = run_chain(config, problem, split_rng(config.seed, chain))
        frames.append(draws_frame(problem.model.space, chain_samples,
                                  chain if config.chains > 1 else None))
        infos.append(info)
        samples.extend(chain_samples)
    frame = pd.concat(frames, ignore_index=True)
    summary = _summary(config, problem, frame, infos, samples)

    out = config.out_dir
    os.makedirs(out, exist_ok=True)
    write_draws(frame, os.path.join(out, "draws." + config.format), config.format)
    with open(os.path.join(out, "summary.json"), "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
    return summary


GOLDEN_LAKE_SIZES = (25, 50, 100)


def _write_csv(frame, path):
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")


def regenerate_golden(out, seed=1, days=30, lake_sizes=GOLDEN_LAKE_SIZES, episodes=100,
                      unit_cost=3.5):
    """
    Rewrite the golden data files:

    commute.csv
        day, rain, duration, intensity of `days` simulated days.
    sailing_<L>.csv, one per lake size
        episode, wind_seed, greedy_cost, parametric_cost (empty when the
        parametric policy hits the step cap).
    sailing_optimum.csv
        lake_size, optimal_cost: the value-iteration cost from corner A.

    Each lake draws its wind seeds from stream `L` of `seed`, the commute
    days from stream 0.

    Returns
    -------
    list of str
        The paths written.
    """
    os.makedirs(out, exist_ok=True)
    commute_path = os.path.join(out, "commute.csv")
    data = simulate_commute(days, with_intensity=True, random_state=split_rng(seed, 0),
                            **COMMUTE_TRUTH)
    save_commute_csv(data, commute_path)
    paths = [commute_path]

    optimum = []
    for lake_size in lake_sizes:
        random_state = split_rng(seed, lake_size)
        rows = []
        for episode in range(1, episodes + 1):
            wind_seed = int(random_state.integers(0, 2 ** 53))
            greedy = rollout(GreedyPolicy(), lake_size, WindHistory(wind_seed))
            try:
                parametric = travel_cost(WindHistory(wind_seed), unit_cost, lake_size)
            except RolloutCapError:
                parametric = np.nan
            rows.append({"episode": episode, "wind_seed": wind_seed,
                         "greedy_cost": greedy, "parametric_cost": parametric})
        path = os.path.join(out, "sailing_{}.csv".format(lake_size))
        _write_csv(pd.DataFrame(rows), path)
        paths.append(path)
        V, _ = value_iteration(lake_size)
        optimum.append({"lake_size": lake_size, "optimal_cost": start_value(V)})

    optimum_path = os.path.join(out, "sailing_optimum.csv")
    _write_csv(pd.DataFrame(optimum), optimum_path)
    paths.append(optimum_path)
    return paths


def _experiment_options():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--study", help="conjugate-check, commute, nypopu or sailing")
    parser.add_argument("--variant", help="commute variant")
    parser.add_argument("--algorithm", help="is, pmmh, sghmc or bbvi")
    parser.add_argument("--draws", type=int)
    parser.add_argument("--burn-in", type=int, dest="burn_in")
    parser.add_argument("--N", type=int, dest="N", help="draws from D per likelihood estimate")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--chains", type=int,
                        help="independent chains; they run one after another, chain k on "
                             "stream k split from --seed")
    parser.add_argument("--exact", action="store_const", const=True, default=None,
                        help="use the exact likelihood (is and pmmh)")
    parser.add_argument("--step-size", type=float, dest="step_size")
    parser.add_argument("--friction", type=float)
    parser.add_argument("--leapfrog-steps", type=int, dest="leapfrog_steps")
    parser.add_argument("--proposal-scale", type=float, dest="proposal_scale")
    parser.add_argument("--particles", type=int)
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--batch", type=int)
    parser.add_argument("--learning-rate", type=float, dest="learning_rate")
    parser.add_argument("--theta", type=float, help="conjugate-check observed Bernoulli rate")
    parser.add_argument("--days", type=int, help="commute: simulated days")
    parser.add_argument("--data", help="commute: CSV with day, rain, duration, intensity")
    parser.add_argument("--sample", type=int, help="nypopu: published sample 1 or 2")
    parser.add_argument("--reps", type=int, help="nypopu: predictive repetitions")
    parser.add_argument("--lake-size", type=int, dest="lake_size")
    parser.add_argument("--temperature", type=float)
    parser.add_argument("--episodes", type=int, help="sailing: crossings per evaluated policy")
    parser.add_argument("--out", help="output directory (default $STOCH_COND_OUT or .)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--verbose", type=int)
    return parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stoch-cond",
        description="Inference with stochastic conditioning: run the case studies.",
    )
    commands = parser.add_subparsers(dest="command")
    commands.required = True
    options = _experiment_options()
    commands.add_parser("run", parents=[options], help="run an experiment")
    commands.add_parser("validate", parents=[options], help="check a config without running")

    golden = commands.add_parser("golden", help="golden data files")
    golden_commands = golden.add_subparsers(dest="golden_command")
    golden_commands.required = True
    regenerate = golden_commands.add_parser("regenerate", help="rewrite the golden data files")
    regenerate.add_argument("--out", default=None)
    regenerate.add_argument("--seed", type=int, default=1)
    regenerate.add_argument("--days", type=int, default=30)
    regenerate.add_argument("--lake-sizes", type=int, nargs="+", default=list(GOLDEN_LAKE_SIZES),
                            dest="lake_sizes")
    regenerate.add_argument("--episodes", type=int, default=100)
    regenerate.add_argument("--unit-cost", type=float, default=3.5, dest="unit_cost")
    return parser


def config_from_args(args):
    overrides = {f: getattr(args, f) for f in ExperimentConfig.__dataclass_fields__
                 if getattr(args, f, None) is not None}
    if args.config is not None:
        return load_config(args.config, **overrides)
    return make_config(**overrides)


def _fail(message, status):
    print("stoch-cond: {}".format(message), file=sys.stderr)
    return status


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "golden":
        out = args.out or os.environ.get(OUT_ENV, ".")
        for path in regenerate_golden(out, args.seed, args.days, args.lake_sizes,
                                      args.episodes, args.unit_cost):
            print(path)
        return 0

    if args.command == "run" and args.config is None and args.study is None:
        parser.error("the following arguments are required: --study (or --config)")

    try:
        config = config_from_args(args)
    except (ConfigError, OSError) as e:
        return _fail("config error: {}".format(e), 2)

    violations = validate(config)
    if args.command == "validate":
        for violation in violations:
            print(violation)
        return 2 if violations else 0
    if violations:
        return _fail("config error: {}".format("; ".join(violations)), 2)

    try:
        summary = run(config)
    except ConfigError as e:
        return _fail("config error: {}".format(e), 2)
    except (RuntimeError, ValueError, ArithmeticError) as e:
        return _fail("{}: {}".format(type(e).__name__, e), 1)
    print(os.path.join(config.out_dir, "summary.json"))
    if config.verbose:
        print(json.dumps(summary["parameters"], indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
