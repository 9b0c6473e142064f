"""
The sailing problem: a boat crosses a square lake from corner A = (0, 0) to
corner B = (L - 1, L - 1), one leg to one of the 8 neighbouring cells at a
time, while the wind wanders between 8 directions.

Directions are indexed clockwise from north: 0 N, 1 NE, 2 E, 3 SE, 4 S, 5 SW,
6 W, 7 NW. A wind index is the direction the wind blows from. The cost of a
leg depends on its angle to the wind:

    into 0deg: forbidden, up 45deg: 4, cross 90deg: 3, down 135deg: 2, away 180deg: 1

per unit of distance (diagonal legs are sqrt(2) long), plus a delay of 4
whenever the leg puts the boat on the other tack. Each step the wind stays
with probability 0.4 and turns one sector left or right with probability 0.3
each.

Policy search is cast as inference: the unit cost of a parametric policy
gets a uniform prior on [1, 8], and the log-likelihood of a wind history is
-travel_cost / (L * temperature).
"""
import warnings
from collections import namedtuple

import numpy as np

from ..exceptions import ConvergenceError, RolloutCapError
from ..model import Model
from ..observed import Simulator
from ..util import ensure_rng

PORT, STARBOARD = 0, 1
N_DIRECTIONS = 8
DELTAS = np.array([(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)])
LEG_LENGTHS = np.hypot(DELTAS[:, 0], DELTAS[:, 1])

# into, up, cross, down, away
RELATIVE_COSTS = (np.inf, 4.0, 3.0, 2.0, 1.0)
TACK_DELAY = 4.0
WIND_PROBS = (0.4, 0.3, 0.3)
UNIT_COST_RANGE = (1.0, 8.0)

SailingState = namedtuple("SailingState", ["position", "tack", "wind"])


def relative_angle(leg, wind):
    """Sectors between heading and wind, 0 (into) to 4 (away)."""
    k = (leg - wind) % N_DIRECTIONS
    return np.minimum(k, N_DIRECTIONS - k)


def next_tack(tack, leg, wind):
    """The tack after a leg; unchanged when sailing straight into or away from the wind."""
    k = (leg - wind) % N_DIRECTIONS
    if 1 <= k <= 3:
        return PORT
    if 5 <= k <= 7:
        return STARBOARD
    return tack


def sailing_cost(tack, leg, wind):
    """
    Cost of one leg: the relative-wind cost per unit distance times the leg
    length, plus the tacking delay when the tack changes. Legs into the wind
    cost infinity.
    """
    cost = RELATIVE_COSTS[relative_angle(leg, wind)] * LEG_LENGTHS[leg]
    if next_tack(tack, leg, wind) != tack:
        cost += TACK_DELAY
    return float(cost)


def _tables():
    cost = np.empty((2, N_DIRECTIONS, N_DIRECTIONS))
    tack = np.empty((2, N_DIRECTIONS, N_DIRECTIONS), dtype=int)
    for t in (PORT, STARBOARD):
        for w in range(N_DIRECTIONS):
            for leg in range(N_DIRECTIONS):
                cost[t, w, leg] = sailing_cost(t, leg, w)
                tack[t, w, leg] = next_tack(t, leg, w)
    return cost, tack


# COST[tack, wind, leg], NEXT_TACK[tack, wind, leg]
COST, NEXT_TACK = _tables()


def wind_step(wind, random_state, probs=WIND_PROBS):
    """One step of the wind random walk: stay, turn left or turn right."""
    move = random_state.choice(3, p=probs)
    return int((wind + (0, -1, 1)[move]) % N_DIRECTIONS)


class WindHistory(object):
    """
    A wind history that extends itself on demand. Wind at step t depends only
    on (seed, t): the initial wind is uniform over the 8 directions and each
    later one follows the random walk.
    """
    def __init__(self, seed, probs=WIND_PROBS):
        self.seed = int(seed)
        self._probs = probs
        self._random_state = ensure_rng(self.seed)
        self._winds = [int(self._random_state.integers(N_DIRECTIONS))]

    def __getitem__(self, t):
        while len(self._winds) <= t:
            self._extend(max(len(self._winds), 64))
        return self._winds[t]

    def __len__(self):
        return len(self._winds)

    def _extend(self, n):
        moves = self._random_state.choice(3, size=n, p=self._probs)
        wind = self._winds[-1]
        for move in moves:
            wind = (wind + (0, -1, 1)[move]) % N_DIRECTIONS
            self._winds.append(int(wind))


def _shift(d, size):
    """Source and destination slices for moving d cells along an axis."""
    if d > 0:
        return slice(0, size - d), slice(d, size)
    if d < 0:
        return slice(-d, size), slice(0, size + d)
    return slice(0, size), slice(0, size)


def _expected_next(V, probs):
    stay, left, right = probs
    return stay * V + left * np.roll(V, 1, axis=3) + right * np.roll(V, -1, axis=3)


def _q_values(V, probs):
    size = V.shape[0]
    EV = _expected_next(V, probs)
    winds = np.arange(N_DIRECTIONS)[None, :]
    Q = np.full((N_DIRECTIONS,) + V.shape, np.inf)
    for leg, (dx, dy) in enumerate(DELTAS):
        src_x, dst_x = _shift(dx, size)
        src_y, dst_y = _shift(dy, size)
        landing = EV[dst_x, dst_y][:, :, NEXT_TACK[:, :, leg], winds]
        Q[leg][src_x, src_y] = COST[:, :, leg] + landing
    return Q


def bellman_sweep(V, probs=WIND_PROBS):
    """One Jacobi sweep: every state takes its cheapest leg against V; the goal stays at 0."""
    goal = V.shape[0] - 1
    V_new = _q_values(V, probs).min(axis=0)
    V_new[goal, goal] = 0.0
    return V_new


def value_iteration(lake_size, tolerance=1e-6, probs=WIND_PROBS, max_sweeps=100000):
    """
    Expected cost to reach the goal from every state, by Jacobi value
    iteration started from zero.

    Returns
    -------
    (ndarray, ndarray)
        Values and greedy legs, both indexed [x, y, tack, wind]. The goal
        states have value 0.
    """
    if lake_size < 2:
        raise ValueError("value_iteration needs lake_size >= 2, got {}.".format(lake_size))
    V = np.zeros((lake_size, lake_size, 2, N_DIRECTIONS))
    for _ in range(max_sweeps):
        V_new = bellman_sweep(V, probs)
        delta = np.max(np.abs(V_new - V))
        V = V_new
        if delta < tolerance:
            policy = _q_values(V, probs).argmin(axis=0)
            return V, policy
    raise ConvergenceError(
        "Value iteration did not converge in {} sweeps (last update {:.3g}).".format(
            max_sweeps, delta)
    )


def start_value(V):
    """Expected optimal cost from corner A on port tack, over a uniform initial wind."""
    return float(V[0, 0, PORT].mean())


def _feasible_next(position, wind, lake_size):
    nxt = np.asarray(position) + DELTAS
    on_lake = np.all((nxt >= 0) & (nxt < lake_size), axis=1)
    return nxt, on_lake & (relative_angle(np.arange(N_DIRECTIONS), wind) > 0)


def parametric_policy_leg(state, unit_cost, goal, lake_size=None):
    """
    The leg minimizing its cost plus unit_cost times the distance left to the
    goal; ties go to the smallest leg index.
    """
    position, tack, wind = state
    lake_size = goal[0] + 1 if lake_size is None else lake_size
    nxt, feasible = _feasible_next(position, wind, lake_size)
    distance = np.hypot(goal[0] - nxt[:, 0], goal[1] - nxt[:, 1])
    with np.errstate(invalid="ignore"):
        scores = COST[tack, wind] + unit_cost * distance
    scores = np.where(feasible, scores, np.inf)
    return int(np.argmin(scores))


class ParametricPolicy(object):
    def __init__(self, unit_cost):
        self.unit_cost = float(unit_cost)

    def reset(self, random_state):
        pass

    def leg(self, state, goal, lake_size):
        return parametric_policy_leg(state, self.unit_cost, goal, lake_size)


class GreedyPolicy(object):
    """Closest landing cell to the goal first, then the cheaper leg, then the smaller index."""
    def reset(self, random_state):
        pass

    def leg(self, state, goal, lake_size):
        position, tack, wind = state
        nxt, feasible = _feasible_next(position, wind, lake_size)
        distance = np.round(np.hypot(goal[0] - nxt[:, 0], goal[1] - nxt[:, 1]), 12)
        order = np.lexsort((np.arange(N_DIRECTIONS), COST[tack, wind], distance))
        return int(next(leg for leg in order if feasible[leg]))


class TabularPolicy(object):
    """Legs looked up in a table indexed [x, y, tack, wind], e.g. from value_iteration."""
    def __init__(self, table):
        self.table = np.asarray(table)

    def reset(self, random_state):
        pass

    def leg(self, state, goal, lake_size):
        (x, y), tack, wind = state
        return int(self.table[x, y, tack, wind])


class PosteriorPolicy(object):
    """A parametric policy whose unit cost is redrawn from posterior samples every episode."""
    def __init__(self, unit_costs, weights=None):
        self.unit_costs = np.asarray(unit_costs, dtype=float)
        self.weights = None if weights is None else np.asarray(weights, dtype=float)
        self.unit_cost = float(np.median(self.unit_costs))

    def reset(self, random_state):
        p = None if self.weights is None else self.weights / self.weights.sum()
        self.unit_cost = float(random_state.choice(self.unit_costs, p=p))

    def leg(self, state, goal, lake_size):
        return parametric_policy_leg(state, self.unit_cost, goal, lake_size)


def rollout(policy, lake_size, wind_history, max_steps=None):
    """
    Travel cost of one crossing from corner A (port tack) to corner B under
    a wind history.

    Raises
    ------
    RolloutCapError
        When the goal is not reached within `max_steps` legs (10 * lake_size
        by default).
    """
    max_steps = 10 * lake_size if max_steps is None else max_steps
    goal = (lake_size - 1, lake_size - 1)
    position, tack, cost = (0, 0), PORT, 0.0
    for t in range(max_steps):
        if position == goal:
            return cost
        wind = wind_history[t]
        leg = policy.leg(SailingState(position, tack, wind), goal, lake_size)
        cost += COST[tack, wind, leg]
        tack = NEXT_TACK[tack, wind, leg]
        position = (position[0] + int(DELTAS[leg, 0]), position[1] + int(DELTAS[leg, 1]))
    if position == goal:
        return cost
    raise RolloutCapError(position, max_steps, cost)


def travel_cost(wind_history, unit_cost, lake_size, max_steps=None):
    return rollout(ParametricPolicy(unit_cost), lake_size, wind_history, max_steps)


def sailing_log_joint(wind_history, unit_cost, lake_size, temperature, max_steps=None):
    """
    -travel_cost / (lake_size * temperature) for the parametric policy with
    `unit_cost` under `wind_history`, a WindHistory or its seed. Unnormalized.
    """
    if not isinstance(wind_history, WindHistory):
        wind_history = WindHistory(wind_history)
    cost = travel_cost(wind_history, unit_cost, lake_size, max_steps)
    return -cost / (lake_size * temperature)


def wind_histories():
    """Observed distribution over wind histories, each identified by its seed."""
    return Simulator(lambda random_state, size: random_state.integers(0, 2 ** 53, size=size)
                     .astype(float))


class SailingModel(Model):
    """
    unit_cost ~ Uniform(1, 8) on a scaled logit scale; a wind history y has
    log-density -travel_cost(y, unit_cost) / (lake_size * temperature).
    Crossings that hit the step cap count as infinitely expensive.
    """
    def __init__(self, lake_size=25, temperature=0.2, max_steps=None,
                 unit_cost_range=UNIT_COST_RANGE):
        super(SailingModel, self).__init__({"unit_cost": unit_cost_range})
        self.lake_size = int(lake_size)
        self.temperature = float(temperature)
        self.max_steps = max_steps
        self.unit_cost_range = unit_cost_range

    def _log_prior(self, x):
        lo, hi = self.unit_cost_range
        return -np.log(hi - lo) if lo <= x[0] <= hi else -np.inf

    def _log_cond(self, x, y):
        seed = int(np.asarray(y).ravel()[0])
        try:
            return sailing_log_joint(seed, x[0], self.lake_size, self.temperature, self.max_steps)
        except RolloutCapError as e:
            warnings.warn("Treating capped crossing as infeasible: {}".format(e), RuntimeWarning)
            return -np.inf


def evaluate_policy(policy, lake_size, episodes, random_state=None, max_steps=None):
    """
    Monte Carlo mean travel cost of a policy and its 95% confidence interval.

    Returns
    -------
    (float, (float, float))
    """
    if episodes < 1:
        raise ValueError("evaluate_policy needs episodes >= 1, got {}.".format(episodes))
    random_state = ensure_rng(random_state)
    costs = np.empty(episodes)
    for i in range(episodes):
        history = WindHistory(random_state.integers(0, 2 ** 53))
        policy.reset(random_state)
        costs[i] = rollout(policy, lake_size, history, max_steps)
    mean = float(costs.mean())
    half = 1.96 * costs.std(ddof=1) / np.sqrt(episodes) if episodes > 1 else 0.0
    return mean, (mean - half, mean + half)


def posterior_mode(unit_costs, weights=None, bins=28, value_range=UNIT_COST_RANGE):
    """Centre of the fullest histogram bin of the unit-cost draws."""
    counts, edges = np.histogram(unit_costs, bins=bins, range=value_range, weights=weights)
    i = int(np.argmax(counts))
    return float(0.5 * (edges[i] + edges[i + 1]))


def grid_log_posterior(unit_costs, lake_size, temperature, seeds, max_steps=None):
    """
    Unnormalized log-posterior of each unit cost under the uniform prior,
    with the travel cost averaged over the same wind histories (given by
    their seeds) for every unit cost. Unit costs whose crossing hits the step
    cap under any of the histories get -inf.
    """
    out = np.empty(len(unit_costs))
    for i, unit_cost in enumerate(unit_costs):
        try:
            costs = [travel_cost(WindHistory(seed), unit_cost, lake_size, max_steps)
                     for seed in seeds]
        except RolloutCapError:
            out[i] = -np.inf
            continue
        out[i] = -np.mean(costs) / (lake_size * temperature)
    return out


def compare_policies(unit_costs, lake_size, episodes, random_state=None, weights=None,
                     tolerance=1e-6, max_steps=None):
    """
    Expected travel costs of the policies learned from posterior unit-cost
    draws next to the optimal and the greedy policy.

    Every policy is evaluated on the same sequence of episode seeds.

    Parameters
    ----------
    unit_costs: array-like
        Posterior draws of the unit cost.

    lake_size: int

    episodes: int
        Crossings per policy.

    random_state: int or Generator, optional(default=None)

    weights: array-like, optional(default=None)
        Importance weights of the draws.

    Returns
    -------
    dict
        "unit_cost_mode", "optimal_value" (the value-iteration cost from
        corner A) and, for each of "optimal", "inferred" (the posterior-mode
        unit cost), "posterior" (unit cost redrawn every episode) and
        "greedy", the mean cost with its 95% interval as "mean", "lo", "hi".
        A policy whose crossing hits the step cap gets infinite costs and
        the cap message under "capped".
    """
    seed = int(ensure_rng(random_state).integers(0, 2 ** 63))
    V, table = value_iteration(lake_size, tolerance)
    mode = posterior_mode(unit_costs, weights)
    policies = [
        ("optimal", TabularPolicy(table)),
        ("inferred", ParametricPolicy(mode)),
        ("posterior", PosteriorPolicy(unit_costs, weights)),
        ("greedy", GreedyPolicy()),
    ]
    out = {"lake_size": int(lake_size), "episodes": int(episodes),
           "unit_cost_mode": mode, "optimal_value": start_value(V)}
    for name, policy in policies:
        try:
            mean, (lo, hi) = evaluate_policy(policy, lake_size, episodes, ensure_rng(seed),
                                             max_steps)
        except RolloutCapError as e:
            warnings.warn("The {} policy did not finish: {}".format(name, e), RuntimeWarning)
            out[name] = {"mean": np.inf, "lo": np.inf, "hi": np.inf, "capped": str(e)}
            continue
        out[name] = {"mean": mean, "lo": lo, "hi": hi}
    return out
