from .conjugate import BetaBernoulli, NormalMean, TabularModel
from .commute import CommuteModel, CommuteData, commute_problem, load_commute_csv, save_commute_csv
from .nypopu import NyPopuModel, nypopu_model, posterior_predictive_total, PUBLISHED_SAMPLES
from .sailing import SailingModel, value_iteration, rollout, evaluate_policy

__all__ = [
    "BetaBernoulli",
    "NormalMean",
    "TabularModel",
    "CommuteModel",
    "CommuteData",
    "commute_problem",
    "load_commute_csv",
    "save_commute_csv",
    "NyPopuModel",
    "nypopu_model",
    "posterior_predictive_total",
    "PUBLISHED_SAMPLES",
    "SailingModel",
    "value_iteration",
    "rollout",
    "evaluate_policy",
]
