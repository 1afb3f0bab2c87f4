"""bivos: exact finite-sample and asymptotic distributions of componentwise
bivariate order statistics under arbitrary copulas."""

from .copulas import (
    FGM,
    CellProbabilities,
    Clayton,
    Comonotone,
    Copula,
    Countermonotone,
    GumbelHougaard,
    Independence,
    default_zoo,
    parse_copula,
)
from .discrete import (
    DiscretePmf,
    normal_tail_approx,
    poisson_binomial_pmf,
    tail_ge,
    two_group_pmf,
)
from .errors import (
    DegenerateVarianceError,
    DomainError,
    NonDifferentiableError,
    QuadratureError,
    RankRuleError,
    ResourceLimitError,
)
from .harness import (
    BoundReport,
    EmpiricalGrid,
    ExperimentConfig,
    GapReport,
    empirical_cdf_grid,
    mix64,
    run_bound_experiment,
    run_convergence_experiment,
    simulate_scaled_pairs,
)
from .limits import (
    LimitCase,
    RankRule,
    ScaledPair,
    gj_cdf,
    limit_joint_cdf,
    parse_case,
    parse_rank_rule,
    scaling_map,
    std_normal_cdf,
    univariate_bound,
)
from .orderstats import (
    BRUTEFORCE_LIMIT,
    DEFAULT_DP_LIMIT,
    OrderStatSpec,
    conditional_cdf,
    joint_cdf,
    joint_cdf_bruteforce,
    joint_cdf_grid,
    marginal_cdf,
    marginal_density,
    reconstruct_joint,
)
from .quadrature import adaptive_simpson

__version__ = "0.1.0"
