"""Fractional Poisson processes via exact power-series decomposition.

State probabilities, generating functions and waiting-time survival for the
classical, time-fractional, space-fractional, space-time-fractional and
Saigo space-time-fractional Poisson processes, cross-validated three ways:
closed-form series, the Adomian decomposition engine, and Monte-Carlo
subordination.
"""

from .adm import (
    AdmState,
    PowerSeries,
    PowerTerm,
    SeriesControl,
    adm_solve_linear,
    adomian_polynomials,
    rl_integrate,
)
from .errors import (
    ConvergenceError,
    FracpoisError,
    ParameterError,
    UnsupportedVariantError,
)
from .processes import (
    FractionalParams,
    PmfTable,
    adm_closed_form_diff,
    kolmogorov_residual,
    kolmogorov_tail_bound,
    normalization_residual,
    pgf_cauchy_residual,
    pmf,
    pmf_table,
    pmf_tail_mass,
    poisson_pmf,
    sfpp_pmf,
    sstfpp_pgf,
    sstfpp_pmf,
    stfpp_pmf,
    tfpp_pmf,
    waiting_survival,
)
from .saigo import (
    SaigoParams,
    ck_coefficients,
    composition_check,
    saigo_caputo_derivative_power,
    saigo_integral_power,
    saigo_integral_quadrature,
    semigroup_counterexample,
)
from .simulate import (
    EmpiricalPmf,
    chi_square_gof,
    empirical_pmf,
    sample_inverse_stable,
    sample_process,
    sample_stable,
)
from .specfun import (
    falling_factorial,
    gauss_2f1,
    log_gamma,
    mittag_leffler,
    rgamma,
)

__version__ = "0.1.0"

__all__ = [
    "AdmState",
    "ConvergenceError",
    "EmpiricalPmf",
    "FracpoisError",
    "FractionalParams",
    "ParameterError",
    "PmfTable",
    "PowerSeries",
    "PowerTerm",
    "SaigoParams",
    "SeriesControl",
    "UnsupportedVariantError",
    "adm_closed_form_diff",
    "adm_solve_linear",
    "adomian_polynomials",
    "chi_square_gof",
    "ck_coefficients",
    "composition_check",
    "empirical_pmf",
    "falling_factorial",
    "gauss_2f1",
    "kolmogorov_residual",
    "kolmogorov_tail_bound",
    "log_gamma",
    "mittag_leffler",
    "normalization_residual",
    "pgf_cauchy_residual",
    "pmf",
    "pmf_table",
    "pmf_tail_mass",
    "poisson_pmf",
    "rgamma",
    "rl_integrate",
    "saigo_caputo_derivative_power",
    "saigo_integral_power",
    "saigo_integral_quadrature",
    "sample_inverse_stable",
    "sample_process",
    "sample_stable",
    "semigroup_counterexample",
    "sfpp_pmf",
    "sstfpp_pgf",
    "sstfpp_pmf",
    "stfpp_pmf",
    "tfpp_pmf",
    "waiting_survival",
]
