"""Closed-form distributions of the fractional Poisson family.

Five variants live on one parameter lattice (lambda, alpha, nu, beta, gamma):

* classical        alpha = nu = 1, beta = -1
* time-fractional  (tfpp)   nu = 1, beta = -alpha
* space-fractional (sfpp)   alpha = 1, beta = -1
* space-time       (stfpp)  beta = -alpha
* Saigo space-time (sstfpp) beta < 0, gamma free

Each variant's state probabilities are a k-series whose terms are ratios of
gamma functions; the series are summed in log-magnitude/sign form so that
huge numerators against huge denominators never overflow, with reciprocal
gammas vanishing at poles.  The space-fractional variants have power-law
state tails, so truncating the state index n at N leaves mass that cannot
be recovered by summing further states at any feasible N; the tail is
instead computed exactly from partial sums of the generalized binomial
series (see :func:`pmf_tail_mass`), which is what makes the normalization
checks meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .adm import (
    PowerSeries,
    PowerTerm,
    SeriesControl,
    adm_solve_linear,
    rl_integrate,
)
from .errors import ConvergenceError, ParameterError
from .saigo import (
    SaigoParams,
    ck_log_coefficients,
    saigo_caputo_derivative_power,
    saigo_derivative_series,
    saigo_integrate,
)
from .specfun import LOG_HUGE, _kahan_add, falling_factorial, log_abs_gamma

DEFAULT_CONTROL = SeriesControl()

# Beyond this value of lambda^nu * t^(-beta) (equivalently lambda t^alpha,
# lambda^nu t) the alternating series cancels away all double-precision
# digits; full accuracy holds comfortably for arguments up to ~5.
ARG_GUARD = 30.0

VARIANT_TOL = 1e-12


@dataclass(frozen=True)
class FractionalParams:
    """Parameter tuple (lambda, alpha, nu, beta, gamma) of a process variant.

    ``beta`` defaults to -alpha, which selects the space-time-fractional
    sub-family; ``gamma_p`` only matters when beta != -alpha.
    """

    lam: float
    alpha: float = 1.0
    nu: float = 1.0
    beta: float | None = None
    gamma_p: float = 0.0

    def __post_init__(self) -> None:
        if self.beta is None:
            object.__setattr__(self, "beta", -self.alpha)
        for name in ("lam", "alpha", "nu", "beta", "gamma_p"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ParameterError(f"FractionalParams: {name} must be finite, got {v!r}")
        if self.lam <= 0.0:
            raise ParameterError(f"FractionalParams: lambda must be > 0, got {self.lam}")
        if not (0.0 < self.alpha <= 1.0):
            raise ParameterError(f"FractionalParams: alpha must be in (0, 1], got {self.alpha}")
        if not (0.0 < self.nu <= 1.0):
            raise ParameterError(f"FractionalParams: nu must be in (0, 1], got {self.nu}")
        if self.beta >= 0.0:
            raise ParameterError(f"FractionalParams: beta must be < 0, got {self.beta}")

    @property
    def variant(self) -> str:
        rl = abs(self.beta + self.alpha) <= VARIANT_TOL
        a1 = abs(self.alpha - 1.0) <= VARIANT_TOL
        n1 = abs(self.nu - 1.0) <= VARIANT_TOL
        if rl and a1 and n1:
            return "classical"
        if rl and n1:
            return "tfpp"
        if a1 and abs(self.beta + 1.0) <= VARIANT_TOL:
            return "sfpp"
        if rl:
            return "stfpp"
        return "sstfpp"

    def saigo(self) -> SaigoParams:
        return SaigoParams(self.alpha, self.beta, self.gamma_p)


def _check_state(t: float, n: int) -> None:
    if not (math.isfinite(t) and t >= 0.0):
        raise ParameterError(f"t must be finite and >= 0, got {t!r}")
    if n < 0:
        raise ParameterError(f"state index must be >= 0, got {n}")


def _guard_argument(x: float, label: str) -> None:
    if x > ARG_GUARD:
        raise ConvergenceError(
            f"series argument {label} = {x:.6g} exceeds {ARG_GUARD}; "
            "double-precision cancellation would destroy the result"
        )


def _sum_k_series(
    term: Callable[[int], tuple[float, float]],
    k_min: int,
    control: SeriesControl,
    label: str,
) -> float:
    """Sum term(k) = (sign, log-magnitude) over k with a two-term stop rule.

    The stop requires two consecutive below-tolerance terms past k_min:
    single terms can vanish exactly at gamma poles, but (for nu < 1) two
    consecutive pole zeros are impossible, so a pair of small terms really
    does mean the superexponential decay regime has begun.
    """
    total, comp = 0.0, 0.0
    prev = math.inf
    for k in range(control.term_cap):
        sign, logmag = term(k)
        if sign != 0.0:
            if logmag > LOG_HUGE:
                raise ConvergenceError(f"{label}: series term overflow at k = {k}")
            value = sign * math.exp(logmag)
        else:
            value = 0.0
        total, comp = _kahan_add(total, comp, value)
        mag = abs(value)
        if k >= k_min:
            bound = max(control.tol_abs, control.tol_rel * abs(total))
            if mag <= bound and prev <= bound:
                return total
        prev = mag
    raise ConvergenceError(f"{label}: no convergence within {control.term_cap} terms")


def _state_factor(nu: float, n: int, k: int) -> tuple[float, float]:
    """(sign, log-magnitude) of Gamma(k nu + 1) / Gamma(k nu + 1 - n).

    Zero at the denominator's poles -- those series terms vanish.
    """
    s, l = log_abs_gamma(k * nu + 1.0 - n)
    if s == 0.0:
        return 0.0, -math.inf
    return s, math.lgamma(k * nu + 1.0) - l


def poisson_pmf(lam: float, t: float, n: int) -> float:
    """Classical Poisson pmf e^{-lam t} (lam t)^n / n!, in log space."""
    if lam <= 0.0:
        raise ParameterError(f"poisson_pmf: lambda must be > 0, got {lam}")
    _check_state(t, n)
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    m = lam * t
    return math.exp(n * math.log(m) - m - math.lgamma(n + 1.0))


def tfpp_pmf(
    params: FractionalParams, t: float, n: int, control: SeriesControl | None = None
) -> float:
    """Time-fractional pmf: (lam t^a)^n/n! sum_k (k+n)!/k! (-lam t^a)^k / G((k+n)a+1)."""
    if abs(params.nu - 1.0) > VARIANT_TOL:
        raise ParameterError("tfpp_pmf: requires the nu = 1 variant")
    _check_state(t, n)
    control = control or DEFAULT_CONTROL
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    a = params.alpha
    y = params.lam * t ** a
    _guard_argument(y, "lambda*t^alpha")
    ly = math.log(y)
    lgn = math.lgamma(n + 1.0)

    def term(k: int) -> tuple[float, float]:
        logmag = (
            (n + k) * ly
            + math.lgamma(k + n + 1.0)
            - math.lgamma(k + 1.0)
            - math.lgamma((k + n) * a + 1.0)
            - lgn
        )
        return (-1.0 if k % 2 else 1.0), logmag

    return _sum_k_series(term, 2, control, "tfpp_pmf")


def sfpp_pmf(
    params: FractionalParams, t: float, n: int, control: SeriesControl | None = None
) -> float:
    """Space-fractional pmf: (-1)^n/n! sum_k (-lam^nu t)^k/k! * G(k nu+1)/G(k nu+1-n)."""
    if abs(params.alpha - 1.0) > VARIANT_TOL or abs(params.beta + 1.0) > VARIANT_TOL:
        raise ParameterError("sfpp_pmf: requires the alpha = 1, beta = -1 variant")
    _check_state(t, n)
    control = control or DEFAULT_CONTROL
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    nu = params.nu
    x = params.lam ** nu * t
    _guard_argument(x, "lambda^nu*t")
    lx = math.log(x)
    lgn = math.lgamma(n + 1.0)
    sign_n = -1.0 if n % 2 else 1.0

    def term(k: int) -> tuple[float, float]:
        s, lf = _state_factor(nu, n, k)
        if s == 0.0:
            return 0.0, -math.inf
        logmag = k * lx - math.lgamma(k + 1.0) + lf - lgn
        sign = sign_n * (-1.0 if k % 2 else 1.0) * s
        return sign, logmag

    return _sum_k_series(term, int(n / nu) + 2, control, "sfpp_pmf")


def stfpp_pmf(
    params: FractionalParams, t: float, n: int, control: SeriesControl | None = None
) -> float:
    """Space-time-fractional pmf:
    (-1)^n/n! sum_k (-lam^nu t^a)^k/G(k a+1) * G(k nu+1)/G(k nu+1-n)."""
    if abs(params.beta + params.alpha) > VARIANT_TOL:
        raise ParameterError("stfpp_pmf: requires the beta = -alpha variant")
    _check_state(t, n)
    control = control or DEFAULT_CONTROL
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    a, nu = params.alpha, params.nu
    x = params.lam ** nu * t ** a
    _guard_argument(x, "lambda^nu*t^alpha")
    lx = math.log(x)
    lgn = math.lgamma(n + 1.0)
    sign_n = -1.0 if n % 2 else 1.0

    def term(k: int) -> tuple[float, float]:
        s, lf = _state_factor(nu, n, k)
        if s == 0.0:
            return 0.0, -math.inf
        logmag = k * lx - math.lgamma(k * a + 1.0) + lf - lgn
        sign = sign_n * (-1.0 if k % 2 else 1.0) * s
        return sign, logmag

    return _sum_k_series(term, int(n / nu) + 2, control, "stfpp_pmf")


class _CkLogTable:
    """Incrementally extended ln C_k table for a fixed parameter triple."""

    def __init__(self, sp: SaigoParams) -> None:
        self.sp = sp
        self.values = ck_log_coefficients(sp, 0)

    def __getitem__(self, k: int) -> float:
        if k >= len(self.values):
            self.values = ck_log_coefficients(self.sp, max(2 * len(self.values), k + 1))
        return self.values[k]


def sstfpp_pmf(
    params: FractionalParams, t: float, n: int, control: SeriesControl | None = None
) -> float:
    """General Saigo space-time pmf:
    (-1)^n/n! sum_k C_k (-lam^nu t^{-b})^k/G(1-k b) * G(k nu+1)/G(k nu+1-n)."""
    _check_state(t, n)
    control = control or DEFAULT_CONTROL
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    b, nu = params.beta, params.nu
    x = params.lam ** nu * t ** (-b)
    _guard_argument(x, "lambda^nu*t^(-beta)")
    lx = math.log(x)
    lgn = math.lgamma(n + 1.0)
    sign_n = -1.0 if n % 2 else 1.0
    logck = _CkLogTable(params.saigo())

    def term(k: int) -> tuple[float, float]:
        s, lf = _state_factor(nu, n, k)
        if s == 0.0:
            return 0.0, -math.inf
        logmag = logck[k] + k * lx - math.lgamma(1.0 - k * b) + lf - lgn
        sign = sign_n * (-1.0 if k % 2 else 1.0) * s
        return sign, logmag

    return _sum_k_series(term, int(n / nu) + 2, control, "sstfpp_pmf")


def pmf(
    params: FractionalParams, t: float, n: int, control: SeriesControl | None = None
) -> float:
    """Dispatch to the printed formula of the variant the parameters select."""
    v = params.variant
    if v == "classical":
        return poisson_pmf(params.lam, t, n)
    if v == "tfpp":
        return tfpp_pmf(params, t, n, control)
    if v == "sfpp":
        return sfpp_pmf(params, t, n, control)
    if v == "stfpp":
        return stfpp_pmf(params, t, n, control)
    return sstfpp_pmf(params, t, n, control)


def _tail_term_fn(
    params: FractionalParams, t: float, n_max: int
) -> Callable[[int], tuple[float, float]]:
    """Per-order (sign, log-magnitude) of the collapsed tail series."""
    b, nu = params.beta, params.nu
    x = params.lam ** nu * t ** (-b)
    _guard_argument(x, "lambda^nu*t^(-beta)")
    lx = math.log(x)
    lgN = math.lgamma(n_max + 1.0)
    logck = _CkLogTable(params.saigo())

    def term(k: int) -> tuple[float, float]:
        if k == 0:
            return 0.0, -math.inf
        # The partial binomial sum factor -prod_{i<=N}(i - k nu)/N!.
        sign_p, log_p = 1.0, 0.0
        knu = k * nu
        for i in range(1, n_max + 1):
            f = i - knu
            if f == 0.0:
                return 0.0, -math.inf
            if f < 0.0:
                sign_p = -sign_p
                f = -f
            log_p += math.log(f)
        logmag = logck[k] + k * lx - math.lgamma(1.0 - k * b) + log_p - lgN
        sign = -sign_p * (-1.0 if k % 2 else 1.0)
        return sign, logmag

    return term


def pmf_tail_mass(
    params: FractionalParams, t: float, n_max: int, control: SeriesControl | None = None
) -> float:
    """Exact mass above state n_max: sum_{n > n_max} pmf(n, t).

    Interchanging the (absolutely convergent) state and series sums, the
    partial state sum against each series order k is a partial sum of the
    generalized binomial expansion of (1-1)^{k nu}:

        sum_{n=0}^{N} (k nu)_n (-1)^n / n!  =  - prod_{i=1}^{N} (i - k nu) / N!
                                               + [1 if k = 0]

    so the tail collapses to a single k-series.  This is how the
    space-fractional variants (whose state tails decay like N^{-k nu}) get
    an honest tail figure without summing billions of states.
    """
    _check_state(t, 0)
    if n_max < 0:
        raise ParameterError(f"pmf_tail_mass: n_max must be >= 0, got {n_max}")
    control = control or DEFAULT_CONTROL
    if t == 0.0:
        return 0.0
    term = _tail_term_fn(params, t, n_max)
    return _sum_k_series(term, int(n_max / params.nu) + 2, control, "pmf_tail_mass")


@dataclass(frozen=True)
class PmfTable:
    """State probabilities over a (time x state) grid with explicit tail mass."""

    params: FractionalParams
    times: tuple[float, ...]
    n_max: int
    probs: tuple[tuple[float, ...], ...]
    tail_mass: tuple[float, ...]
    control: SeriesControl


def pmf_table(
    params: FractionalParams,
    times: Sequence[float],
    n_max: int,
    control: SeriesControl | None = None,
) -> PmfTable:
    control = control or DEFAULT_CONTROL
    probs = []
    tails = []
    for t in times:
        probs.append(tuple(pmf(params, t, n, control) for n in range(n_max + 1)))
        tails.append(pmf_tail_mass(params, t, n_max, control))
    return PmfTable(params, tuple(times), n_max, tuple(probs), tuple(tails), control)


def normalization_residual(
    params: FractionalParams,
    t: float,
    n_max: int,
    control: SeriesControl | None = None,
) -> float:
    """|sum_{n<=n_max} pmf + tail_mass - 1| at one time point."""
    control = control or DEFAULT_CONTROL
    total, comp = 0.0, 0.0
    for n in range(n_max + 1):
        total, comp = _kahan_add(total, comp, pmf(params, t, n, control))
    total, comp = _kahan_add(total, comp, pmf_tail_mass(params, t, n_max, control))
    return abs(total - 1.0)


def truncated_normalization_residual(
    params: FractionalParams, t: float, n_max: int, max_k: int,
    control: SeriesControl | None = None,
) -> float:
    """|row sum + tail - 1| with the row sum hard-truncated at order max_k.

    The tail is the fully-converged collapsed series; truncating it at the
    same order as the states would telescope exactly (the interchange
    identity holds order-by-order) and hide any truncation error.  Pairing
    the truncated rows with the exact tail makes an inadequate max_k show
    up as a normalization failure.  This is the route the CLI's verify
    command uses.
    """
    _check_state(t, 0)
    if t == 0.0:
        return 0.0
    control = control or DEFAULT_CONTROL
    total, comp = 0.0, 0.0
    for n in range(n_max + 1):
        total, comp = _kahan_add(total, comp, state_series(params, n, max_k).evaluate(t))
    total, comp = _kahan_add(total, comp, pmf_tail_mass(params, t, n_max, control))
    return abs(total - 1.0)


def composition_tuples_residual(params: FractionalParams) -> float:
    """Worst composition-identity residual over a small deterministic grid
    built from the process's own Saigo parameters."""
    from .saigo import composition_check

    sp = params.saigo()
    return max(
        composition_check(sp, rho, t)
        for rho in (0.8, 1.0, 1.7, 2.5)
        for t in (0.5, 1.0, 2.0)
    )


def sstfpp_pgf(
    params: FractionalParams, u: float, t: float, control: SeriesControl | None = None
) -> float:
    """Probability generating function sum_k C_k (-lam^nu (1-u)^nu t^{-b})^k / G(1-k b)."""
    if not (math.isfinite(u) and abs(u) < 1.0):
        raise ParameterError(f"sstfpp_pgf: requires |u| < 1, got {u!r}")
    _check_state(t, 0)
    control = control or DEFAULT_CONTROL
    if t == 0.0:
        return 1.0
    b, nu = params.beta, params.nu
    z = params.lam ** nu * (1.0 - u) ** nu * t ** (-b)
    _guard_argument(z, "lambda^nu*(1-u)^nu*t^(-beta)")
    lz = math.log(z) if z > 0.0 else -math.inf
    logck = _CkLogTable(params.saigo())

    def term(k: int) -> tuple[float, float]:
        if lz == -math.inf and k > 0:
            return 0.0, -math.inf
        logmag = logck[k] + k * lz - math.lgamma(1.0 - k * b)
        return (-1.0 if k % 2 else 1.0), logmag

    return _sum_k_series(term, 2, control, "sstfpp_pgf")


def waiting_survival(
    params: FractionalParams, t: float, control: SeriesControl | None = None
) -> float:
    """Pr{first event after t}; identical to the n = 0 state probability."""
    return pmf(params, t, 0, control)


# ---------------------------------------------------------------------------
# Decomposition cross-checks: closed-form iterate coefficients, the governing
# difference-differential equation, and the generating-function equation.
# ---------------------------------------------------------------------------


def closed_iterate_coefficient(
    params: FractionalParams, logck: Sequence[float] | _CkLogTable, n: int, k: int
) -> float:
    """Coefficient of t^{-k beta} in the k-th decomposition iterate of state n:

        (-1)^n / n! * (k nu)_n * C_k * (-lam^nu)^k / Gamma(1 - k beta).
    """
    ff = falling_factorial(k * params.nu, n)
    if ff == 0.0:
        return 0.0
    logmag = (
        logck[k]
        + k * params.nu * math.log(params.lam)
        - math.lgamma(1.0 - k * params.beta)
        - math.lgamma(n + 1.0)
    )
    sign = -1.0 if (n + k) % 2 else 1.0
    return sign * ff * math.exp(logmag)


def state_series(
    params: FractionalParams, n: int, k_trunc: int
) -> PowerSeries:
    """Truncated power series sum_{k<=k_trunc} c_{n,k} t^{-k beta} for state n."""
    logck = ck_log_coefficients(params.saigo(), k_trunc)
    terms = []
    for k in range(k_trunc + 1):
        c = closed_iterate_coefficient(params, logck, n, k)
        if c != 0.0:
            terms.append(PowerTerm(c, -k * params.beta))
    return PowerSeries(terms)


def _coupling_weight(params: FractionalParams, r: int) -> float:
    """-lam^nu (-1)^r (nu)_r / r!, the fractional-difference coupling to state n-r."""
    w = falling_factorial(params.nu, r) / math.factorial(r)
    return -(params.lam ** params.nu) * (-w if r % 2 else w)


def kolmogorov_residual(
    params: FractionalParams,
    t: float,
    n: int,
    k_trunc: int,
    control: SeriesControl | None = None,
) -> float:
    """Residual of the governing equation on truncated series at time t.

    LHS: the Caputo-type Saigo derivative applied term-wise to state n's
    series.  RHS: the fractional-difference coupling of states n-r.  On
    truncated series the two sides agree except for the RHS's top order,
    so the residual is a pure truncation quantity, bounded by
    :func:`kolmogorov_tail_bound`.
    """
    if not (t > 0.0 and math.isfinite(t)):
        raise ParameterError(f"kolmogorov_residual: t must be > 0, got {t!r}")
    series = [state_series(params, m, k_trunc) for m in range(n + 1)]
    lhs = saigo_derivative_series(params.saigo(), series[n]).evaluate(t)
    rhs, comp = 0.0, 0.0
    for r in range(n + 1):
        rhs, comp = _kahan_add(rhs, comp, _coupling_weight(params, r) * series[n - r].evaluate(t))
    return abs(lhs - rhs)


def kolmogorov_tail_bound(
    params: FractionalParams, t: float, n: int, k_trunc: int
) -> float:
    """Bound on the residual: the RHS's unmatched top-order term plus a
    float-evaluation floor proportional to the total evaluated magnitude."""
    logck = ck_log_coefficients(params.saigo(), k_trunc)
    top = 0.0
    scale = 0.0
    for r in range(n + 1):
        w = abs(_coupling_weight(params, r))
        top += w * abs(closed_iterate_coefficient(params, logck, n - r, k_trunc))
        for k in range(k_trunc + 1):
            c = closed_iterate_coefficient(params, logck, n - r, k)
            scale += w * abs(c) * t ** (-k * params.beta)
    eps = math.ulp(1.0)
    return top * t ** (-k_trunc * params.beta) + 64.0 * eps * max(scale, 1.0)


def adm_closed_form_diff(
    params: FractionalParams,
    n_max: int,
    k_trunc: int,
    control: SeriesControl | None = None,
) -> float:
    """Run the decomposition engine and compare every iterate coefficient
    against the closed-form term; returns the worst normalized discrepancy.

    The engine route applies the fractional integral operator k times
    (Riemann-Liouville when beta = -alpha, the Saigo integral otherwise),
    so it shares no arithmetic with the closed-form coefficients.
    """
    base = control or DEFAULT_CONTROL
    solve_control = replace(base, max_k=k_trunc)
    if abs(params.beta + params.alpha) <= VARIANT_TOL:
        integral_op = lambda s: rl_integrate(s, params.alpha)
    else:
        sp = params.saigo()
        integral_op = lambda s: saigo_integrate(sp, s)
    state = adm_solve_linear(
        integral_op,
        lambda n, r: _coupling_weight(params, r),
        [1.0 if n == 0 else 0.0 for n in range(n_max + 1)],
        n_max,
        solve_control,
    )
    logck = ck_log_coefficients(params.saigo(), k_trunc)
    worst = 0.0
    for n in range(n_max + 1):
        for k in range(k_trunc + 1):
            closed = closed_iterate_coefficient(params, logck, n, k)
            it = state.iterates[n][k]
            if len(it) == 0:
                got = 0.0
            elif len(it) == 1:
                term = it.terms[0]
                if abs(term.exponent - (-k * params.beta)) > 1e-9:
                    raise ConvergenceError(
                        f"adm_closed_form_diff: iterate (n={n}, k={k}) has exponent "
                        f"{term.exponent}, expected {-k * params.beta}"
                    )
                got = term.coeff
            else:
                raise ConvergenceError(
                    f"adm_closed_form_diff: iterate (n={n}, k={k}) is not a monomial"
                )
            diff = abs(got - closed) / max(1.0, abs(closed))
            worst = max(worst, diff)
    return worst


def pgf_cauchy_residual(
    params: FractionalParams, u: float, k_trunc: int
) -> float:
    """Coefficient-level residual of the generating-function equation.

    The pgf series G = sum_k a_k t^{-k beta} must satisfy
    (Saigo-Caputo derivative of G) = -lam^nu (1-u)^nu G; order by order this
    reads  D-multiplier(-k beta) * a_k = -lam^nu (1-u)^nu * a_{k-1}.
    Returns the worst |lhs - rhs| / max(1, |rhs|) over k = 1 .. k_trunc.
    """
    if not (math.isfinite(u) and abs(u) < 1.0):
        raise ParameterError(f"pgf_cauchy_residual: requires |u| < 1, got {u!r}")
    sp = params.saigo()
    logck = ck_log_coefficients(sp, k_trunc)
    z = params.lam ** params.nu * (1.0 - u) ** params.nu
    lz = math.log(z)

    def a(k: int) -> float:
        sign = -1.0 if k % 2 else 1.0
        return sign * math.exp(logck[k] + k * lz - math.lgamma(1.0 - k * params.beta))

    worst = 0.0
    for k in range(1, k_trunc + 1):
        dmult = saigo_caputo_derivative_power(sp, -k * params.beta).coeff
        lhs = dmult * a(k)
        rhs = -z * a(k - 1)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst
