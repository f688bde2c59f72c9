"""Scalar special functions used by every distribution formula.

Everything here is plain-float and pure: log-gamma, a pole-aware reciprocal
gamma, falling factorials, the one-parameter Mittag-Leffler function and the
Gauss hypergeometric series.  The distribution series downstream are built
from *differences* of log-gamma values with explicit sign tracking, so the
central helper is :func:`log_abs_gamma` which returns ``(sign, log|Gamma|)``
for any finite real argument.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError, ParameterError

# Nearest-integer tolerance for detecting gamma poles.  Arguments like
# k*nu + 1 - n are produced by float multiplication, so an argument that is
# "morally" a non-positive integer can miss it by a few ulp.
POLE_TOL = 1e-9

# Largest magnitude any series term may reach before we refuse to continue:
# beyond this, double precision has no digits left to cancel.
LOG_HUGE = math.log(1e300)

DEFAULT_TOL_ABS = 1e-14
DEFAULT_TERM_CAP = 10_000


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Thin wrapper over the C library's Lanczos-class ``lgamma`` with the
    positivity precondition made explicit.
    """
    if not math.isfinite(x):
        raise ParameterError(f"log_gamma: argument must be finite, got {x!r}")
    if x <= 0.0:
        raise ParameterError(f"log_gamma: argument must be > 0, got {x}")
    return math.lgamma(x)


def is_gamma_pole(x: float) -> bool:
    """True when x is within POLE_TOL of a non-positive integer."""
    if x > 0.5:
        return False
    n = round(x)
    return n <= 0 and abs(x - n) <= POLE_TOL


def log_abs_gamma(x: float) -> tuple[float, float]:
    """Return ``(sign, ln|Gamma(x)|)`` for any finite x.

    At a pole the sign is 0.0 and the log-magnitude is +inf, which makes
    ``sign * exp(-logmag)`` the correct reciprocal (exactly zero).  For
    negative non-integer x the C ``lgamma`` already computes ln|Gamma| via
    reflection; the sign of Gamma alternates per unit interval: negative on
    (-1, 0), positive on (-2, -1), and so on.
    """
    if not math.isfinite(x):
        raise ParameterError(f"log_abs_gamma: argument must be finite, got {x!r}")
    if x > 0.0:
        return 1.0, math.lgamma(x)
    if is_gamma_pole(x):
        return 0.0, math.inf
    sign = -1.0 if math.floor(x) % 2 else 1.0
    return sign, math.lgamma(x)


def rgamma(x: float) -> float:
    """1 / Gamma(x) as a total function: exactly 0.0 at non-positive integers.

    This is the semantics the state-probability series rely on: terms whose
    denominator Gamma hits a pole simply vanish.
    """
    sign, logmag = log_abs_gamma(x)
    if sign == 0.0:
        return 0.0
    if -logmag > LOG_HUGE:
        # Gamma underflowed to (effectively) zero; the reciprocal has no
        # finite representation.  Signed infinity keeps the function total.
        return sign * math.inf
    return sign * math.exp(-logmag)


def falling_factorial(x: float, r: int) -> float:
    """(x)_r = x (x-1) ... (x-r+1); the empty product for r = 0."""
    if r < 0:
        raise ParameterError(f"falling_factorial: order must be >= 0, got {r}")
    out = 1.0
    for j in range(r):
        out *= x - j
    return out


def _kahan_add(total: float, comp: float, term: float) -> tuple[float, float]:
    """One compensated-summation step; returns (new_total, new_compensation)."""
    y = term - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def mittag_leffler(
    alpha: float,
    x: float,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    term_cap: int = DEFAULT_TERM_CAP,
) -> float:
    """One-parameter Mittag-Leffler function E_alpha(x) = sum x^k / Gamma(k alpha + 1).

    Direct series with compensated summation.  Two guards keep the answer
    honest in double precision:

    * overflow: if the estimated peak term exceeds 1e300 we refuse;
    * cancellation: for x < -30 the alternating terms grow far beyond the
      O(1) result before decaying, so no accurate digits survive -- we raise
      instead of returning noise.
    """
    if not (0.0 < alpha <= 1.0):
        raise ParameterError(f"mittag_leffler: alpha must be in (0, 1], got {alpha}")
    if not math.isfinite(x):
        raise ParameterError(f"mittag_leffler: argument must be finite, got {x!r}")
    if x < -30.0:
        raise ConvergenceError(
            f"mittag_leffler: x = {x} is too negative for double precision "
            "(alternating-series cancellation); |x| <= 30 is supported"
        )
    if x == 0.0:
        return 1.0
    if x > 0.0 and x ** (1.0 / alpha) > LOG_HUGE:
        raise ConvergenceError(
            f"mittag_leffler: x = {x} overflows the largest series term"
        )

    log_ax = math.log(abs(x))
    total, comp = 0.0, 0.0
    prev = math.inf
    for k in range(term_cap):
        logmag = k * log_ax - math.lgamma(k * alpha + 1.0)
        if logmag > LOG_HUGE:
            raise ConvergenceError("mittag_leffler: series term overflow")
        term = math.exp(logmag)
        if x < 0.0 and k % 2:
            term = -term
        total, comp = _kahan_add(total, comp, term)
        if k >= 1 and abs(term) <= tol_abs and abs(term) < prev:
            return total
        prev = abs(term)
    else:
        raise ConvergenceError(
            f"mittag_leffler: no convergence within {term_cap} terms "
            f"(alpha={alpha}, x={x})"
        )
    return total


def gauss_2f1(
    a: float,
    b: float,
    c: float,
    z: float,
    *,
    tol_abs: float = DEFAULT_TOL_ABS,
    term_cap: int = DEFAULT_TERM_CAP,
) -> float:
    """Gauss hypergeometric series 2F1(a, b; c; z) for |z| < 1.

    Uses the standard *rising*-factorial definition
    sum_k (a)^rise_k (b)^rise_k / (c)^rise_k * z^k / k!  via the term
    recurrence t_{k+1} = t_k (a+k)(b+k) / ((c+k)(k+1)) z.  Terminating cases
    (a or b a non-positive integer) fall out naturally because a term
    becomes exactly zero.
    """
    for name, v in (("a", a), ("b", b), ("c", c), ("z", z)):
        if not math.isfinite(v):
            raise ParameterError(f"gauss_2f1: {name} must be finite, got {v!r}")
    if is_gamma_pole(c):
        raise ParameterError(f"gauss_2f1: c = {c} is a non-positive integer")
    if abs(z) >= 1.0:
        raise ParameterError(f"gauss_2f1: |z| must be < 1, got z = {z}")

    total, comp = 0.0, 0.0
    term = 1.0
    small_run = 0
    for k in range(term_cap):
        total, comp = _kahan_add(total, comp, term)
        if term == 0.0:
            return total
        nxt = term * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        if abs(nxt) > 1e300:
            raise ConvergenceError("gauss_2f1: series term overflow")
        bound = max(tol_abs, tol_abs * abs(total))
        small_run = small_run + 1 if abs(nxt) <= bound else 0
        if small_run >= 2:
            return total + nxt
        term = nxt
    raise ConvergenceError(
        f"gauss_2f1: no convergence within {term_cap} terms (z = {z} too close to 1?)"
    )
