"""Bandwidth selectors.

The centerpiece is the closed-form reference rule for the boundary-kernel
beta estimator: fit Beta(a,b) to the data by the method of moments, then

  h_ref = ( sqrt(pi)/n * (2a-3)(2b-3) * 2^(5-2a-2b) * (2a+2b-5)(2a+2b-3)
            * Gamma(2(a+b-3)) / ((a(3b-4)-4b+6) * Gamma(a+b-1) * Gamma(a+b))
          )^(2/5)

evaluated entirely in log space. It descends from the MISE-optimal
bandwidth (1/(2n*sqrt(pi)) * I1/I2)^(2/5), where I1 and I2 are the
closed-form roughness integrals of the beta reference density; the
simplified expression must agree with the composition to 1e-10 relative.
Outside the rule's validity region (a,b > 3/2, plus moment feasibility) a
scale-and-shape heuristic h = C(a,b) * n^(-2/5) takes over.

Also here: Silverman's rule for the Gaussian baselines, LSCV optimization
by grid-seeded golden-section search on ln h, and quadrature-based oracle
bandwidths for known true densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .distributions import DistributionSpec
from .errors import (
    DegenerateSampleError,
    DivergenceError,
    DomainError,
    IntegrationError,
    NumericalError,
    OptimizationError,
)
from .kernels import Sample
from .quadrature import QuadratureRule, integrate_split, integrate_unit
from .special import log_gamma

__all__ = [
    "REFERENCE_RULE",
    "FALLBACK_HEURISTIC",
    "SILVERMAN",
    "LSCV",
    "ORACLE_MISE",
    "ORACLE_ISE",
    "BetaParams",
    "MomentSummary",
    "MomInfeasible",
    "BandwidthSelection",
    "mom_estimate",
    "i1_closed",
    "i2_closed",
    "h_ref",
    "beta_central_moments",
    "heuristic_scaling",
    "select_bandwidth",
    "silverman_bandwidth",
    "oracle_bandwidth",
    "lscv_optimize",
    "minimize_log_bandwidth",
]

REFERENCE_RULE = "reference_rule"
FALLBACK_HEURISTIC = "fallback_heuristic"
SILVERMAN = "silverman"
LSCV = "lscv"
ORACLE_MISE = "oracle_mise"
ORACLE_ISE = "oracle_ise"

_LN_SQRT_PI = 0.5 * math.log(math.pi)
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BetaParams:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise DomainError("BetaParams requires a > 0 and b > 0")


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    n: int


@dataclass(frozen=True)
class MomInfeasible:
    """Signal that v >= mean(1-mean): no beta distribution has these moments."""

    moments: MomentSummary


@dataclass(frozen=True)
class BandwidthSelection:
    h: float
    method: str
    used_fallback: bool = False
    params: Optional[BetaParams] = None
    scaling_constant: Optional[float] = None


def mom_estimate(s: Sample):
    """Method-of-moments Beta(a,b) fit from the sample mean and the n-1
    variance; returns MomInfeasible when the moment constraint fails."""
    if s.n < 2:
        raise DegenerateSampleError("method of moments needs n >= 2")
    mean = float(np.mean(s.values))
    var = float(np.var(s.values, ddof=1))
    if var == 0.0:
        raise DegenerateSampleError("constant sample: zero variance")
    cap = mean * (1.0 - mean)
    if var >= cap:
        return MomInfeasible(MomentSummary(mean, var, s.n))
    factor = cap / var - 1.0
    return BetaParams(mean * factor, (1.0 - mean) * factor)


def i1_closed(p: BetaParams) -> float:
    """I1 = integral of f/sqrt(x(1-x)) for the Beta(a,b) density:
    (a+b-1) * Gamma(a-1/2)Gamma(b-1/2) / (Gamma(a)Gamma(b)). Valid a,b > 1/2."""
    a, b = p.a, p.b
    if not (a > 0.5 and b > 0.5):
        raise DomainError("i1_closed requires a > 1/2 and b > 1/2")
    log_val = log_gamma(a - 0.5) + log_gamma(b - 0.5) - log_gamma(a) - log_gamma(b)
    return (a + b - 1.0) * math.exp(log_val)


def i2_closed(p: BetaParams) -> float:
    """I2 = integral of (x(1-x)f''(x))^2 for the Beta(a,b) density.

    (a-1)(b-1)(a(3b-4)-4b+6) Gamma(2a-3)Gamma(2b-3)Gamma(a+b)^2
    / ((2a+2b-5)(2a+2b-3) Gamma(a)^2 Gamma(b)^2 Gamma(2a+2b-6)),
    valid a,b > 3/2; polynomial factors stay outside the logs to keep
    their signs explicit.
    """
    a, b = p.a, p.b
    if not (a > 1.5 and b > 1.5):
        raise DomainError("i2_closed requires a > 3/2 and b > 3/2")
    poly = (a - 1.0) * (b - 1.0) * (a * (3.0 * b - 4.0) - 4.0 * b + 6.0)
    log_val = (
        log_gamma(2.0 * a - 3.0)
        + log_gamma(2.0 * b - 3.0)
        + 2.0 * log_gamma(a + b)
        - 2.0 * log_gamma(a)
        - 2.0 * log_gamma(b)
        - log_gamma(2.0 * a + 2.0 * b - 6.0)
    )
    return poly * math.exp(log_val) / ((2.0 * a + 2.0 * b - 5.0) * (2.0 * a + 2.0 * b - 3.0))


def h_ref(p: BetaParams, n: int) -> float:
    """The closed-form reference-rule bandwidth, log-space throughout."""
    a, b = p.a, p.b
    if not (a > 1.5 and b > 1.5):
        raise DomainError("h_ref requires a > 3/2 and b > 3/2")
    if n < 1:
        raise DomainError("h_ref requires n >= 1")
    poly = a * (3.0 * b - 4.0) - 4.0 * b + 6.0
    if poly <= 0.0:
        raise NumericalError(f"nonpositive factor a(3b-4)-4b+6 = {poly} at (a,b)=({a},{b})")
    log_inner = (
        _LN_SQRT_PI
        - math.log(n)
        + math.log(2.0 * a - 3.0)
        + math.log(2.0 * b - 3.0)
        + (5.0 - 2.0 * a - 2.0 * b) * _LN2
        + math.log(2.0 * a + 2.0 * b - 5.0)
        + math.log(2.0 * a + 2.0 * b - 3.0)
        + log_gamma(2.0 * (a + b - 3.0))
        - math.log(poly)
        - log_gamma(a + b - 1.0)
        - log_gamma(a + b)
    )
    return math.exp(0.4 * log_inner)


def beta_central_moments(p: BetaParams, kurtosis_mode: str = "standard"):
    """(variance, skewness, excess kurtosis) of Beta(a,b).

    The default mode uses the standard excess-kurtosis formula with the
    (a-b)^2 term; `paper_printed` substitutes (a+b)^2, reproducing a variant
    in circulation whose value at (1,1) is +2.4 instead of the true -1.2.
    """
    a, b = p.a, p.b
    s = a + b
    variance = a * b / (s * s * (s + 1.0))
    skewness = 2.0 * (b - a) * math.sqrt(s + 1.0) / ((s + 2.0) * math.sqrt(a * b))
    if kurtosis_mode == "standard":
        top = (a - b) ** 2
    elif kurtosis_mode == "paper_printed":
        top = (a + b) ** 2
    else:
        raise ValueError(f"unknown kurtosis_mode {kurtosis_mode!r}")
    excess_kurtosis = (
        6.0 * (top * (s + 1.0) - a * b * (s + 2.0)) / (a * b * (s + 2.0) * (s + 3.0))
    )
    return variance, skewness, excess_kurtosis


def heuristic_scaling(p: BetaParams, kurtosis_mode: str = "standard") -> float:
    """C(a,b) = sqrt(variance) / (1 + |skewness| + |excess kurtosis|)."""
    variance, skewness, kurtosis = beta_central_moments(p, kurtosis_mode)
    return math.sqrt(variance) / (1.0 + abs(skewness) + abs(kurtosis))


def select_bandwidth(s: Sample, kurtosis_mode: str = "standard") -> BandwidthSelection:
    """Reference-rule bandwidth with the heuristic fallback.

    Method-of-moments fit; when both fitted shapes exceed 3/2 the closed
    form applies, otherwise h = C(a,b) * n^(-2/5). An infeasible moment fit
    (variance at or above the Bernoulli bound) is clamped to (0.5, 0.5)
    before the fallback, the maximal-U-shape reference.
    """
    fitted = mom_estimate(s)
    if isinstance(fitted, MomInfeasible):
        params = BetaParams(0.5, 0.5)
    else:
        params = fitted
    if params.a > 1.5 and params.b > 1.5:
        return BandwidthSelection(
            h=h_ref(params, s.n),
            method=REFERENCE_RULE,
            used_fallback=False,
            params=params,
        )
    c = heuristic_scaling(params, kurtosis_mode)
    return BandwidthSelection(
        h=c * s.n ** (-0.4),
        method=FALLBACK_HEURISTIC,
        used_fallback=True,
        params=params,
        scaling_constant=c,
    )


def silverman_bandwidth(values) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5) on whatever scale `values` live."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise DegenerateSampleError("Silverman's rule needs n >= 2")
    sd = float(np.std(v, ddof=1))
    q25, q75 = np.quantile(v, [0.25, 0.75])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0.0:
        raise DegenerateSampleError("zero spread: Silverman's rule undefined")
    return 0.9 * spread * v.size ** (-0.2)


def _integrate_mirrored(
    dist: DistributionSpec,
    integrand: Callable[[DistributionSpec, np.ndarray], np.ndarray],
    rule: Optional[QuadratureRule],
) -> float:
    """Integrate `integrand(dist, x)` over (0,1).

    With no rule given, each half interval is integrated on tanh-sinh nodes
    with the right half parameterized through the mirrored distribution, so
    endpoint singularities are resolved far below machine epsilon and a
    failed convergence check surfaces as DivergenceError.
    """
    if rule is not None:
        return integrate_unit(lambda x: integrand(dist, x), rule)
    mirrored = dist.mirror()
    return integrate_split(
        lambda x: integrand(dist, x),
        lambda u: integrand(mirrored, u),
    )


def _i1_integrand(dist, x):
    return dist.pdf(x) / np.sqrt(x * (1.0 - x))


def _h2_integrand(dist, x):
    with np.errstate(over="ignore", invalid="ignore"):
        return (x * (1.0 - x) * dist.second_derivative(x)) ** 2


def _h1_integrand(dist, x):
    with np.errstate(over="ignore", invalid="ignore"):
        core = (1.0 - 2.0 * x) * dist.first_derivative(x) + 0.5 * x * (
            1.0 - x
        ) * dist.second_derivative(x)
        return core**2


def oracle_bandwidth(
    dist: DistributionSpec,
    n: int,
    variant: str = "h2",
    rule: Optional[QuadratureRule] = None,
) -> float:
    """MISE-optimal bandwidth computed from the true density by quadrature.

    h2 (for the boundary-kernel estimator):
        ((1/(2n*sqrt(pi))) * int f/sqrt(x(1-x)) / int (x(1-x)f'')^2)^(2/5)
    h1 (for the interior-kernel estimator): the same numerator over
        4 * int ((1-2x)f' + x(1-x)f''/2)^2.

    Divergent denominators (the "hard" densities) raise DivergenceError.
    """
    if n < 1:
        raise DomainError("oracle_bandwidth requires n >= 1")
    if variant not in ("h1", "h2"):
        raise DomainError(f"variant must be 'h1' or 'h2', got {variant!r}")
    try:
        i1 = _integrate_mirrored(dist, _i1_integrand, rule)
        if variant == "h2":
            denom = _integrate_mirrored(dist, _h2_integrand, rule)
        else:
            denom = 4.0 * _integrate_mirrored(dist, _h1_integrand, rule)
    except IntegrationError as exc:
        raise DivergenceError(f"oracle integral diverges: {exc}") from exc
    if not (np.isfinite(i1) and np.isfinite(denom)) or denom <= 0.0:
        raise DivergenceError(
            f"oracle integrals not usable (numerator {i1}, denominator {denom})"
        )
    inner = i1 / (2.0 * n * math.sqrt(math.pi) * denom)
    return inner**0.4


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_log_bandwidth(
    objective: Callable[[float], float],
    h_lo: float,
    h_hi: float,
    grid_points: int = 20,
    tol: float = 1e-3,
) -> Tuple[float, float]:
    """Minimize objective(h) over [h_lo, h_hi] on a log scale.

    A `grid_points`-point log-uniform scan picks the best finite value; its
    two neighbors bracket a golden-section search on ln h, run to absolute
    width `tol` (relative width in h). Deterministic. Returns (h, value).
    """
    if not (0.0 < h_lo < h_hi):
        raise OptimizationError("invalid bracket: need 0 < h_lo < h_hi")
    grid = np.geomspace(h_lo, h_hi, grid_points)
    values = np.array([objective(float(g)) for g in grid], dtype=float)
    finite = np.isfinite(values)
    if not np.any(finite):
        raise OptimizationError("objective nonfinite across the entire bandwidth grid")
    best = int(np.argmin(np.where(finite, values, np.inf)))
    lo = math.log(grid[max(best - 1, 0)])
    hi = math.log(grid[min(best + 1, grid_points - 1)])

    best_h, best_val = float(grid[best]), float(values[best])
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc = objective(math.exp(c))
    fd = objective(math.exp(d))
    while hi - lo > tol:
        if fc <= fd or not np.isfinite(fd):
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = objective(math.exp(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = objective(math.exp(d))
    for u, fu in ((c, fc), (d, fd)):
        if np.isfinite(fu) and fu < best_val:
            best_h, best_val = math.exp(u), float(fu)
    return best_h, best_val


def lscv_optimize(
    s: Sample,
    family: str,
    bracket: Tuple[float, float],
    rule: Optional[QuadratureRule] = None,
    mode: str = "exact_loo",
    clip_epsilon: float = 1e-6,
) -> BandwidthSelection:
    """Least-squares cross-validation bandwidth for the given family."""
    from .metrics import lscv_score
    from .quadrature import make_rule

    if rule is None:
        rule = make_rule(16, 32)
    h_lo, h_hi = bracket

    def objective(h: float) -> float:
        try:
            return lscv_score(s, family, h, rule, mode=mode, clip_epsilon=clip_epsilon)
        except (IntegrationError, NumericalError):
            return math.inf

    h, _ = minimize_log_bandwidth(objective, h_lo, h_hi)
    return BandwidthSelection(h=h, method=LSCV, used_fallback=False)
