"""Beta kernel density estimators and the Gaussian baseline families.

The two beta estimators place a beta kernel at every evaluation point x:

  f1:  shapes (x/h + 1, (1-x)/h + 1)
  f2:  shapes from a three-branch boundary kernel K* that swaps one shape
       for rho(x,h) = 2h^2 + 2.5 - sqrt(4h^4 + 6h^2 + 2.25 - x^2 - x/h)
       inside the boundary strips x < 2h and x > 1-2h.

The baselines are a Gaussian KDE on logit-transformed data (back-transformed
with the 1/(x(1-x)) Jacobian) and a Gaussian KDE with single reflections of
the data across both endpoints.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln, logit

from .errors import ConfigurationError, DomainError, NumericalError
from .quadrature import QuadratureRule, integrate_unit

__all__ = [
    "BETA_F1",
    "BETA_F2",
    "GAUSS_LOGIT",
    "GAUSS_REFLECT",
    "FAMILIES",
    "Sample",
    "DensityModel",
    "rho",
    "kernel_shape_params",
    "make_model",
    "point_contributions",
    "evaluate",
    "evaluate_f1",
    "evaluate_f2",
    "evaluate_logit",
    "evaluate_reflection",
    "total_mass",
    "normalize",
]

BETA_F1 = "beta_f1"
BETA_F2 = "beta_f2"
GAUSS_LOGIT = "gauss_logit"
GAUSS_REFLECT = "gauss_reflect"
FAMILIES = (BETA_F1, BETA_F2, GAUSS_LOGIT, GAUSS_REFLECT)

_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Sample:
    """An ordered sequence of observations in [0,1].

    Order is preserved as given: the identity of observation i matters for
    leave-one-out computations.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise DomainError("Sample requires a one-dimensional, nonempty sequence")
        if np.any(np.isnan(v)) or np.any(v < 0.0) or np.any(v > 1.0):
            raise DomainError("Sample values must lie in [0,1]")
        object.__setattr__(self, "values", v)
        v.flags.writeable = False

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class DensityModel:
    family: str
    data: Sample
    h: float
    normalization: Optional[float] = None
    clip_epsilon: float = 1e-6


def make_model(
    family: str,
    data: Sample,
    h: float,
    normalization: Optional[float] = None,
    clip_epsilon: float = 1e-6,
) -> DensityModel:
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}")
    if not (np.isfinite(h) and h > 0.0):
        raise ConfigurationError("bandwidth h must be positive and finite")
    if family == BETA_F2 and h >= 0.25:
        raise ConfigurationError(
            "beta_f2 requires h < 1/4 so the three boundary-kernel branches "
            "partition [0,1]"
        )
    if family == GAUSS_LOGIT and not (0.0 < clip_epsilon <= 0.01):
        raise ConfigurationError("clip_epsilon must lie in (0, 0.01]")
    if normalization is not None and not normalization > 0.0:
        raise ConfigurationError("normalization must be positive")
    return DensityModel(family, data, float(h), normalization, float(clip_epsilon))


def rho(x, h: float):
    """Boundary shape parameter for the K* kernel, used on the strip x < 2h.

    rho(0,h) = 1 and rho(2h,h) = 2 exactly: the radicand is the perfect
    square (2h^2+1.5)^2 at x=0 and (2h^2+0.5)^2 at x=2h, so the boundary
    branch joins the interior branch (x/h = 2) continuously.
    """
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    if not h > 0.0:
        raise DomainError("h must be positive")
    if np.any(x < 0.0) or np.any(x > 2.0 * h):
        raise DomainError("rho requires 0 <= x <= 2h")
    radicand = 4.0 * h**4 + 6.0 * h * h + 2.25 - x * x - x / h
    if np.any(radicand < 0.0):
        raise DomainError("negative radicand in rho: inconsistent x/h")
    out = 2.0 * h * h + 2.5 - np.sqrt(radicand)
    return float(out) if scalar else out


def kernel_shape_params(x, h: float):
    """Shape parameters (p,q) of the K* boundary kernel at each x.

    Interior branch (x/h, (1-x)/h) on [2h, 1-2h]; the left strip swaps p for
    rho(x,h), the right strip swaps q for rho(1-x,h). Requires h < 1/4 so the
    branches are disjoint and nonempty.
    """
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    if not 0.0 < h < 0.25:
        raise ConfigurationError("kernel_shape_params requires 0 < h < 1/4")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("x must lie in [0,1]")
    p = x / h
    q = (1.0 - x) / h
    left = x < 2.0 * h
    right = x > 1.0 - 2.0 * h
    if np.any(left):
        p = np.where(left, _rho_unchecked(np.where(left, x, 0.0), h), p)
    if np.any(right):
        q = np.where(right, _rho_unchecked(np.where(right, 1.0 - x, 0.0), h), q)
    if scalar:
        return float(p), float(q)
    return p, q


def _rho_unchecked(x, h):
    radicand = 4.0 * h**4 + 6.0 * h * h + 2.25 - x * x - x / h
    return 2.0 * h * h + 2.5 - np.sqrt(radicand)


def _beta_kernel_matrix(t: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """exp of the beta log-density of each data point t_j under the kernel
    shapes (p_i, q_i) of each evaluation point; shape (len(p), len(t)).

    Same endpoint conventions as special.beta_log_pdf (0*ln0 := 0); the
    normalizing log-beta depends only on the evaluation point, so it is
    computed once per row rather than per matrix entry.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        log_t = np.log(t)
        log_1mt = np.log1p(-t)
        left = np.where(
            (p[:, None] == 1.0), 0.0, (p[:, None] - 1.0) * log_t[None, :]
        )
        right = np.where(
            (q[:, None] == 1.0), 0.0, (q[:, None] - 1.0) * log_1mt[None, :]
        )
    log_norm = gammaln(p) + gammaln(q) - gammaln(p + q)
    return np.exp(left + right - log_norm[:, None])


def point_contributions(model: DensityModel, x) -> np.ndarray:
    """Matrix C with C[i,j] = contribution of data point j at evaluation
    point x_i, before averaging: the model density is mean_j C[i,j] divided
    by the normalization constant when present.

    This is the building block for exact leave-one-out: dropping point j
    means dropping column j and averaging over n-1.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("evaluation points must lie in [0,1]")
    t = model.data.values
    h = model.h

    if model.family == BETA_F1:
        p = x / h + 1.0
        q = (1.0 - x) / h + 1.0
        return _beta_kernel_matrix(t, p, q)

    if model.family == BETA_F2:
        p, q = kernel_shape_params(x, h)
        return _beta_kernel_matrix(t, np.atleast_1d(p), np.atleast_1d(q))

    if model.family == GAUSS_REFLECT:
        d0 = x[:, None] - t[None, :]
        d1 = x[:, None] + t[None, :]
        d2 = 2.0 - x[:, None] - t[None, :]
        z = (
            np.exp(-0.5 * (d0 / h) ** 2)
            + np.exp(-0.5 * (d1 / h) ** 2)
            + np.exp(-0.5 * (d2 / h) ** 2)
        )
        return z / (h * _SQRT2PI)

    if model.family == GAUSS_LOGIT:
        eps = model.clip_epsilon
        xc = np.clip(x, eps, 1.0 - eps)
        y = logit(np.clip(t, eps, 1.0 - eps))
        yx = logit(xc)
        z = np.exp(-0.5 * ((yx[:, None] - y[None, :]) / h) ** 2) / (h * _SQRT2PI)
        return z / (xc * (1.0 - xc))[:, None]

    raise ConfigurationError(f"unknown family {model.family!r}")


def evaluate(model: DensityModel, x):
    """Model density at x (scalar or array)."""
    scalar = np.isscalar(x)
    out = point_contributions(model, x).mean(axis=1)
    if model.normalization is not None:
        out = out / model.normalization
    return float(out[0]) if scalar else out


def _family_evaluator(family):
    def _eval(model: DensityModel, x):
        if model.family != family:
            raise ConfigurationError(f"model family is {model.family!r}, not {family!r}")
        return evaluate(model, x)

    return _eval


evaluate_f1 = _family_evaluator(BETA_F1)
evaluate_f2 = _family_evaluator(BETA_F2)
evaluate_logit = _family_evaluator(GAUSS_LOGIT)
evaluate_reflection = _family_evaluator(GAUSS_REFLECT)


def total_mass(model: DensityModel, rule: QuadratureRule) -> float:
    return integrate_unit(lambda x: evaluate(model, x), rule)


def normalize(model: DensityModel, rule: QuadratureRule) -> DensityModel:
    """Copy of the model with the normalization divisor set so its total
    mass is 1; idempotent."""
    mass = total_mass(model, rule)
    if not (np.isfinite(mass) and mass > 0.0):
        raise NumericalError(f"cannot normalize: total mass {mass}")
    base = model.normalization if model.normalization is not None else 1.0
    return dataclasses.replace(model, normalization=base * mass)
