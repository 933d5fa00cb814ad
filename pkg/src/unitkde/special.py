"""Log-space special functions used by every beta-density evaluation.

All gamma-function products in the library are assembled as sums of
``log_gamma`` values and exponentiated once at the end, which keeps the
large shape parameters produced by small bandwidths out of overflow range.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .errors import DomainError

__all__ = ["log_gamma", "log_beta", "beta_log_pdf"]


def log_gamma(z):
    """Natural log of the gamma function for z > 0.

    Accepts scalars or arrays. Relative error is at the 1e-15 level across
    [1e-3, 1e4], well inside the 1e-12 contract.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)) or np.any(z <= 0.0):
        raise DomainError(f"log_gamma requires z > 0, got {z!r}")
    out = _sp.gammaln(z)
    return float(out) if out.ndim == 0 else out


def log_beta(a, b):
    """ln B(a,b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b), for a, b > 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    bad = np.isnan(a) | np.isnan(b) | (a <= 0.0) | (b <= 0.0)
    if np.any(bad):
        raise DomainError("log_beta requires a > 0 and b > 0")
    out = _sp.gammaln(a) + _sp.gammaln(b) - _sp.gammaln(a + b)
    return float(out) if out.ndim == 0 else out


def beta_log_pdf(t, a, b):
    """Log density of Beta(a,b) at t in [0,1].

    Uses the 0*ln(0) := 0 convention at the endpoints, so Beta(1,b) and
    Beta(a,1) evaluate finitely at their closed endpoint. When an exponent
    is positive and its base is 0 the result is -inf (density zero); when
    an exponent is negative there the density diverges and +inf is returned.
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainError("beta_log_pdf requires 0 <= t <= 1")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise DomainError("beta_log_pdf requires a > 0 and b > 0")

    a_t, b_t = np.broadcast_arrays(a, b)
    tt, a_t, b_t = np.broadcast_arrays(t, a_t, b_t)
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.where(a_t == 1.0, 0.0, (a_t - 1.0) * np.log(tt))
        right = np.where(b_t == 1.0, 0.0, (b_t - 1.0) * np.log1p(-tt))
    out = left + right - log_beta(a_t, b_t)
    return float(out) if out.ndim == 0 else out
