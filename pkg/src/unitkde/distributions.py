"""Reference and test distributions on [0,1].

Each family supplies the exact pdf, analytic first and second derivatives
(consumed by the oracle-bandwidth integrals), a seeded sampler, boundary
values where finite, and its mirror image under x -> 1-x (used to integrate
right-endpoint singularities as left-endpoint ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import ndtr

from .errors import DomainError
from .kernels import Sample
from .special import beta_log_pdf, log_beta

__all__ = ["DistributionSpec", "Beta", "TruncNormal", "Mixture"]

_SQRT2PI = math.sqrt(2.0 * math.pi)


def _check_open_unit(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise DomainError("density evaluation requires 0 < x < 1")
    return x


class DistributionSpec:
    """Base class; subclasses implement the family-specific pieces."""

    def pdf(self, x):
        raise NotImplementedError

    def first_derivative(self, x):
        raise NotImplementedError

    def second_derivative(self, x):
        raise NotImplementedError

    def mirror(self) -> "DistributionSpec":
        """The distribution of 1-X."""
        raise NotImplementedError

    def boundary_values(self) -> Optional[Tuple[float, float]]:
        """(f(0), f(1)) as limits, or None when either is unbounded."""
        raise NotImplementedError

    def _draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> Sample:
        if n < 1:
            raise ValueError("n must be >= 1")
        return Sample(self._draw(rng, n))


@dataclass(frozen=True)
class Beta(DistributionSpec):
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise DomainError("Beta requires a > 0 and b > 0")

    def pdf(self, x):
        x = _check_open_unit(x)
        with np.errstate(over="ignore"):
            return np.exp(beta_log_pdf(x, self.a, self.b))

    def first_derivative(self, x):
        x = _check_open_unit(x)
        a, b = self.a, self.b
        c = np.exp(-log_beta(a, b))
        with np.errstate(over="ignore"):
            return c * x ** (a - 2.0) * (1.0 - x) ** (b - 2.0) * (
                (a - 1.0) * (1.0 - x) - (b - 1.0) * x
            )

    def second_derivative(self, x):
        x = _check_open_unit(x)
        a, b = self.a, self.b
        c = np.exp(-log_beta(a, b))
        poly = (
            (a - 1.0) * (a - 2.0) * (1.0 - x) ** 2
            - 2.0 * (a - 1.0) * (b - 1.0) * x * (1.0 - x)
            + (b - 1.0) * (b - 2.0) * x ** 2
        )
        # overflow to inf is meaningful here: the oracle integrals detect
        # divergence through nonfinite node values
        with np.errstate(over="ignore", invalid="ignore"):
            return c * x ** (a - 3.0) * (1.0 - x) ** (b - 3.0) * poly

    def mirror(self) -> "Beta":
        return Beta(self.b, self.a)

    def boundary_values(self):
        if self.a < 1.0 or self.b < 1.0:
            return None
        f0 = 0.0 if self.a > 1.0 else self.b
        f1 = 0.0 if self.b > 1.0 else self.a
        return (f0, f1)

    def _draw(self, rng, n):
        # ratio of gamma variates; numpy's standard_gamma is Marsaglia-Tsang
        g1 = rng.standard_gamma(self.a, size=n)
        g2 = rng.standard_gamma(self.b, size=n)
        return g1 / (g1 + g2)


@dataclass(frozen=True)
class TruncNormal(DistributionSpec):
    """Normal(mu, sigma) truncated to [0,1]; (mu, sigma) are the parent
    parameters, before truncation."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError("TruncNormal requires sigma > 0")

    def _z_const(self) -> float:
        return float(ndtr((1.0 - self.mu) / self.sigma) - ndtr(-self.mu / self.sigma))

    def _density(self, x):
        z = (x - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (_SQRT2PI * self.sigma * self._z_const())

    def pdf(self, x):
        return self._density(_check_open_unit(x))

    def first_derivative(self, x):
        x = _check_open_unit(x)
        z = (x - self.mu) / self.sigma
        return self._density(x) * (-z / self.sigma)

    def second_derivative(self, x):
        x = _check_open_unit(x)
        z = (x - self.mu) / self.sigma
        return self._density(x) * (z * z - 1.0) / (self.sigma * self.sigma)

    def mirror(self) -> "TruncNormal":
        return TruncNormal(1.0 - self.mu, self.sigma)

    def boundary_values(self):
        return (float(self._density(0.0)), float(self._density(1.0)))

    def _draw(self, rng, n):
        out = np.empty(n)
        have = 0
        accept = max(self._z_const(), 0.05)
        while have < n:
            need = n - have
            batch = rng.normal(self.mu, self.sigma, size=int(need / accept) + 8)
            kept = batch[(batch >= 0.0) & (batch <= 1.0)]
            take = min(need, kept.size)
            out[have : have + take] = kept[:take]
            have += take
        return out


@dataclass(frozen=True)
class Mixture(DistributionSpec):
    weights: Tuple[float, ...]
    components: Tuple[DistributionSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.weights) != len(self.components) or not self.components:
            raise DomainError("Mixture needs matching weights and components")
        if any(w <= 0.0 for w in self.weights):
            raise DomainError("Mixture weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise DomainError("Mixture weights must sum to 1")

    def _combine(self, x, attr):
        parts = [getattr(c, attr)(x) for c in self.components]
        return sum(w * p for w, p in zip(self.weights, parts))

    def pdf(self, x):
        return self._combine(x, "pdf")

    def first_derivative(self, x):
        return self._combine(x, "first_derivative")

    def second_derivative(self, x):
        return self._combine(x, "second_derivative")

    def mirror(self) -> "Mixture":
        return Mixture(self.weights, tuple(c.mirror() for c in self.components))

    def boundary_values(self):
        pieces = [c.boundary_values() for c in self.components]
        if any(p is None for p in pieces):
            return None
        f0 = sum(w * p[0] for w, p in zip(self.weights, pieces))
        f1 = sum(w * p[1] for w, p in zip(self.weights, pieces))
        return (float(f0), float(f1))

    def _draw(self, rng, n):
        idx = rng.choice(len(self.components), size=n, p=np.asarray(self.weights))
        out = np.empty(n)
        for k, comp in enumerate(self.components):
            mask = idx == k
            cnt = int(mask.sum())
            if cnt:
                out[mask] = comp._draw(rng, cnt)
        return out
