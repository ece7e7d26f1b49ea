"""Exact distributions of the smallest and largest claim amounts.

For a portfolio of Bernoulli-thinned severities T_i = J_i U_i the extreme of
the first m claims has closed-form survival/CDF products; the random-count
versions are finite mixtures over the count support, with N = m selecting the
FIRST m claims of the ordered portfolio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, SingularityError
from .majorization import ParamMatrix
from .severity import PsiTransform, SeverityFamily

__all__ = [
    "Portfolio",
    "ClaimCountDistribution",
    "ExtremeKind",
    "poisson_counts",
    "counts_st_leq",
    "survival_min_fixed",
    "cdf_min_fixed",
    "cdf_max_fixed",
    "survival_max_fixed",
    "density_min_fixed",
    "density_max_fixed",
    "reversed_hazard_min_fixed",
    "reversed_hazard_max_fixed",
    "survival_min_random",
    "cdf_min_random",
    "cdf_max_random",
    "survival_max_random",
    "density_random",
    "reversed_hazard_random",
    "auto_x_grid",
]


class ExtremeKind(Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Portfolio:
    """An ordered list of (occurrence probability, severity parameter) claims
    sharing one severity family and one psi transform."""

    family: SeverityFamily
    psi: PsiTransform
    p: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        alpha = np.asarray(self.alpha, dtype=float)
        if p.ndim != 1 or alpha.ndim != 1 or p.size != alpha.size or p.size == 0:
            raise DomainError("p and alpha must be 1-d vectors of equal positive length")
        if np.any(p <= 0.0) or np.any(p >= 1.0):
            raise DomainError("occurrence probabilities must lie in (0, 1)")
        if np.any(alpha <= 0.0):
            raise DomainError("severity parameters must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "alpha", alpha)

    @property
    def n(self) -> int:
        return self.p.size

    def psi_values(self) -> np.ndarray:
        return np.asarray(self.psi(self.p), dtype=float)

    def param_matrix(self) -> ParamMatrix:
        return ParamMatrix(self.psi_values(), self.alpha)


@dataclass(frozen=True)
class ClaimCountDistribution:
    """PMF of a positive-integer claim count on a finite support."""

    support: np.ndarray
    weights: np.ndarray
    raw_weights: Optional[np.ndarray] = None

    def __post_init__(self):
        support = np.asarray(self.support, dtype=int)
        weights = np.asarray(self.weights, dtype=float)
        if support.ndim != 1 or support.size == 0:
            raise DomainError("support must be a non-empty 1-d integer vector")
        if np.any(np.diff(support) <= 0) or support[0] < 1:
            raise DomainError("support must be strictly increasing positive integers")
        if weights.shape != support.shape or np.any(weights < 0):
            raise DomainError("weights must be nonnegative and match the support")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise DomainError("weights must sum to 1 (within 1e-12)")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @property
    def max_support(self) -> int:
        return int(self.support[-1])

    def pmf(self, m: int) -> float:
        hits = self.support == m
        return float(self.weights[hits].sum())

    def survival(self, m: int) -> float:
        """P(N > m)."""
        return float(self.weights[self.support > m].sum())

    @staticmethod
    def degenerate(m: int) -> "ClaimCountDistribution":
        return ClaimCountDistribution(np.array([m]), np.array([1.0]))


def poisson_counts(lam: float, support: Sequence[int]) -> ClaimCountDistribution:
    """Poisson(lam) weights restricted to ``support`` and renormalized.

    The raw (unnormalized) Poisson masses are recorded on the result; the
    renormalization is the minimal completion to a probability distribution.
    """
    if lam <= 0:
        raise DomainError("Poisson rate must be positive")
    support = np.asarray(support, dtype=int)
    if support.size == 0:
        raise DomainError("support must be non-empty")
    raw = np.array([math.exp(-lam) * lam**m / math.factorial(m) for m in support])
    return ClaimCountDistribution(support, raw / raw.sum(), raw_weights=raw)


def counts_st_leq(c1: ClaimCountDistribution, c2: ClaimCountDistribution) -> bool:
    """True iff N_1 <=_st N_2, i.e. P(N_1 > m) <= P(N_2 > m) for every m."""
    hi = max(c1.max_support, c2.max_support)
    for m in range(hi + 1):
        if c1.survival(m) > c2.survival(m) + 1e-12:
            return False
    return True


def _check_m(portfolio: Portfolio, m: int) -> int:
    if not 1 <= m <= portfolio.n:
        raise DomainError(f"m={m} out of range 1..{portfolio.n}")
    return int(m)


def _check_counts(portfolio: Portfolio, counts: ClaimCountDistribution):
    if counts.max_support > portfolio.n:
        raise DomainError("count support exceeds portfolio size")


# ---------------------------------------------------------------------------
# fixed m


def log_survival_min_fixed(portfolio: Portfolio, m: int, x):
    """log P(T_{1:m} > x) = sum_i (log p_i + log F-bar(x; alpha_i))."""
    m = _check_m(portfolio, m)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=float)
    for i in range(m):
        total = total + math.log(portfolio.p[i]) + portfolio.family.log_survival(x, portfolio.alpha[i])
    return total


def survival_min_fixed(portfolio: Portfolio, m: int, x):
    return np.exp(log_survival_min_fixed(portfolio, m, x))


def cdf_min_fixed(portfolio: Portfolio, m: int, x):
    return -np.expm1(log_survival_min_fixed(portfolio, m, x))


def cdf_max_fixed(portfolio: Portfolio, m: int, x):
    """P(T_{m:m} <= x) = prod_i (1 - p_i F-bar(x; alpha_i)), via log1p sums."""
    m = _check_m(portfolio, m)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=float)
    for i in range(m):
        s = np.exp(portfolio.family.log_survival(x, portfolio.alpha[i]))
        total = total + np.log1p(-portfolio.p[i] * s)
    return np.exp(total)


def survival_max_fixed(portfolio: Portfolio, m: int, x):
    return 1.0 - cdf_max_fixed(portfolio, m, x)


def reversed_hazard_max_fixed(portfolio: Portfolio, m: int, x):
    """sum_i p_i F-bar r / (1 - p_i F-bar) over the first m claims."""
    m = _check_m(portfolio, m)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=float)
    for i in range(m):
        s = np.exp(portfolio.family.log_survival(x, portfolio.alpha[i]))
        r = portfolio.family.hazard(x, portfolio.alpha[i])
        denom = 1.0 - portfolio.p[i] * s
        if np.any(denom <= 0.0):
            raise SingularityError("1 - p * survival underflowed to 0")
        total = total + portfolio.p[i] * s * r / denom
    return total


def _hazard_sum(portfolio: Portfolio, m: int, x):
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=float)
    for i in range(m):
        total = total + portfolio.family.hazard(x, portfolio.alpha[i])
    return total


def reversed_hazard_min_fixed(portfolio: Portfolio, m: int, x):
    """(F-bar_{T_1:m} / F_{T_1:m}) * sum_i r(x; alpha_i)."""
    m = _check_m(portfolio, m)
    ls = log_survival_min_fixed(portfolio, m, x)
    s = np.exp(ls)
    f = -np.expm1(ls)
    # the atom at 0 has mass 1 - prod p_i > 0, so f > 0 for all x >= 0
    return (s / f) * _hazard_sum(portfolio, m, x)


def density_min_fixed(portfolio: Portfolio, m: int, x):
    """Density of T_{1:m} on x > 0 (excluding the atom at 0)."""
    m = _check_m(portfolio, m)
    return survival_min_fixed(portfolio, m, x) * _hazard_sum(portfolio, m, x)


def density_max_fixed(portfolio: Portfolio, m: int, x):
    """Density of T_{m:m} on x > 0 (excluding the atom at 0)."""
    m = _check_m(portfolio, m)
    return cdf_max_fixed(portfolio, m, x) * reversed_hazard_max_fixed(portfolio, m, x)


# ---------------------------------------------------------------------------
# random N


def _mixture(portfolio: Portfolio, counts: ClaimCountDistribution, fixed_fn, x):
    _check_counts(portfolio, counts)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=float)
    for m, w in zip(counts.support, counts.weights):
        total = total + w * fixed_fn(portfolio, int(m), x)
    return total


def survival_min_random(portfolio: Portfolio, counts: ClaimCountDistribution, x):
    return _mixture(portfolio, counts, survival_min_fixed, x)


def cdf_min_random(portfolio: Portfolio, counts: ClaimCountDistribution, x):
    return _mixture(portfolio, counts, cdf_min_fixed, x)


def cdf_max_random(portfolio: Portfolio, counts: ClaimCountDistribution, x):
    return _mixture(portfolio, counts, cdf_max_fixed, x)


def survival_max_random(portfolio: Portfolio, counts: ClaimCountDistribution, x):
    return 1.0 - cdf_max_random(portfolio, counts, x)


def density_random(portfolio: Portfolio, counts: ClaimCountDistribution, kind: ExtremeKind, x):
    fixed = density_min_fixed if kind is ExtremeKind.MIN else density_max_fixed
    return _mixture(portfolio, counts, fixed, x)


def reversed_hazard_random(portfolio: Portfolio, counts: ClaimCountDistribution, kind: ExtremeKind, x):
    """Mixture reversed hazard: term-wise mixture density over mixture CDF."""
    num = density_random(portfolio, counts, kind, x)
    cdf_fn = cdf_min_random if kind is ExtremeKind.MIN else cdf_max_random
    den = cdf_fn(portfolio, counts, x)
    if np.any(den <= 0.0):
        raise SingularityError("mixture CDF underflowed to 0")
    return num / den


# ---------------------------------------------------------------------------
# grids


def auto_x_grid(
    portfolios: Sequence[Portfolio],
    counts: Sequence[ClaimCountDistribution],
    kind: ExtremeKind,
    points: int = 2000,
    x_min: Optional[float] = None,
    x_max: Optional[float] = None,
    tail_mass: float = 1e-6,
) -> np.ndarray:
    """Geometric + linear hybrid grid covering the atom region and the tail.

    ``x_max`` defaults to the smallest value at which every mixture CDF
    exceeds ``1 - tail_mass`` (for MIN, at which every mixture survival drops
    below ``tail_mass``).
    """
    if x_max is None:
        x_max = 1.0
        for _ in range(80):
            done = True
            for pf, ct in zip(portfolios, counts):
                if kind is ExtremeKind.MAX:
                    ok = cdf_max_random(pf, ct, x_max) >= 1.0 - tail_mass
                else:
                    ok = survival_min_random(pf, ct, x_max) <= tail_mass
                if not ok:
                    done = False
                    break
            if done:
                break
            x_max *= 2.0
    if x_min is None:
        x_min = 1e-4 * x_max
    n_geo = points // 4
    geo = np.geomspace(x_min, x_max / 10.0, n_geo, endpoint=False)
    lin = np.linspace(x_max / 10.0, x_max, points - n_geo)
    return np.concatenate([geo, lin])
