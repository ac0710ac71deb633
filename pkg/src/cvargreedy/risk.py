"""Empirical value-at-risk / conditional value-at-risk estimators and the
scalarized objective used by the tau sweep.

Conventions for a sample v_(1) <= ... <= v_(n) and risk level alpha in (0, 1]:

* var   = v_(ceil(alpha*n)), the smallest value whose empirical CDF reaches alpha.
* cvar  = (sum_{i<k} v_(i) + (alpha*n - (k-1)) * v_(k)) / (alpha*n) with
  k = ceil(alpha*n). The boundary order statistic is fractionally weighted so
  that maximizing the scalarized objective over tau recovers cvar exactly on
  finite samples, with the maximum attained at tau = var.
* auxiliary(tau) = tau - mean(max(tau - v, 0)) / alpha, concave in tau.

alpha = 1 is the risk-neutral case: cvar reduces to the sample mean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# ceil(alpha*n) is computed with a small backoff so float noise in alpha*n
# (e.g. 0.07*100 == 7.000000000000001) cannot push the index up by one.
_INDEX_TOL = 1e-9


def check_risk_level(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"risk level must lie in (0, 1], got {alpha}")
    return alpha


def required_sample_count(epsilon: float, delta: float) -> int:
    """Samples sufficient for cvar error below epsilon with confidence 1 - delta."""
    if not 0.0 < epsilon:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(math.log(1.0 / delta) / (epsilon * epsilon))


def _values(sample) -> np.ndarray:
    values = np.asarray(getattr(sample, "values", sample), dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("a nonempty 1-d value sample is required")
    return values


def _tail_index(alpha: float, n: int) -> int:
    k = math.ceil(alpha * n - _INDEX_TOL)
    return min(max(k, 1), n)


@dataclass(frozen=True)
class UtilitySample:
    """Nonnegative per-scenario utilities of one set, with optional provenance."""

    values: np.ndarray
    source: tuple | None = None

    def __post_init__(self) -> None:
        values = _values(self.values)
        if np.any(values < 0):
            raise ValueError("utilities must be nonnegative")
        object.__setattr__(self, "values", values)


def utility_sample(objective, subset, scenarios) -> UtilitySample:
    subset = objective.ground.check_subset(subset)
    return UtilitySample(objective.utilities(subset, scenarios),
                         source=(subset, scenarios.seed))


def empirical_var(sample, alpha: float) -> float:
    """Left endpoint of the alpha-quantile of the sample."""
    values = _values(sample)
    alpha = check_risk_level(alpha)
    v = np.sort(values)
    return float(v[_tail_index(alpha, v.size) - 1])


def empirical_cvar(sample, alpha: float) -> float:
    """Mean of the worst alpha-fraction of the sample (fractional tail weighting)."""
    values = _values(sample)
    alpha = check_risk_level(alpha)
    v = np.sort(values)
    n = v.size
    k = _tail_index(alpha, n)
    mass = alpha * n
    # shifted form of (sum_{i<k} v_i + (mass - (k-1)) * v_k) / mass: exact on
    # constant samples and never exceeds the var order statistic v_k
    return float(v[k - 1] + np.sum(v[: k - 1] - v[k - 1]) / mass)


def auxiliary_from_values(values, tau: float, alpha: float) -> float:
    """tau minus the normalized expected shortfall of the sample below tau.

    np.sum's pairwise accumulation keeps the hinge sum stable for large
    batches, which the concavity and slope checks rely on.
    """
    values = _values(values)
    alpha = check_risk_level(alpha)
    tau = float(tau)
    if tau < 0:
        raise ValueError(f"threshold tau must be nonnegative, got {tau}")
    hinge = np.maximum(tau - values, 0.0)
    return float(tau - np.sum(hinge) / (alpha * values.size))


def auxiliary_value(objective, subset, tau: float, scenarios, alpha: float) -> float:
    """Scalarized objective of one (set, tau) pair on a scenario batch."""
    subset = objective.ground.check_subset(subset)
    return auxiliary_from_values(objective.utilities(subset, scenarios), tau, alpha)


def cvar_of_set(objective, subset, scenarios, alpha: float) -> tuple[float, float]:
    """(empirical cvar, maximizing tau) for one set; the tau is the empirical var."""
    subset = objective.ground.check_subset(subset)
    u = objective.utilities(subset, scenarios)
    return empirical_cvar(u, alpha), empirical_var(u, alpha)
