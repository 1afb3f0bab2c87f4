"""Exact distributions of sums of independent Bernoulli variables.

The Poisson-binomial pmf is computed by the stable forward recursion that
adds one Bernoulli at a time; the two-group variant convolves two binomial
pmfs so the two routes stay independent of each other and can be
cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DegenerateVarianceError, DomainError

__all__ = [
    "DiscretePmf",
    "poisson_binomial_pmf",
    "two_group_pmf",
    "tail_ge",
    "normal_tail_approx",
]


@dataclass(frozen=True)
class DiscretePmf:
    """A finite probability mass function on {0, ..., n}.

    Weights may carry tiny negative values from floating-point cancellation;
    they are validated to be >= -1e-15 and clamped to 0 when stored, and the
    total mass must be 1 within 1e-10.
    """

    weights: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.weights, dtype=float)
        if raw.ndim != 1 or raw.size == 0:
            raise DomainError("pmf weights must be a non-empty 1-d vector")
        if raw.min() < -1e-15:
            raise DomainError(f"pmf weight below tolerance: {raw.min()}")
        total = math.fsum(raw.tolist())
        if not (1.0 - 1e-10 <= total <= 1.0 + 1e-10):
            raise DomainError(f"pmf mass {total} is not 1 within 1e-10")
        clamped = np.maximum(raw, 0.0)
        clamped.flags.writeable = False
        object.__setattr__(self, "weights", clamped)

    @property
    def n(self) -> int:
        """Largest supported value."""
        return self.weights.size - 1

    def prob(self, i: int) -> float:
        """P(S = i); zero outside {0, ..., n}."""
        if 0 <= i <= self.n:
            return float(self.weights[i])
        return 0.0

    def tail_ge(self, m: int) -> float:
        """P(S >= m), accumulated from the small-mass end of the tail."""
        if m <= 0:
            return 1.0
        if m > self.n:
            return 0.0
        total = 0.0
        for i in range(self.n, m - 1, -1):
            total += float(self.weights[i])
        return min(total, 1.0)


def _check_prob(p: float, name: str) -> float:
    q = float(p)
    if not (np.isfinite(q) and 0.0 <= q <= 1.0):
        raise DomainError(f"{name}={p!r} is not a probability")
    return q


def poisson_binomial_pmf(probs) -> DiscretePmf:
    """Pmf of a sum of independent Bernoulli(p_i) variables.

    Parameters
    ----------
    probs : sequence of float
        Success probabilities, each in [0, 1].  May be empty, in which case
        the sum is identically 0.
    """
    ps = [_check_prob(p, "probs entry") for p in np.atleast_1d(np.asarray(probs, dtype=float))]
    w = np.zeros(len(ps) + 1)
    w[0] = 1.0
    filled = 0
    for p in ps:
        head = w[: filled + 1]
        shifted = head * p
        w[: filled + 1] = head * (1.0 - p)
        w[1 : filled + 2] += shifted
        filled += 1
    return DiscretePmf(w)


def _binomial_pmf(n: int, q: float) -> np.ndarray:
    # log-space evaluation; robust for q arbitrarily close to 0 or 1
    if n == 0:
        return np.array([1.0])
    w = np.zeros(n + 1)
    if q == 0.0:
        w[0] = 1.0
        return w
    if q == 1.0:
        w[n] = 1.0
        return w
    i = np.arange(n + 1)
    log_coeff = special.gammaln(n + 1) - special.gammaln(i + 1) - special.gammaln(n - i + 1)
    return np.exp(log_coeff + i * np.log(q) + (n - i) * np.log1p(-q))


def two_group_pmf(q1: float, n1: int, q2: float, n2: int) -> DiscretePmf:
    """Pmf of Binomial(n1, q1) + Binomial(n2, q2), by direct convolution.

    Agrees with :func:`poisson_binomial_pmf` on the concatenated probability
    vector within 1e-12 per entry, but takes an independent route (log-space
    binomial terms rather than the forward recursion).
    """
    q1 = _check_prob(q1, "q1")
    q2 = _check_prob(q2, "q2")
    if n1 < 0 or n2 < 0:
        raise DomainError("group sizes must be >= 0")
    return DiscretePmf(np.convolve(_binomial_pmf(n1, q1), _binomial_pmf(n2, q2)))


def tail_ge(pmf: DiscretePmf, m: int) -> float:
    """P(S >= m) for a :class:`DiscretePmf`; 1 for m <= 0, 0 for m > n."""
    return pmf.tail_ge(m)


def normal_tail_approx(q1: float, n1: int, q2: float, n2: int, m: int) -> float:
    """Continuity-corrected normal approximation of the two-group tail.

    Returns Phi((mu - m + 0.5) / sigma) with mu and sigma^2 the exact mean
    and variance of Binomial(n1, q1) + Binomial(n2, q2).  An approximation
    mode only; exact computations never route through it.
    """
    q1 = _check_prob(q1, "q1")
    q2 = _check_prob(q2, "q2")
    if n1 < 0 or n2 < 0:
        raise DomainError("group sizes must be >= 0")
    var = n1 * q1 * (1.0 - q1) + n2 * q2 * (1.0 - q2)
    if var <= 0.0:
        raise DegenerateVarianceError("two-group sum has zero variance")
    mu = n1 * q1 + n2 * q2
    z = (mu - m + 0.5) / math.sqrt(var)
    return 0.5 * math.erfc(-z / math.sqrt(2.0))
