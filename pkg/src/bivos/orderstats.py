"""Exact finite-sample distributions of componentwise bivariate order
statistics.

The joint CDF P(U_{m:n} <= x, V_{k:n} <= y) is the probability that, out of
n iid points classified into the four quadrants cut by (x, y), at least m
fall left of x and at least k below y.  It is computed by an exact dynamic
program over capped counts; a multinomial brute-force oracle (n <= 12) and a
quadrature reconstruction from the conditional CDF provide two independent
cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .copulas import Copula
from .discrete import two_group_pmf
from .errors import DomainError, NonDifferentiableError, ResourceLimitError
from .quadrature import adaptive_simpson

__all__ = [
    "OrderStatSpec",
    "DEFAULT_DP_LIMIT",
    "BRUTEFORCE_LIMIT",
    "marginal_cdf",
    "marginal_density",
    "joint_cdf",
    "joint_cdf_grid",
    "joint_cdf_bruteforce",
    "conditional_cdf",
    "reconstruct_joint",
]

#: largest n the O(n^3) dynamic program accepts by default
DEFAULT_DP_LIMIT = 512

#: largest n the multinomial brute-force oracle accepts
BRUTEFORCE_LIMIT = 12


@dataclass(frozen=True)
class OrderStatSpec:
    """Identifies the pair (U_{m:n}, V_{k:n})."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("sample size n must be >= 1")
        if not 1 <= self.m <= self.n:
            raise DomainError(f"rank m={self.m} outside 1..{self.n}")
        if not 1 <= self.k <= self.n:
            raise DomainError(f"rank k={self.k} outside 1..{self.n}")


def _check_rank(n: int, r: int) -> None:
    if n < 1:
        raise DomainError("sample size n must be >= 1")
    if not 1 <= r <= n:
        raise DomainError(f"rank {r} outside 1..{n}")


def _check_prob(x, name: str) -> float:
    p = float(x)
    if not (np.isfinite(p) and 0.0 <= p <= 1.0):
        raise DomainError(f"{name}={x!r} is not a probability")
    return p


def marginal_cdf(n: int, m: int, x: float) -> float:
    """P(U_{m:n} <= x) = P(Binomial(n, x) >= m), via the regularized
    incomplete beta function I_x(m, n-m+1)."""
    _check_rank(n, m)
    x = _check_prob(x, "x")
    return float(special.betainc(m, n - m + 1, x))


def marginal_density(n: int, k: int, y: float) -> float:
    """Density of V_{k:n} at y in (0, 1):
    g(y) = n binom(n-1, k-1) y^(k-1) (1-y)^(n-k)."""
    _check_rank(n, k)
    y = float(y)
    if not (np.isfinite(y) and 0.0 < y < 1.0):
        raise DomainError(f"y={y!r} outside the open interval (0, 1)")
    log_g = (
        math.log(n)
        + math.lgamma(n)
        - math.lgamma(k)
        - math.lgamma(n - k + 1)
        + (k - 1) * math.log(y)
        + (n - k) * math.log1p(-y)
    )
    return math.exp(log_g)


def _bump(table: np.ndarray, axis: int) -> np.ndarray:
    """Shift a capped-count axis up by one; mass at the cap stays there."""
    out = np.zeros_like(table)
    src = [slice(None)] * table.ndim
    dst = [slice(None)] * table.ndim
    src[axis] = slice(None, -1)
    dst[axis] = slice(1, None)
    out[tuple(dst)] = table[tuple(src)]
    top = [slice(None)] * table.ndim
    top[axis] = -1
    out[tuple(top)] += table[tuple(top)]
    return out


def _dp_tail_prob(p1, p2, p3, p4, n: int, m: int, k: int) -> np.ndarray:
    """P(A >= m, B >= k) for n iid trials with quadrant cell probabilities.

    A counts trials in cells 1 or 2, B counts trials in cells 1 or 3; cell
    probabilities may be arrays of a common shape G and the result has shape
    G.  Each margin is tracked through whichever of the success count or the
    miss count is smaller, so the table never exceeds
    (min(m, n-m+1)+1) x (min(k, n-k+1)+1).
    """
    p1, p2, p3, p4 = np.broadcast_arrays(
        np.asarray(p1, float), np.asarray(p2, float), np.asarray(p3, float), np.asarray(p4, float)
    )
    shape = p1.shape
    flip_a = m > n - m + 1
    flip_b = k > n - k + 1
    if flip_a:
        p1, p2, p3, p4 = p3, p4, p1, p2
    if flip_b:
        p1, p2, p3, p4 = p2, p1, p4, p3
    ta = (n - m + 1) if flip_a else m
    tb = (n - k + 1) if flip_b else k

    c1 = p1[..., None, None]
    c2 = p2[..., None, None]
    c3 = p3[..., None, None]
    c4 = p4[..., None, None]
    table = np.zeros(shape + (ta + 1, tb + 1))
    table[..., 0, 0] = 1.0
    for _ in range(n):
        up_b = _bump(table, -1)
        table = c1 * _bump(up_b, -2) + c2 * _bump(table, -2) + c3 * up_b + c4 * table

    if not flip_a and not flip_b:
        out = table[..., ta, tb]
    elif flip_a and not flip_b:
        out = table[..., :ta, tb].sum(axis=-1)
    elif not flip_a and flip_b:
        out = table[..., ta, :tb].sum(axis=-1)
    else:
        out = table[..., :ta, :tb].sum(axis=(-2, -1))
    return np.clip(out, 0.0, 1.0)


def joint_cdf(
    copula: Copula, spec: OrderStatSpec, x: float, y: float, dp_limit: int = DEFAULT_DP_LIMIT
) -> float:
    """P(U_{m:n} <= x, V_{k:n} <= y) by the exact dynamic program."""
    if spec.n > dp_limit:
        raise ResourceLimitError(f"n={spec.n} exceeds the DP limit {dp_limit}")
    cells = copula.cell_probs(x, y)
    out = _dp_tail_prob(cells.p1, cells.p2, cells.p3, cells.p4, spec.n, spec.m, spec.k)
    return float(out)


def joint_cdf_grid(
    copula: Copula, spec: OrderStatSpec, xs, ys, dp_limit: int = DEFAULT_DP_LIMIT
) -> np.ndarray:
    """Joint CDF on the product grid xs x ys, as one batched DP sweep.

    Returns an array of shape (len(xs), len(ys)).
    """
    if spec.n > dp_limit:
        raise ResourceLimitError(f"n={spec.n} exceeds the DP limit {dp_limit}")
    xs = np.asarray([_check_prob(x, "x") for x in np.atleast_1d(xs)])
    ys = np.asarray([_check_prob(y, "y") for y in np.atleast_1d(ys)])
    gx = xs[:, None]
    gy = ys[None, :]
    c = copula.cdf(gx, gy)
    p1 = np.clip(c, 0.0, 1.0)
    p2 = np.clip(gx - c, 0.0, 1.0)
    p3 = np.clip(gy - c, 0.0, 1.0)
    p4 = np.clip(1.0 - gx - gy + c, 0.0, 1.0)
    return _dp_tail_prob(p1, p2, p3, p4, spec.n, spec.m, spec.k)


def joint_cdf_bruteforce(copula: Copula, spec: OrderStatSpec, x: float, y: float) -> float:
    """Brute-force oracle: direct multinomial sum over all quadrant
    compositions a+b+c+d = n with a+b >= m and a+c >= k.  Limited to
    n <= 12."""
    if spec.n > BRUTEFORCE_LIMIT:
        raise ResourceLimitError(f"n={spec.n} exceeds the brute-force limit {BRUTEFORCE_LIMIT}")
    cells = copula.cell_probs(x, y)
    p1, p2, p3, p4 = cells.as_tuple()
    n, m, k = spec.n, spec.m, spec.k
    total = 0.0
    for a in range(n + 1):
        for b in range(n - a + 1):
            if a + b < m:
                continue
            for c in range(n - a - b + 1):
                if a + c < k:
                    continue
                d = n - a - b - c
                coeff = math.comb(n, a) * math.comb(n - a, b) * math.comb(n - a - b, c)
                total += coeff * p1**a * p2**b * p3**c * p4**d
    return min(total, 1.0)


def conditional_cdf(copula: Copula, spec: OrderStatSpec, x: float, y: float) -> float:
    """P(U_{m:n} <= x | V_{k:n} = y).

    The conditional law is a linear combination of two tail probabilities of
    a sum of two independent binomial groups: k-1 draws from the conditional
    law of U given V <= y and n-k draws from the law of U given V > y,

        P = P(S >= m) + dC(x, y)/dy * P(S = m-1).

    Requires y in (0, 1) at a point where the partial derivative exists.
    """
    x = _check_prob(x, "x")
    y = float(y)
    if not (np.isfinite(y) and 0.0 < y < 1.0):
        raise DomainError(f"conditioning point y={y!r} outside (0, 1)")
    if not copula.partial_v_defined(x, y):
        raise NonDifferentiableError(
            f"dC/dv undefined at (x={x}, y={y}) for {copula.spec}; the conditional "
            "law only exists almost everywhere"
        )
    q1 = copula.cond_cdf_given_le(x, y)
    q2 = copula.cond_cdf_given_gt(x, y)
    pmf = two_group_pmf(q1, spec.k - 1, q2, spec.n - spec.k)
    value = pmf.tail_ge(spec.m) + copula.partial_v(x, y) * pmf.prob(spec.m - 1)
    return min(max(value, 0.0), 1.0)


def reconstruct_joint(
    copula: Copula,
    spec: OrderStatSpec,
    x: float,
    y: float,
    tol: float = 1e-9,
    max_subdivisions: int = 20000,
    dp_limit: int = DEFAULT_DP_LIMIT,
) -> float:
    """Rebuild P(U_{m:n} <= x, V_{k:n} <= y) by disintegrating over V_{k:n}:

        integral over t in (0, y) of P(U_{m:n} <= x | V_{k:n} = t) g(t) dt,

    with g the density of V_{k:n}.  Agreement with :func:`joint_cdf` is the
    executable statement that the conditional representation is correct.
    """
    if spec.n > dp_limit:
        raise ResourceLimitError(f"n={spec.n} exceeds the DP limit {dp_limit}")
    x = _check_prob(x, "x")
    y = float(y)
    if not (np.isfinite(y) and 0.0 < y <= 1.0):
        raise DomainError(f"upper limit y={y!r} outside (0, 1]")

    # Split at the copula's derivative discontinuities: within each piece the
    # integrand is smooth, which adaptive Simpson's error estimate requires.
    cuts = sorted(t for t in copula.partial_v_breakpoints(x) if 0.0 < t < y)
    edges = [0.0] + cuts + [y]
    eps = 1e-12
    piece_tol = tol / (len(edges) - 1)

    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        if hi - lo <= 4.0 * eps:
            continue  # sliver next to a breakpoint; mass below tolerance

        def integrand(t: float, lo: float = lo, hi: float = hi) -> float:
            # evaluate strictly inside the piece (and inside (0, 1))
            ts = min(max(t, lo + eps, eps), hi - eps, 1.0 - eps)
            return conditional_cdf(copula, spec, x, ts) * marginal_density(spec.n, spec.k, ts)

        value, _ = adaptive_simpson(
            integrand, lo, hi, tol=piece_tol, max_subdivisions=max_subdivisions
        )
        total += value
    return min(max(total, 0.0), 1.0)
