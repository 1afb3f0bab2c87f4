"""Exact bivariate order-statistic distributions: marginals, the DP joint
CDF against its multinomial oracle, the conditional representation and the
quadrature reconstruction identity."""

import math

import numpy as np
import pytest

from bivos import (
    Comonotone,
    Countermonotone,
    DomainError,
    FGM,
    Independence,
    NonDifferentiableError,
    OrderStatSpec,
    ResourceLimitError,
    conditional_cdf,
    default_zoo,
    joint_cdf,
    joint_cdf_bruteforce,
    joint_cdf_grid,
    marginal_cdf,
    marginal_density,
    parse_copula,
    reconstruct_joint,
)

INTERIOR = np.linspace(0.05, 0.95, 21)


# ---------------------------------------------------------------------------
# marginals
# ---------------------------------------------------------------------------


def test_marginal_cdf_examples():
    for x in (0.0, 0.25, 0.8, 1.0):
        assert marginal_cdf(1, 1, x) == pytest.approx(x, abs=1e-15)
    assert marginal_cdf(2, 2, 0.5) == pytest.approx(0.25, abs=1e-15)
    # frozen binomial sum: P(Bin(3, 1/2) >= 2) = (3 + 1)/8
    assert marginal_cdf(3, 2, 0.5) == pytest.approx(0.5, abs=1e-15)


def test_marginal_density_examples():
    for y in (0.1, 0.5, 0.9):
        assert marginal_density(1, 1, y) == pytest.approx(1.0, abs=1e-12)
    assert marginal_density(2, 2, 0.5) == pytest.approx(1.0, abs=1e-12)
    # 5 * binom(4, 2) * 0.5^4 = 30/16
    assert marginal_density(5, 3, 0.5) == pytest.approx(1.875, abs=1e-12)


def test_marginal_density_binomial_identity():
    # g(y)/n equals the chance that exactly k-1 of n-1 uniforms fall below y
    from bivos import two_group_pmf

    for n, k in ((5, 3), (8, 1), (8, 8), (12, 7)):
        for y in (0.15, 0.5, 0.85):
            want = two_group_pmf(y, n - 1, 0.0, 0).prob(k - 1)
            assert marginal_density(n, k, y) / n == pytest.approx(want, abs=1e-13)


def test_marginal_density_matches_cdf_derivative():
    for n, k in ((4, 2), (7, 7), (9, 1)):
        for y in (0.2, 0.5, 0.8):
            h = 1e-6
            fd = (marginal_cdf(n, k, y + h) - marginal_cdf(n, k, y - h)) / (2 * h)
            # abs floor covers finite-difference roundoff where the density is tiny
            assert marginal_density(n, k, y) == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_marginal_validation():
    with pytest.raises(DomainError):
        marginal_cdf(3, 0, 0.5)
    with pytest.raises(DomainError):
        marginal_cdf(3, 4, 0.5)
    with pytest.raises(DomainError):
        marginal_cdf(3, 2, 1.5)
    with pytest.raises(DomainError):
        marginal_density(3, 2, 0.0)
    with pytest.raises(DomainError):
        marginal_density(3, 2, 1.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        OrderStatSpec(0, 1, 1)
    with pytest.raises(DomainError):
        OrderStatSpec(3, 0, 1)
    with pytest.raises(DomainError):
        OrderStatSpec(3, 1, 4)


# ---------------------------------------------------------------------------
# joint CDF: examples and oracle equivalence
# ---------------------------------------------------------------------------


def test_joint_cdf_independence_factorizes():
    for n, m, k in ((3, 1, 1), (5, 3, 2), (8, 8, 1)):
        spec = OrderStatSpec(n, m, k)
        for x in (0.2, 0.6):
            for y in (0.4, 0.9):
                want = marginal_cdf(n, m, x) * marginal_cdf(n, k, y)
                assert joint_cdf(Independence(), spec, x, y) == pytest.approx(want, abs=1e-13)


def test_joint_cdf_comonotone_examples():
    assert joint_cdf(Comonotone(), OrderStatSpec(1, 1, 1), 0.3, 0.7) == pytest.approx(0.3, abs=1e-14)
    assert joint_cdf(Comonotone(), OrderStatSpec(2, 2, 2), 0.5, 0.5) == pytest.approx(0.25, abs=1e-14)


def test_bruteforce_examples():
    assert joint_cdf_bruteforce(Independence(), OrderStatSpec(3, 1, 1), 0.5, 0.5) == pytest.approx(
        0.765625, abs=1e-15
    )
    assert joint_cdf_bruteforce(Comonotone(), OrderStatSpec(2, 2, 2), 0.5, 0.5) == pytest.approx(
        0.25, abs=1e-15
    )


def test_dp_matches_bruteforce_random_cases():
    rng = np.random.default_rng(42)
    for copula in default_zoo():
        for _ in range(8):
            n = int(rng.integers(1, 11))
            spec = OrderStatSpec(n, int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1)))
            x = float(rng.uniform())
            y = float(rng.uniform())
            a = joint_cdf(copula, spec, x, y)
            b = joint_cdf_bruteforce(copula, spec, x, y)
            assert a == pytest.approx(b, abs=1e-12), (copula.spec, spec, x, y)


def test_dp_matches_bruteforce_all_ranks():
    # every (m, k) spec for a few n, on a small interior grid
    pts = (0.25, 0.5, 0.75)
    for copula in default_zoo():
        for n in (2, 5, 8):
            for m in range(1, n + 1):
                for k in range(1, n + 1):
                    spec = OrderStatSpec(n, m, k)
                    for x in pts:
                        for y in pts:
                            a = joint_cdf(copula, spec, x, y)
                            b = joint_cdf_bruteforce(copula, spec, x, y)
                            assert abs(a - b) <= 1e-12, (copula.spec, spec, x, y)


def test_joint_cdf_grid_matches_scalar():
    copula = parse_copula("clayton:2")
    spec = OrderStatSpec(7, 5, 2)
    xs = np.array([0.1, 0.4, 0.9])
    ys = np.array([0.2, 0.7])
    grid = joint_cdf_grid(copula, spec, xs, ys)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            assert grid[i, j] == pytest.approx(joint_cdf(copula, spec, float(x), float(y)), abs=1e-14)


def test_joint_cdf_resource_limits():
    spec = OrderStatSpec(513, 1, 1)
    with pytest.raises(ResourceLimitError):
        joint_cdf(Independence(), spec, 0.5, 0.5)
    with pytest.raises(ResourceLimitError):
        joint_cdf_bruteforce(Independence(), OrderStatSpec(13, 1, 1), 0.5, 0.5)
    # a raised limit admits larger n
    assert joint_cdf(Independence(), spec, 0.5, 0.5, dp_limit=513) == pytest.approx(
        marginal_cdf(513, 1, 0.5) * marginal_cdf(513, 1, 0.5), abs=1e-12
    )


def test_countermonotone_closed_form():
    # {V_{n-r+1:n} <= y} = {U_{r:n} >= 1-y}, so the joint CDF collapses to a
    # difference of marginal CDF values.
    c = Countermonotone()
    for n, r in ((5, 2), (8, 5), (11, 11)):
        spec = OrderStatSpec(n, r, n - r + 1)
        for x in INTERIOR[::4]:
            for y in INTERIOR[::4]:
                want = max(0.0, marginal_cdf(n, r, float(x)) - marginal_cdf(n, r, float(1 - y)))
                got = joint_cdf(c, spec, float(x), float(y))
                assert got == pytest.approx(want, abs=1e-10)


def test_reflection_identity():
    # joint survival of (U_{r:n}, V_{k:n}) at (x, y) equals the reflected
    # copula's joint CDF at (1-x, 1-y) with ranks (n-r+1, n-k+1)
    rng = np.random.default_rng(3)
    for copula in (Independence(), Comonotone(), Countermonotone(), FGM(-0.5)):
        reflected = copula.reflected()
        for _ in range(5):
            n = int(rng.integers(2, 9))
            r = int(rng.integers(1, n + 1))
            k = int(rng.integers(1, n + 1))
            x = float(rng.uniform(0.05, 0.95))
            y = float(rng.uniform(0.05, 0.95))
            h = joint_cdf(copula, OrderStatSpec(n, r, k), x, y)
            survival = (
                1.0 - marginal_cdf(n, r, x) - marginal_cdf(n, k, y) + h
            )
            mirrored = joint_cdf(
                reflected, OrderStatSpec(n, n - r + 1, n - k + 1), 1.0 - x, 1.0 - y
            )
            assert survival == pytest.approx(mirrored, abs=1e-10)


# ---------------------------------------------------------------------------
# conditional CDF
# ---------------------------------------------------------------------------


def test_conditional_independence_collapses_to_marginal():
    for n, m, k in ((4, 2, 3), (9, 9, 1), (6, 1, 6)):
        spec = OrderStatSpec(n, m, k)
        for x in (0.25, 0.7):
            for y in (0.3, 0.8):
                assert conditional_cdf(Independence(), spec, x, y) == pytest.approx(
                    marginal_cdf(n, m, x), abs=1e-13
                )


def test_conditional_m_k_n_closed_form():
    for copula in default_zoo():
        for n in (2, 5, 10):
            spec = OrderStatSpec(n, n, n)
            for x in (0.3, 0.6):
                for y in (0.45, 0.85):
                    if not copula.partial_v_defined(x, y):
                        continue
                    want = copula.partial_v(x, y) * (copula.cdf(x, y) / y) ** (n - 1)
                    assert conditional_cdf(copula, spec, x, y) == pytest.approx(want, abs=1e-12)


def test_conditional_monotone_in_x_and_bounded():
    for copula in default_zoo():
        spec = OrderStatSpec(6, 3, 4)
        for y in (0.35, 0.65):
            xs = [x for x in INTERIOR if copula.partial_v_defined(float(x), y)]
            vals = [conditional_cdf(copula, spec, float(x), y) for x in xs]
            assert all(0.0 <= v <= 1.0 for v in vals)
            assert all(b - a >= -1e-10 for a, b in zip(vals, vals[1:]))


def test_conditional_rejects_kinks_and_bad_y():
    spec = OrderStatSpec(4, 2, 2)
    with pytest.raises(NonDifferentiableError):
        conditional_cdf(Comonotone(), spec, 0.5, 0.5)
    with pytest.raises(NonDifferentiableError):
        conditional_cdf(Countermonotone(), spec, 0.3, 0.7)
    with pytest.raises(DomainError):
        conditional_cdf(Independence(), spec, 0.5, 0.0)
    with pytest.raises(DomainError):
        conditional_cdf(Independence(), spec, 0.5, 1.0)


# ---------------------------------------------------------------------------
# reconstruction identity
# ---------------------------------------------------------------------------


def test_reconstruct_examples():
    assert reconstruct_joint(Independence(), OrderStatSpec(3, 2, 2), 0.5, 1.0) == pytest.approx(
        marginal_cdf(3, 2, 0.5), abs=1e-8
    )
    assert reconstruct_joint(Comonotone(), OrderStatSpec(2, 2, 2), 0.5, 0.5) == pytest.approx(
        0.25, abs=1e-8
    )
    spec = OrderStatSpec(6, 3, 4)
    copula = parse_copula("clayton:2")
    assert reconstruct_joint(copula, spec, 0.3, 0.7) == pytest.approx(
        joint_cdf(copula, spec, 0.3, 0.7), abs=1e-8
    )


def test_reconstruct_matches_joint_random_cases():
    rng = np.random.default_rng(17)
    for copula in default_zoo():
        for _ in range(4):
            n = int(rng.integers(2, 9))
            spec = OrderStatSpec(n, int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1)))
            x = float(rng.uniform(0.1, 0.9))
            y = float(rng.uniform(0.1, 0.95))
            want = joint_cdf(copula, spec, x, y)
            got = reconstruct_joint(copula, spec, x, y)
            assert got == pytest.approx(want, abs=1e-8), (copula.spec, spec, x, y)


def test_reconstruct_validation():
    with pytest.raises(DomainError):
        reconstruct_joint(Independence(), OrderStatSpec(3, 2, 2), 0.5, 0.0)
