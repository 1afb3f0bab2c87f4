"""Poisson-binomial engine tests against exhaustive enumeration."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from bivos import (
    DegenerateVarianceError,
    DiscretePmf,
    DomainError,
    normal_tail_approx,
    poisson_binomial_pmf,
    tail_ge,
    two_group_pmf,
)
from oracles import exhaustive_pmf

probs_list = st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=0, max_size=10)


def test_pmf_examples():
    assert poisson_binomial_pmf([]).weights.tolist() == [1.0]
    assert poisson_binomial_pmf([0.5, 0.5]).weights == pytest.approx([0.25, 0.5, 0.25], abs=1e-15)
    # frozen from the 2^2 enumeration: (0.9*0.1, 0.1*0.1 + 0.9*0.9, 0.1*0.9)
    assert poisson_binomial_pmf([0.1, 0.9]).weights == pytest.approx([0.09, 0.82, 0.09], abs=1e-15)


def test_two_group_examples():
    pmf = two_group_pmf(0.3, 5, 0.3, 7)
    assert pmf.weights == pytest.approx(stats.binom.pmf(np.arange(13), 12, 0.3), abs=1e-14)
    assert two_group_pmf(0.9, 0, 0.5, 2).weights == pytest.approx([0.25, 0.5, 0.25], abs=1e-15)
    # frozen from the 2^3 enumeration of two Bernoulli(0.2) and one Bernoulli(0.8)
    assert two_group_pmf(0.2, 2, 0.8, 1).weights == pytest.approx(
        [0.128, 0.576, 0.264, 0.032], abs=1e-15
    )


def test_tail_examples():
    pmf = DiscretePmf(np.array([0.25, 0.5, 0.25]))
    assert tail_ge(pmf, 0) == 1.0
    assert tail_ge(pmf, -3) == 1.0
    assert tail_ge(pmf, 2) == pytest.approx(0.25, abs=1e-15)
    assert tail_ge(pmf, 3) == 0.0
    assert tail_ge(poisson_binomial_pmf([0.1, 0.9]), 1) == pytest.approx(0.91, abs=1e-15)


@given(probs=probs_list)
def test_pmf_matches_enumeration(probs):
    got = poisson_binomial_pmf(probs).weights
    want = exhaustive_pmf(probs)
    assert np.max(np.abs(got - want)) <= 1e-12


@given(probs=probs_list)
def test_pmf_moments(probs):
    w = poisson_binomial_pmf(probs).weights
    support = np.arange(w.size)
    mean = float(support @ w)
    var = float((support - mean) ** 2 @ w)
    ps = np.asarray(probs, dtype=float)
    assert mean == pytest.approx(ps.sum(), abs=1e-10)
    assert var == pytest.approx((ps * (1 - ps)).sum(), abs=1e-9)


@given(
    q1=st.floats(min_value=0.0, max_value=1.0),
    n1=st.integers(min_value=0, max_value=12),
    q2=st.floats(min_value=0.0, max_value=1.0),
    n2=st.integers(min_value=0, max_value=12),
)
def test_two_group_matches_poisson_binomial(q1, n1, q2, n2):
    got = two_group_pmf(q1, n1, q2, n2).weights
    want = poisson_binomial_pmf([q1] * n1 + [q2] * n2).weights
    assert np.max(np.abs(got - want)) <= 1e-12


@given(
    q=st.floats(min_value=1e-9, max_value=1.0 - 1e-9),
    n1=st.integers(min_value=0, max_value=15),
    n2=st.integers(min_value=0, max_value=15),
)
def test_two_group_equal_rates_collapse(q, n1, n2):
    # scipy's binom.pmf is the oracle; it is fragile at extreme q, hence the
    # restricted range (endpoints covered below)
    got = two_group_pmf(q, n1, q, n2).weights
    want = stats.binom.pmf(np.arange(n1 + n2 + 1), n1 + n2, q)
    assert np.max(np.abs(got - want)) <= 1e-12


def test_two_group_degenerate_rates():
    assert two_group_pmf(0.0, 3, 0.0, 2).weights.tolist() == [1.0, 0, 0, 0, 0, 0]
    assert two_group_pmf(1.0, 2, 1.0, 1).weights.tolist() == [0, 0, 0, 1.0]
    assert two_group_pmf(1.0, 2, 0.0, 2).prob(2) == 1.0


@given(probs=probs_list, m=st.integers(min_value=-2, max_value=12))
def test_tail_monotone(probs, m):
    pmf = poisson_binomial_pmf(probs)
    assert pmf.tail_ge(m) + 1e-15 >= pmf.tail_ge(m + 1)
    assert pmf.tail_ge(0) == 1.0


def test_prob_outside_support_is_zero():
    pmf = poisson_binomial_pmf([0.5])
    assert pmf.prob(-1) == 0.0
    assert pmf.prob(2) == 0.0
    assert pmf.prob(1) == 0.5


def test_normal_tail_approx_examples():
    # symmetric case: mu = 10.5, so m = 11 = mu + 0.5 lands on Phi(0)
    assert normal_tail_approx(0.5, 21, 0.5, 0, 11) == pytest.approx(0.5, abs=1e-15)
    exact = two_group_pmf(0.5, 10_000, 0.5, 0).tail_ge(5000)
    approx = normal_tail_approx(0.5, 10_000, 0.5, 0, 5000)
    assert approx == pytest.approx(exact, abs=0.01)
    # deep tail: mu = 5000, sigma = 50, m <= 0 is > 100 sigma in
    assert normal_tail_approx(0.5, 10_000, 0.5, 0, 0) >= 0.999


def test_degenerate_variance_raises():
    with pytest.raises(DegenerateVarianceError):
        normal_tail_approx(0.0, 5, 1.0, 5, 3)


def test_validation_errors():
    with pytest.raises(DomainError):
        poisson_binomial_pmf([0.5, 1.2])
    with pytest.raises(DomainError):
        poisson_binomial_pmf([-0.1])
    with pytest.raises(DomainError):
        two_group_pmf(0.5, -1, 0.5, 2)
    with pytest.raises(DomainError):
        two_group_pmf(1.5, 1, 0.5, 2)
    with pytest.raises(DomainError):
        DiscretePmf(np.array([0.5, 0.4]))  # mass 0.9
    with pytest.raises(DomainError):
        DiscretePmf(np.array([1.1, -0.1]))  # negative beyond tolerance


def test_reads_clamp_tiny_negatives():
    pmf = DiscretePmf(np.array([1.0 + 5e-16, -5e-16]))
    assert pmf.prob(1) == 0.0
    assert pmf.tail_ge(1) == 0.0
