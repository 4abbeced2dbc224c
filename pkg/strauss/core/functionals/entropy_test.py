import math

import numpy as np
import pytest

from strauss.core.domain.errors import DomainError
from strauss.core.domain.graphon import StepGraphon
from strauss.core.functionals.entropy import (
    bernoulli_kl,
    bernoulli_kl_deviation,
    excess_entropy,
    graphon_entropy,
    h_entropy,
)


class TestHEntropy:
    @pytest.mark.parametrize(
        ("u", "order", "expected"),
        [
            (0.5, 0, math.log(2)),
            (0.5, 1, 0.0),
            (0.5, 2, -4.0),
            (0.0, 0, 0.0),
            (1.0, 0, 0.0),
            (0.1, 0, -(0.1 * math.log(0.1) + 0.9 * math.log(0.9))),
            (0.1, 1, math.log(9)),
        ],
    )
    def test_values(self, u: float, order: int, expected: float):
        assert h_entropy(u, order) == pytest.approx(expected, abs=1e-15)  # pyright: ignore [reportArgumentType]

    @pytest.mark.parametrize(("u", "order"), [(1.5, 0), (-0.1, 0), (0.0, 1), (1.0, 1), (0.0, 2), (1.0, 2)])
    def test_domain_errors(self, u: float, order: int):
        with pytest.raises(DomainError):
            h_entropy(u, order)  # pyright: ignore [reportArgumentType]

    def test_grazing_argument_is_clamped(self):
        assert h_entropy(1 + 1e-13) == 0.0

    def test_vectorized(self):
        out = h_entropy(np.array([0.0, 0.5, 1.0]))
        assert isinstance(out, np.ndarray)
        assert out.tolist() == pytest.approx([0.0, math.log(2), 0.0])

    @pytest.mark.parametrize("u", [0.01, 0.2, 0.7])
    def test_derivatives_match_finite_differences(self, u: float):
        h = 1e-5
        assert h_entropy(u, 1) == pytest.approx((h_entropy(u + h) - h_entropy(u - h)) / (2 * h), rel=1e-6)
        assert h_entropy(u, 2) == pytest.approx((h_entropy(u + h, 1) - h_entropy(u - h, 1)) / (2 * h), rel=1e-6)


class TestBernoulliKL:
    def test_zero_at_reference(self):
        assert bernoulli_kl(0.3, 0.3) == 0.0

    def test_endpoints(self):
        assert bernoulli_kl(0.0, 0.2) == pytest.approx(-math.log(0.8))
        assert bernoulli_kl(1.0, 0.2) == pytest.approx(-math.log(0.2))

    def test_invalid_reference(self):
        with pytest.raises(DomainError):
            bernoulli_kl(0.3, 0.0)

    def test_second_order(self):
        # KL(p+x ‖ p) ≈ −½H″(p)x²
        assert bernoulli_kl(0.2 + 1e-4, 0.2) == pytest.approx(-0.5 * h_entropy(0.2, 2) * 1e-8, rel=1e-3)


class TestBernoulliKLDeviation:
    @pytest.mark.parametrize("x", [-0.25, -0.01, 0.0, 1e-3, 0.3, 0.7])
    def test_matches_kl(self, x: float):
        assert bernoulli_kl_deviation(x, 0.3) == pytest.approx(bernoulli_kl(0.3 + x, 0.3), rel=1e-12, abs=1e-300)

    def test_tiny_deviation_keeps_relative_accuracy(self):
        p, x = 0.3, 1e-9
        # The cubic term is O(x) relative to the quadratic one
        assert bernoulli_kl_deviation(x, p) == pytest.approx(x**2 / (2 * p * (1 - p)), rel=1e-8, abs=0)
        assert bernoulli_kl_deviation(-x, p) == pytest.approx(x**2 / (2 * p * (1 - p)), rel=1e-8, abs=0)

    def test_continuous_across_series_switch(self):
        p = 0.4
        inside, outside = bernoulli_kl_deviation(0.04 * (1 - 1e-12), p), bernoulli_kl_deviation(0.04 * (1 + 1e-12), p)
        assert inside == pytest.approx(outside, rel=1e-10)

    def test_array(self):
        x = np.array([[-0.1, 0.0], [0.05, 0.2]])
        out = bernoulli_kl_deviation(x, 0.2)
        assert out.shape == (2, 2)
        assert out[1, 0] == pytest.approx(bernoulli_kl_deviation(0.05, 0.2), rel=1e-15)

    def test_leaves_unit_interval(self):
        with pytest.raises(DomainError):
            bernoulli_kl_deviation(-0.3, 0.2)


def test_graphon_entropy_constant():
    assert graphon_entropy(StepGraphon.constant(0.5)) == pytest.approx(math.log(2), abs=1e-15)


def test_graphon_entropy_bipodal():
    e, d = 0.1, 0.05
    g = StepGraphon(sizes=[0.5, 0.5], values=[[e - d, e + d], [e + d, e - d]])
    assert graphon_entropy(g) == pytest.approx(0.5 * (h_entropy(e + d) + h_entropy(e - d)), abs=1e-15)


def test_excess_entropy_matches_difference():
    e, d = 0.3, 0.1
    g = StepGraphon(sizes=[0.5, 0.5], values=[[e - d, e + d], [e + d, e - d]])
    assert excess_entropy(g, e) == pytest.approx(graphon_entropy(g) - h_entropy(e), abs=1e-15)


def test_excess_entropy_near_constant():
    e, d = 0.2, 1e-5
    g = StepGraphon(sizes=[0.5, 0.5], values=[[e - d, e + d], [e + d, e - d]])
    # Leading term ½H″(e)δ², the next one is O(δ⁴)
    assert excess_entropy(g, e) == pytest.approx(0.5 * h_entropy(e, 2) * d**2, rel=1e-5)
