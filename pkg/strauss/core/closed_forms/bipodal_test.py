import math

import pytest

from strauss.core.closed_forms.bipodal import bipodal_entropy, bipodal_excess_entropy, symmetric_bipodal
from strauss.core.domain.errors import DomainError
from strauss.core.functionals.densities import edge_density, triangle_density
from strauss.core.functionals.entropy import graphon_entropy, h_entropy


class TestSymmetricBipodal:
    def test_zero_delta_is_constant(self):
        g = symmetric_bipodal(0.3, 0)
        assert g.values == [[0.3, 0.3], [0.3, 0.3]]

    @pytest.mark.parametrize(("e", "d"), [(0.2, 0.1), (0.3, 0.05), (0.7, 0.3), (0.5, 0.5)])
    def test_densities(self, e: float, d: float):
        g = symmetric_bipodal(e, d)
        assert edge_density(g) == pytest.approx(e, abs=1e-14)
        assert triangle_density(g) == pytest.approx(e**3 - d**3, abs=1e-14)

    def test_triangle_example(self):
        assert triangle_density(symmetric_bipodal(0.2, 0.1)) == pytest.approx(0.007, abs=1e-14)

    @pytest.mark.parametrize(("e", "d"), [(0.2, 0.21), (0.9, 0.2), (0.3, -0.01), (0.0, 0.0), (1.0, 0.0)])
    def test_out_of_range(self, e: float, d: float):
        with pytest.raises(DomainError):
            symmetric_bipodal(e, d)


class TestBipodalEntropy:
    def test_zero_delta(self):
        assert bipodal_entropy(0.1, 0) == h_entropy(0.1)

    def test_fully_polarized(self):
        assert bipodal_entropy(0.5, 0.5) == 0

    def test_example(self):
        assert bipodal_entropy(0.1, 0.05) == pytest.approx(0.5 * (h_entropy(0.15) + h_entropy(0.05)), abs=1e-15)

    @pytest.mark.parametrize(("e", "d"), [(0.1, 0.05), (0.3, 0.2), (0.5, 0.01)])
    def test_matches_generic(self, e: float, d: float):
        assert bipodal_entropy(e, d) == pytest.approx(graphon_entropy(symmetric_bipodal(e, d)), abs=1e-14)

    def test_second_order_expansion(self):
        e = 0.1

        def remainder(d: float) -> float:
            return bipodal_entropy(e, d) - h_entropy(e) - 0.5 * h_entropy(e, 2) * d**2

        # The remainder is about 8e-7 at δ = 0.01
        assert abs(remainder(0.01)) < 1e-6
        # and fourth order in δ
        assert 12 < remainder(0.01) / remainder(0.005) < 20

    def test_excess(self):
        assert bipodal_excess_entropy(0.3, 0.1) == pytest.approx(bipodal_entropy(0.3, 0.1) - h_entropy(0.3), abs=1e-15)
        assert bipodal_excess_entropy(0.3, 0) == 0
        assert bipodal_excess_entropy(0.5, 0.5) == pytest.approx(-math.log(2))
