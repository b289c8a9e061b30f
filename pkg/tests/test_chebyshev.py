import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebtuck.chebyshev import (
    ChebGrid,
    Interval,
    affine_map,
    cheb_nodes,
    interpolate_1d,
    inverse_map,
    lebesgue_estimate,
    s_matrix,
    s_vector,
    subsample_indices,
)


class TestNodes:
    def test_single_node_is_zero(self):
        np.testing.assert_allclose(cheb_nodes(1), [0.0], atol=1e-16)

    def test_two_nodes(self):
        np.testing.assert_allclose(
            cheb_nodes(2), [np.sqrt(2) / 2, -np.sqrt(2) / 2], atol=1e-15
        )

    def test_nested_3_in_9(self):
        coarse = cheb_nodes(3)
        fine = cheb_nodes(9)
        # k-th coarse node is the (3k-1)-th fine node (1-based)
        for k in (1, 2, 3):
            assert abs(coarse[k - 1] - fine[3 * k - 1 - 1]) <= 1e-15

    def test_descending_and_interior(self):
        for n in (1, 2, 5, 40):
            nodes = cheb_nodes(n)
            assert np.all(np.diff(nodes) < 0) or n == 1
            assert np.all(np.abs(nodes) < 1.0)

    def test_zero_nodes_rejected(self):
        with pytest.raises(ValueError):
            cheb_nodes(0)


class TestAffineMap:
    def test_endpoints(self):
        iv = Interval(0.0, 2.0)
        assert affine_map(iv, -1.0) == 0.0
        assert affine_map(iv, 1.0) == 2.0

    def test_reference_interval_is_identity(self):
        iv = Interval(-1.0, 1.0)
        xs = np.linspace(-1, 1, 11)
        np.testing.assert_allclose(affine_map(iv, xs), xs, atol=1e-16)

    @settings(max_examples=100, derandomize=True)
    @given(st.floats(-1, 1))
    def test_round_trip(self, x):
        iv = Interval(-2.5, 7.0)
        assert abs(inverse_map(iv, affine_map(iv, x)) - x) < 1e-15

    def test_degenerate_interval_rejected(self):
        with pytest.raises(ValueError):
            Interval(1.0, 1.0)


class TestSVector:
    @pytest.mark.parametrize("n", [1, 2, 3, 8, 27, 64, 100])
    def test_cardinality(self, n):
        grid = ChebGrid(Interval(-1.0, 1.0), n)
        s_at_nodes = s_matrix(grid, grid.nodes)
        assert np.max(np.abs(s_at_nodes - np.eye(n))) <= 1e-11

    @settings(max_examples=60, derandomize=True)
    @given(st.floats(-3.0, 5.0))
    def test_partition_of_unity(self, x):
        grid = ChebGrid(Interval(-3.0, 5.0), 30)
        assert abs(s_vector(grid, x).sum() - 1.0) <= 1e-12

    def test_n1_is_constant_one(self):
        grid = ChebGrid(Interval(0.0, 1.0), 1)
        for x in (0.0, 0.3, 1.0):
            np.testing.assert_array_equal(s_vector(grid, x), [1.0])


class TestInterpolate1D:
    def test_cubic_reproduced(self):
        grid = ChebGrid(Interval(-1.0, 1.0), 4)
        fvals = grid.nodes**3
        xs = np.random.default_rng(0).uniform(-1, 1, 50)
        for x in xs:
            assert abs(interpolate_1d(grid, fvals, x) - x**3) <= 1e-13

    def test_constant(self):
        grid = ChebGrid(Interval(2.0, 3.0), 7)
        for x in np.linspace(2, 3, 9):
            assert interpolate_1d(grid, np.full(7, 7.0), x) == pytest.approx(7.0)

    def test_exp_on_16_nodes(self):
        grid = ChebGrid(Interval(-1.0, 1.0), 16)
        fvals = np.exp(grid.nodes)
        xs = np.linspace(-1, 1, 201)
        approx = s_matrix(grid, xs) @ fvals
        assert np.max(np.abs(approx - np.exp(xs))) < 1e-12

    def test_polynomial_exactness_mapped(self):
        # any polynomial of degree <= n-1 on a mapped interval
        rng = np.random.default_rng(1)
        iv = Interval(1.0, 4.0)
        for n in (3, 9, 17):
            grid = ChebGrid(iv, n)
            coeffs = rng.standard_normal(n)
            poly = np.polynomial.Polynomial(coeffs)
            fvals = poly(grid.nodes)
            xs = np.linspace(iv.lo, iv.hi, 40)
            approx = s_matrix(grid, xs) @ fvals
            exact = poly(xs)
            scale = np.max(np.abs(exact))
            assert np.max(np.abs(approx - exact)) <= 1e-12 * max(scale, 1.0)

    def test_length_mismatch(self):
        grid = ChebGrid(Interval(-1.0, 1.0), 4)
        with pytest.raises(ValueError):
            interpolate_1d(grid, np.zeros(5), 0.0)


class TestSubsample:
    def test_n9_one_level(self):
        assert subsample_indices(9, 1).indices == (2, 5, 8)

    def test_n27_two_levels(self):
        assert subsample_indices(27, 2).indices == (5, 14, 23)

    def test_n3_one_level(self):
        s = subsample_indices(3, 1)
        assert s.indices == (2,)
        grid = ChebGrid(Interval(-1.0, 1.0), 3)
        assert abs(grid.nodes[1] - 0.0) <= 1e-16

    @pytest.mark.parametrize("n,levels", [(9, 1), (27, 1), (27, 2), (36, 1), (36, 2), (81, 3)])
    def test_nestedness(self, n, levels):
        iv = Interval(0.0, 2.0)
        fine = ChebGrid(iv, n)
        coarse = ChebGrid(iv, n // 3**levels)
        picked = fine.nodes[subsample_indices(n, levels).zero_based()]
        assert np.max(np.abs(picked - coarse.nodes)) <= 1e-15

    def test_divisibility_required(self):
        with pytest.raises(ValueError):
            subsample_indices(10, 1)
        with pytest.raises(ValueError):
            subsample_indices(9, 3)


class TestLebesgue:
    def test_single_node(self):
        grid = ChebGrid(Interval(-1.0, 1.0), 1)
        assert lebesgue_estimate(grid, 100) == 1.0

    def test_logarithmic_growth_at_27(self):
        grid = ChebGrid(Interval(-1.0, 1.0), 27)
        est = lebesgue_estimate(grid, 4001)
        assert est < 4.0
        assert est > 1.0

    def test_monotone_in_sample_count(self):
        grid = ChebGrid(Interval(0.0, 1.0), 12)
        a = lebesgue_estimate(grid, 51)
        b = lebesgue_estimate(grid, 101)
        c = lebesgue_estimate(grid, 1001)
        assert a <= b + 1e-15
        assert b <= c + 1e-15

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            lebesgue_estimate(ChebGrid(Interval(0.0, 1.0), 3), 1)
