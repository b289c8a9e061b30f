import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebtuck.dtensor import (
    IndexSet,
    fold,
    frobenius_distance,
    from_linear,
    full_index_set,
    mode_product,
    multi_mode_product,
    rowwise_khatri_rao,
    subtensor,
    to_linear,
    unfold,
    unfold_first,
)


def naive_unfold(t, mode):
    """Fiber-by-fiber oracle for the mode unfolding: column c collects the
    mode fibers with lower-numbered remaining modes varying fastest."""
    t = np.asarray(t)
    shape = t.shape
    rest = [ax for ax in range(t.ndim) if ax != mode - 1]
    out = np.empty((shape[mode - 1], int(np.prod([shape[ax] for ax in rest], initial=1))))
    for col, multi in enumerate(np.ndindex(*[shape[ax] for ax in rest][::-1])):
        idx = [0] * t.ndim
        for ax, i in zip(rest, multi[::-1]):
            idx[ax] = i
        for k in range(shape[mode - 1]):
            idx[mode - 1] = k
            out[k, col] = t[tuple(idx)]
    return out


small_shapes = st.lists(st.integers(1, 4), min_size=1, max_size=6)


class TestUnfold:
    def test_vector_is_single_column(self):
        t = np.arange(5.0)
        assert unfold(t, 1).shape == (5, 1)
        np.testing.assert_array_equal(unfold(t, 1)[:, 0], t)

    def test_2x2x2_mode1_frozen(self):
        t = from_linear(np.arange(1.0, 9.0), (2, 2, 2))
        np.testing.assert_array_equal(unfold(t, 1), [[1, 3, 5, 7], [2, 4, 6, 8]])

    def test_matches_fiber_oracle(self):
        rng = np.random.default_rng(0)
        t = rng.standard_normal((3, 4, 5))
        for mode in (1, 2, 3):
            np.testing.assert_array_equal(unfold(t, mode), naive_unfold(t, mode))

    @settings(max_examples=40, derandomize=True)
    @given(small_shapes, st.integers(0, 5), st.integers(0, 2**32 - 1))
    def test_fold_unfold_round_trip(self, shape, mode_idx, seed):
        mode = mode_idx % len(shape) + 1
        t = np.random.default_rng(seed).standard_normal(shape)
        np.testing.assert_array_equal(fold(unfold(t, mode), mode, shape), t)

    def test_mode_out_of_range(self):
        with pytest.raises(ValueError):
            unfold(np.zeros((2, 2)), 3)
        with pytest.raises(ValueError):
            unfold(np.zeros((2, 2)), 0)


class TestUnfoldFirst:
    def test_2x2x2_j2_frozen(self):
        t = from_linear(np.arange(1.0, 9.0), (2, 2, 2))
        np.testing.assert_array_equal(
            unfold_first(t, 2), [[1, 5], [2, 6], [3, 7], [4, 8]]
        )

    def test_j1_equals_mode1_unfold(self):
        t = np.random.default_rng(1).standard_normal((3, 4, 5))
        np.testing.assert_array_equal(unfold_first(t, 1), unfold(t, 1))

    def test_size_preserved(self):
        t = np.random.default_rng(2).standard_normal((2, 3, 4, 5))
        for j in (1, 2, 3):
            m = unfold_first(t, j)
            assert m.shape[0] * m.shape[1] == t.size

    def test_j_out_of_range(self):
        t = np.zeros((2, 3))
        with pytest.raises(ValueError):
            unfold_first(t, 2)
        with pytest.raises(ValueError):
            unfold_first(t, 0)


class TestModeProduct:
    def test_identity_leaves_tensor(self):
        t = np.random.default_rng(3).standard_normal((3, 4, 5))
        np.testing.assert_array_equal(mode_product(t, np.eye(4), 2), t)

    def test_matches_unfolding_identity(self):
        rng = np.random.default_rng(4)
        t = rng.standard_normal((3, 4, 5))
        a = rng.standard_normal((2, 4))
        y = mode_product(t, a, 2)
        ref = a @ unfold(t, 2)
        assert np.max(np.abs(unfold(y, 2) - ref)) <= 1e-13 * np.max(np.abs(ref))

    def test_distinct_mode_commutativity(self):
        rng = np.random.default_rng(5)
        t = rng.standard_normal((3, 4, 5))
        a = rng.standard_normal((2, 3))
        b = rng.standard_normal((6, 4))
        lhs = mode_product(mode_product(t, a, 1), b, 2)
        rhs = mode_product(mode_product(t, b, 2), a, 1)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mode_product(np.zeros((3, 4)), np.zeros((2, 5)), 2)


class TestMultiModeProduct:
    def test_empty_factor_list(self):
        t = np.random.default_rng(6).standard_normal((2, 3))
        np.testing.assert_array_equal(multi_mode_product(t, []), t)

    def test_identity_factors(self):
        t = np.random.default_rng(7).standard_normal((2, 3, 4))
        out = multi_mode_product(t, [(np.eye(2), 1), (np.eye(3), 2), (np.eye(4), 3)])
        np.testing.assert_array_equal(out, t)

    def test_matches_sequential_and_order_independent(self):
        rng = np.random.default_rng(8)
        t = rng.standard_normal((3, 4, 5))
        a = rng.standard_normal((2, 3))
        b = rng.standard_normal((6, 5))
        seq = mode_product(mode_product(t, a, 1), b, 3)
        out1 = multi_mode_product(t, [(a, 1), (b, 3)])
        out2 = multi_mode_product(t, [(b, 3), (a, 1)])
        scale = np.linalg.norm(seq.ravel())
        assert frobenius_distance(out1, seq) <= 1e-13 * scale
        assert frobenius_distance(out1, out2) <= 1e-12 * scale

    def test_duplicate_mode_rejected(self):
        t = np.zeros((2, 2))
        with pytest.raises(ValueError):
            multi_mode_product(t, [(np.eye(2), 1), (np.eye(2), 1)])


class TestSubtensor:
    def test_full_sets_copy(self):
        t = np.random.default_rng(9).standard_normal((2, 3))
        out = subtensor(t, [full_index_set(2), full_index_set(3)])
        np.testing.assert_array_equal(out, t)
        out[0, 0] = 99.0
        assert t[0, 0] != 99.0

    def test_singleton_sets(self):
        t = np.random.default_rng(10).standard_normal((2, 3, 4))
        out = subtensor(t, [IndexSet((1,), 2), IndexSet((1,), 3), IndexSet((1,), 4)])
        assert out.shape == (1, 1, 1)
        assert out[0, 0, 0] == t[0, 0, 0]

    def test_matrix_rows_and_column(self):
        t = np.arange(9.0).reshape(3, 3)
        out = subtensor(t, [IndexSet((1, 3), 3), IndexSet((2,), 3)])
        np.testing.assert_array_equal(out, [[t[0, 1]], [t[2, 1]]])

    def test_out_of_range_index(self):
        with pytest.raises(ValueError):
            IndexSet((4,), 3)
        with pytest.raises(ValueError):
            IndexSet((1, 1), 3)


class TestRowwiseKhatriRao:
    def test_ones_column_is_identity_op(self):
        a = np.random.default_rng(11).standard_normal((4, 3))
        np.testing.assert_array_equal(rowwise_khatri_rao(a, np.ones((4, 1))), a)

    def test_entries_match_per_row_kron(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2))
        out = rowwise_khatri_rao(a, b)
        for i in range(2):
            np.testing.assert_array_equal(out[i], np.kron(a[i], b[i]))

    def test_associative(self):
        rng = np.random.default_rng(13)
        a, b, c = (rng.standard_normal((3, k)) for k in (2, 3, 4))
        left = rowwise_khatri_rao(rowwise_khatri_rao(a, b), c)
        right = rowwise_khatri_rao(a, rowwise_khatri_rao(b, c))
        # one float multiplication of reordering separates the two routes
        np.testing.assert_allclose(left, right, rtol=1e-14)

    def test_vectorization_ordering(self):
        # reducing [U2, U1] must match the column-major ravel of the
        # rank-1 outer product, mode 1 fastest
        rng = np.random.default_rng(14)
        u1 = rng.standard_normal((3, 2))
        u2 = rng.standard_normal((3, 4))
        chain = rowwise_khatri_rao(u2, u1)
        for i in range(3):
            outer = np.outer(u1[i], u2[i])
            np.testing.assert_allclose(chain[i], outer.ravel(order="F"), rtol=1e-15)

    def test_row_count_mismatch(self):
        with pytest.raises(ValueError):
            rowwise_khatri_rao(np.zeros((2, 2)), np.zeros((3, 2)))


class TestFrobeniusDistance:
    def test_equal_tensors(self):
        t = np.random.default_rng(15).standard_normal((3, 3))
        assert frobenius_distance(t, t) == 0.0

    def test_single_entry_difference(self):
        t1 = np.ones((2, 2, 2))
        t2 = t1.copy()
        t2[1, 0, 1] += 3.0
        assert frobenius_distance(t1, t2) == pytest.approx(3.0)

    def test_matches_vector_norm_oracle(self):
        rng = np.random.default_rng(16)
        t1 = rng.standard_normal((4, 5))
        t2 = rng.standard_normal((4, 5))
        assert frobenius_distance(t1, t2) == pytest.approx(
            np.linalg.norm((t1 - t2).ravel()), rel=1e-15
        )

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            frobenius_distance(np.zeros((2, 2)), np.zeros((2, 3)))


class TestLinearOrdering:
    @settings(max_examples=30, derandomize=True)
    @given(small_shapes, st.integers(0, 2**32 - 1))
    def test_linear_round_trip(self, shape, seed):
        t = np.random.default_rng(seed).standard_normal(shape)
        np.testing.assert_array_equal(from_linear(to_linear(t), shape), t)

    def test_mode1_fastest(self):
        t = from_linear(np.arange(6.0), (2, 3))
        # first extent advances first in the linear ordering
        np.testing.assert_array_equal(t[:, 0], [0, 1])
        np.testing.assert_array_equal(t[0, :], [0, 2, 4])
