"""
Tests for the QR-backed projector onto range(Aᵀ).
"""
import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, strategies as st

from conic_split.domain.errors import NonFiniteEntry, RankDeficient, ValidationError
from conic_split.domain.subspace import MAX_CACHED_SCALINGS, SubspaceProjector

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.mark.unit
class TestBuild:
    def test_axis_row(self):
        projector = SubspaceProjector.build(np.array([[1.0, 0.0, 0.0]]))
        np.testing.assert_allclose(projector.project(np.array([2.0, 3.0, 4.0])), [2.0, 0.0, 0.0], atol=1e-15)

    def test_square_invertible_is_identity(self):
        A = np.array([[2.0, 1.0], [1.0, 3.0]])
        v = np.array([0.3, -1.7])
        np.testing.assert_allclose(SubspaceProjector.build(A).project(v), v, atol=1e-14)

    def test_sparse_input(self):
        A = sp.csr_matrix(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]))
        projector = SubspaceProjector.build(A)
        assert (projector.m, projector.n) == (2, 3)

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient) as exc:
            SubspaceProjector.build(np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]))
        assert exc.value.rank == 1 and exc.value.rows == 2

    def test_more_rows_than_columns(self):
        with pytest.raises(RankDeficient):
            SubspaceProjector.build(np.ones((3, 2)))

    def test_non_finite(self):
        with pytest.raises(NonFiniteEntry):
            SubspaceProjector.build(np.array([[1.0, np.nan]]))

    def test_zero_matrix(self):
        with pytest.raises(ValidationError):
            SubspaceProjector.build(np.zeros((1, 3)))


@pytest.mark.unit
class TestOperators:
    def test_abs_subspace_axis(self):
        projector = SubspaceProjector.build(np.array([[1.0, 0.0, 0.0]]))
        np.testing.assert_allclose(projector.abs_subspace(np.array([2.0, 3.0, 4.0])), [2.0, -3.0, -4.0],
                                   atol=1e-15)

    def test_abs_subspace_mean(self):
        projector = SubspaceProjector.build(np.array([[1.0, 1.0]]))
        np.testing.assert_allclose(projector.abs_subspace(np.array([1.0, 0.0])), [0.0, 1.0], atol=1e-15)

    def test_pinv_matches_normal_equations(self, example):
        A = np.asarray(example.program.A)
        b = np.asarray(example.program.b)
        expected = A.T @ np.linalg.solve(A @ A.T, b)
        actual = SubspaceProjector.build(A).apply_pinv_b(b)
        np.testing.assert_allclose(actual, expected, rtol=1e-8)

    def test_lstsq_y_recovers_multiplier(self):
        A = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
        y = np.array([0.5, -2.0])
        np.testing.assert_allclose(SubspaceProjector.build(A).lstsq_y(A.T @ y), y, atol=1e-13)

    def test_offset_tiny_lp(self):
        projector = SubspaceProjector.build(np.array([[1.0, 1.0]]))
        d = projector.offset(np.array([1.0]), np.array([1.0, 0.0]), 1.0)
        np.testing.assert_allclose(d, [0.0, 1.0], atol=1e-15)

    def test_offset_zero_data(self):
        projector = SubspaceProjector.build(np.array([[1.0, 1.0]]))
        np.testing.assert_array_equal(projector.offset(np.zeros(1), np.zeros(2), 1.0), np.zeros(2))

    def test_offset_c_in_row_space(self):
        A = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
        projector = SubspaceProjector.build(A)
        b = np.array([1.0, 2.0])
        d = projector.offset(b, A.T @ np.array([3.0, -1.0]), 1.0)
        np.testing.assert_allclose(d, projector.apply_pinv_b(b), atol=1e-13)

    @given(seeds)
    def test_reflection_properties(self, seed):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((8, 12))
        projector = SubspaceProjector.build(A)
        v = rng.standard_normal(12)
        w = projector.abs_subspace(v)
        assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(v), rel=1e-12)
        np.testing.assert_allclose(projector.abs_subspace(w), v, rtol=0, atol=1e-12 * np.linalg.norm(v))
        p = projector.project(v)
        np.testing.assert_allclose(projector.project(p), p, atol=1e-12 * np.linalg.norm(v))
        row_vector = A.T @ rng.standard_normal(8)
        np.testing.assert_allclose(projector.project(row_vector), row_vector,
                                   atol=1e-12 * np.linalg.norm(row_vector))


@pytest.mark.unit
class TestRefresh:
    def test_identity_scaling_matches_original(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((4, 7))
        base = SubspaceProjector.build(A)
        refreshed = base.refresh(np.ones(7))
        for _ in range(5):
            v = rng.standard_normal(7)
            np.testing.assert_allclose(refreshed.project(v), base.project(v), rtol=1e-12, atol=1e-14)

    def test_scaled_pinv(self):
        base = SubspaceProjector.build(np.array([[1.0, 1.0]]))
        scaled = base.refresh(np.array([2.0, 1.0]))
        np.testing.assert_allclose(scaled.apply_pinv_b(np.array([3.0])), [6 / 5, 3 / 5], atol=1e-15)
        np.testing.assert_allclose(base.apply_pinv_b(np.array([3.0])), [1.5, 1.5], atol=1e-15)

    def test_condition_number_with_published_scaling(self, example):
        base = SubspaceProjector.build(example.program.A)
        assert base.refresh(example.E_AC).condition_number() == pytest.approx(72079.13, rel=5e-3)

    def test_repeated_scaling_is_cached(self):
        base = SubspaceProjector.build(np.array([[1.0, 2.0, 3.0]]))
        o = np.array([1.0, 0.5, 2.0])
        assert base.refresh(o) is base.refresh(o.copy())

    def test_cache_is_bounded(self):
        base = SubspaceProjector.build(np.array([[1.0, 2.0, 3.0]]))
        for k in range(MAX_CACHED_SCALINGS + 3):
            base.refresh(np.array([1.0, 1.0 + k, 2.0]))
        assert len(base._cache) == MAX_CACHED_SCALINGS

    @pytest.mark.parametrize("o", [np.array([1.0, 0.0, 1.0]), np.array([1.0, np.inf, 1.0]), np.ones(2)])
    def test_invalid_scaling(self, o):
        with pytest.raises(ValidationError):
            SubspaceProjector.build(np.array([[1.0, 2.0, 3.0]])).refresh(o)
