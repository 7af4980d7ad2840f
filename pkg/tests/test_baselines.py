"""
Tests for the Douglas-Rachford and ADMM reference methods.
"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conic_split.domain.baselines import AdmmSolver, DouglasRachfordSolver, prox_affine_linear
from conic_split.domain.errors import ValidationError
from conic_split.domain.subspace import SubspaceProjector
from conic_split.domain.value_objects import SolveOptions


@pytest.mark.unit
class TestProxAffineLinear:
    def test_feasible_point_without_cost(self):
        A = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
        projector = SubspaceProjector.build(A)
        v = np.array([1.0, 1.0, 1.0])
        b = A @ v
        np.testing.assert_allclose(prox_affine_linear(projector, projector.apply_pinv_b(b), np.zeros(3), v, 1.0),
                                   v, atol=1e-13)

    def test_tiny_lp(self, tiny_lp):
        projector = SubspaceProjector.build(tiny_lp.A)
        result = prox_affine_linear(projector, projector.apply_pinv_b(tiny_lp.b), tiny_lp.c, np.zeros(2), 1.0)
        np.testing.assert_allclose(result, [0.0, 1.0], atol=1e-15)

    def test_row_space_cost_at_pseudoinverse(self):
        A = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
        projector = SubspaceProjector.build(A)
        pinv_b = projector.apply_pinv_b(np.array([1.0, -1.0]))
        c = A.T @ np.array([0.4, 2.0])
        np.testing.assert_allclose(prox_affine_linear(projector, pinv_b, c, pinv_b, 1.0), pinv_b, atol=1e-13)

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.floats(min_value=0.1, max_value=10.0))
    def test_output_satisfies_constraint(self, seed, mu):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((5, 9))
        b = rng.standard_normal(5)
        projector = SubspaceProjector.build(A)
        x = prox_affine_linear(projector, projector.apply_pinv_b(b), rng.standard_normal(9),
                               10 * rng.standard_normal(9), mu)
        assert np.linalg.norm(A @ x - b) <= 1e-10 * max(1.0, np.linalg.norm(b))


@pytest.mark.unit
class TestDouglasRachford:
    def test_first_step_of_tiny_lp(self, tiny_lp):
        method = DouglasRachfordSolver(tiny_lp)
        x, z = method.dr_step(np.zeros(2))
        np.testing.assert_array_equal(x, np.zeros(2))
        np.testing.assert_allclose(z, [0.0, 1.0], atol=1e-15)

    def test_fixed_point(self, tiny_lp):
        method = DouglasRachfordSolver(tiny_lp)
        z_star = np.array([-1.0, 1.0])
        x, z = method.dr_step(z_star)
        np.testing.assert_allclose(x, [0.0, 1.0])
        np.testing.assert_allclose(z, z_star, atol=1e-12)

    def test_converges_on_tiny_lp(self, tiny_lp):
        method = DouglasRachfordSolver(tiny_lp)
        method.init()
        for _ in range(300):
            method.step()
        x, z = method.iterate()
        np.testing.assert_allclose(x, [0.0, 1.0], atol=1e-6)
        np.testing.assert_allclose(z, [1.0, 0.0], atol=1e-6)
        assert method.state.iter == 300

    def test_step_before_init(self, tiny_lp):
        with pytest.raises(ValidationError):
            DouglasRachfordSolver(tiny_lp).step()

    def test_never_reports_events(self, tiny_lp):
        assert DouglasRachfordSolver(tiny_lp).event_fired is False


@pytest.mark.unit
class TestAdmm:
    def test_first_step_of_tiny_lp(self, tiny_lp):
        method = AdmmSolver(tiny_lp)
        x1, x2, z = method.admm_step(np.zeros(2), np.zeros(2), 1.0)
        np.testing.assert_array_equal(x1, np.zeros(2))
        np.testing.assert_allclose(x2, [0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(z, [0.0, -1.0], atol=1e-15)

    def test_kkt_point_is_fixed(self, tiny_lp):
        method = AdmmSolver(tiny_lp)
        x_opt, z_opt = np.array([0.0, 1.0]), np.array([1.0, 0.0])
        x1, x2, z = method.admm_step(x_opt, z_opt, 1.0)
        np.testing.assert_allclose(x1, x_opt, atol=1e-12)
        np.testing.assert_allclose(x2, x_opt, atol=1e-12)
        np.testing.assert_allclose(z, z_opt, atol=1e-12)

    @pytest.mark.parametrize("mu", [1.0, 2.0])
    def test_limit_independent_of_mu(self, tiny_lp, mu):
        method = AdmmSolver(tiny_lp, SolveOptions(mu=mu))
        method.init()
        for _ in range(2000):
            method.step()
        x, z = method.iterate()
        assert tiny_lp.objective(x) == pytest.approx(0.0, abs=1e-6)
        np.testing.assert_allclose(z, [1.0, 0.0], atol=1e-6)

    def test_warm_start(self, tiny_lp):
        method = AdmmSolver(tiny_lp)
        state = method.init(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
        np.testing.assert_array_equal(state.x, [0.0, 1.0])
        np.testing.assert_array_equal(state.z, [1.0, 0.0])
