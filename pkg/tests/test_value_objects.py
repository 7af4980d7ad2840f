"""
Tests for domain value objects: cone specs, options, schedules, policies.
"""
import pytest

from conic_split.domain.errors import EmptyCone, IndivisibleConeSize, ValidationError
from conic_split.domain.value_objects import (
    ConditioningPolicy, ConeBlock, ConeKind, ConeSpec, GenSpec, ProblemFamily, Schedule,
    SolveOptions, block_pairs,
)


@pytest.mark.unit
class TestConeSpec:
    def test_nonneg_block(self):
        spec = ConeSpec.nonneg(3)
        assert spec.total_dim == 3
        assert spec.is_orthant

    def test_lorentz_blocks(self):
        spec = ConeSpec.lorentz(4, 25)
        assert len(spec.blocks) == 25
        assert spec.total_dim == 100
        assert not spec.is_orthant

    def test_offsets_follow_block_order(self):
        spec = ConeSpec.from_pairs([("nonneg", 2), ("soc", 3), ("soc", 2)])
        assert [offset for offset, _ in spec.with_offsets()] == [0, 2, 5]

    def test_round_trip_pairs(self):
        pairs = [("nonneg", 2), ("soc", 3)]
        assert block_pairs(ConeSpec.from_pairs(pairs)) == pairs

    def test_empty_spec_rejected(self):
        with pytest.raises(EmptyCone):
            ConeSpec(())

    @pytest.mark.parametrize("kind,dim", [(ConeKind.NONNEG, 0), (ConeKind.LORENTZ, 1)])
    def test_degenerate_blocks_rejected(self, kind, dim):
        with pytest.raises(EmptyCone):
            ConeBlock(kind, dim)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ConeSpec.from_pairs([("psd", 3)])


@pytest.mark.unit
class TestSolveOptions:
    def test_defaults(self):
        options = SolveOptions()
        assert options.mu == 1.0
        assert options.initial == "zero"
        assert options.max_seconds is None

    @pytest.mark.parametrize("kwargs", [
        {"mu": 0.0},
        {"max_iters": 0},
        {"tol_gap": 0.0},
        {"trace_stride": 0},
        {"check_every": 0},
        {"initial": "random"},
    ])
    def test_invalid_options(self, kwargs):
        with pytest.raises(ValidationError):
            SolveOptions(**kwargs)


@pytest.mark.unit
class TestSchedule:
    def test_none_never_fires(self):
        schedule = Schedule.parse("none")
        assert not schedule.enabled
        assert not any(schedule.fires_at(i) for i in range(1, 500))

    def test_start_stride_fires_at_one_and_members(self):
        schedule = Schedule.parse("300:100")
        fired = [i for i in range(1, 650) if schedule.fires_at(i)]
        assert fired == [1, 300, 400, 500, 600]

    def test_once(self):
        schedule = Schedule.parse("once:300")
        assert [i for i in range(1, 1000) if schedule.fires_at(i)] == [1, 300]

    def test_bounded_continuous(self):
        schedule = Schedule.parse("1:1:50")
        fired = [i for i in range(1, 200) if schedule.fires_at(i)]
        assert fired == list(range(1, 51))

    @pytest.mark.parametrize("text", ["none", "once:300", "300:100", "1:1:50"])
    def test_str_round_trip(self, text):
        assert str(Schedule.parse(text)) == text

    @pytest.mark.parametrize("text", ["abc", "once:x", "0:100", "300:0", "10:1:5", "1:2:3:4"])
    def test_bad_schedules(self, text):
        with pytest.raises(ValidationError):
            Schedule.parse(text)


@pytest.mark.unit
class TestConditioningPolicy:
    def test_presets(self):
        lp = ConditioningPolicy.lp_preset()
        socp = ConditioningPolicy.socp_preset()
        assert (lp.t, str(lp.schedule)) == (9.2, "300:100")
        assert (socp.t, str(socp.schedule)) == (1.7, "200:100")

    def test_t_above_one_accepted(self):
        assert ConditioningPolicy(t=9.2).t == 9.2

    @pytest.mark.parametrize("kwargs", [{"t": 0.0}, {"clamp_lo": 0.0}, {"clamp_lo": 1.0, "clamp_hi": 0.5}])
    def test_invalid_policy(self, kwargs):
        with pytest.raises(ValidationError):
            ConditioningPolicy(**kwargs)


@pytest.mark.unit
class TestGenSpec:
    def test_default_rows(self):
        assert GenSpec(ProblemFamily.LP_NORMAL, n=100).rows == 80

    def test_explicit_rows(self):
        assert GenSpec(ProblemFamily.LP_NORMAL, n=20, m=16).rows == 16

    def test_indivisible_socp(self):
        with pytest.raises(IndivisibleConeSize):
            GenSpec(ProblemFamily.SOCP, n=100, h=7)

    @pytest.mark.parametrize("kwargs", [{"n": 1}, {"n": 10, "m": 11}, {"n": 10, "m": 0}])
    def test_invalid_sizes(self, kwargs):
        with pytest.raises(ValidationError):
            GenSpec(ProblemFamily.LP_UNIFORM, **kwargs)
