"""
Tests for Dependency Injection Container configuration and wiring.

Validates that the adapters and use cases are registered and can be
resolved through the container.
"""
import pytest

from conic_split.adapters.outbound.persistence import (
    CsvSummaryWriter, CsvTraceWriter, JsonProblemRepository, JsonSolutionRepository,
)
from conic_split.application import (
    CompareSolutionsUseCase, GenerateProblemUseCase, RunBenchmarkUseCase, SolveProblemUseCase,
)
from conic_split.domain.ports import IProblemRepository, ISolutionRepository, ISummaryWriter, ITraceWriter
from conic_split.infrastructure.config import AppSettings, ConditioningConfig, SolverConfig
from conic_split.infrastructure.container import (
    Container, get_container, initialize_container, reset_container, resolve_service,
)
from conic_split.observability.metrics import SolverMetrics


class Clock:
    pass


class Stopwatch:
    def __init__(self, clock: Clock, label: str = "solve"):
        self.clock = clock
        self.label = label


@pytest.mark.unit
class TestContainerBasics:
    def test_singleton(self):
        container = Container().register_singleton(Clock)
        assert container.resolve(Clock) is container.resolve(Clock)

    def test_transient(self):
        container = Container().register_transient(Clock)
        assert container.resolve(Clock) is not container.resolve(Clock)

    def test_instance(self):
        clock = Clock()
        assert Container().register_instance(Clock, clock).resolve(Clock) is clock

    def test_factory(self):
        container = Container().register_singleton(Clock, factory=Clock)
        assert isinstance(container.resolve(Clock), Clock)

    def test_constructor_injection_and_defaults(self):
        container = Container().register_singleton(Clock).register_transient(Stopwatch)
        watch = container.resolve(Stopwatch)
        assert watch.clock is container.resolve(Clock)
        assert watch.label == "solve"

    def test_keyword_override(self):
        container = Container().register_singleton(Clock).register_transient(Stopwatch, label="bench")
        assert container.resolve(Stopwatch).label == "bench"

    def test_unregistered(self):
        container = Container()
        with pytest.raises(KeyError):
            container.resolve(Clock)
        assert container.try_resolve(Clock) is None
        assert not container.is_registered(Clock)

    def test_core_configuration_sections(self):
        container = Container()
        settings = container.resolve(AppSettings)
        assert container.resolve(SolverConfig) is settings.solver
        assert container.resolve(ConditioningConfig) is settings.conditioning


@pytest.mark.unit
class TestApplicationWiring:
    def test_adapters_registered(self, fresh_container):
        container = initialize_container()
        assert isinstance(container.resolve(IProblemRepository), JsonProblemRepository)
        assert isinstance(container.resolve(ISolutionRepository), JsonSolutionRepository)
        assert isinstance(container.resolve(ITraceWriter), CsvTraceWriter)
        assert isinstance(container.resolve(ISummaryWriter), CsvSummaryWriter)

    @pytest.mark.parametrize("use_case", [
        SolveProblemUseCase, RunBenchmarkUseCase, CompareSolutionsUseCase, GenerateProblemUseCase,
    ])
    def test_use_cases_resolve(self, fresh_container, use_case):
        initialize_container()
        assert isinstance(resolve_service(use_case), use_case)

    def test_use_cases_are_transient_metrics_shared(self, fresh_container):
        container = initialize_container()
        first, second = container.resolve(SolveProblemUseCase), container.resolve(SolveProblemUseCase)
        assert first is not second
        assert first.metrics is second.metrics
        assert isinstance(first.metrics, SolverMetrics)

    def test_initialize_is_idempotent(self, fresh_container):
        assert initialize_container() is initialize_container() is get_container()

    def test_without_adapters(self, fresh_container):
        container = initialize_container(include_adapters=False)
        assert not container.is_registered(IProblemRepository)
        assert container.is_registered(SolverMetrics)

    def test_reset_drops_registrations(self, fresh_container):
        initialize_container()
        container = reset_container()
        assert not container.is_registered(SolveProblemUseCase)
