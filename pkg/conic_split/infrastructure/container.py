"""
Dependency injection container for the application.

This module provides a simple dependency injection container that manages
object creation and lifetime. It supports:
- Singleton and transient lifetimes
- Factory functions
- Constructor injection by parameter annotation
"""
import inspect
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Type, TypeVar

from .config import (
    AppSettings, ConditioningConfig, SinkhornConfig, SolverConfig, SubspaceConfig, get_settings,
)

T = TypeVar("T")


class Lifetime(Enum):
    """Service lifetime management."""
    SINGLETON = "singleton"
    TRANSIENT = "transient"


class ServiceDescriptor:
    """Describes how a service should be created and managed."""

    def __init__(
        self,
        service_type: Type[T],
        implementation: Optional[Type[T]] = None,
        factory: Optional[Callable[[], T]] = None,
        lifetime: Lifetime = Lifetime.TRANSIENT,
        **kwargs: Any,
    ):
        self.service_type = service_type
        self.implementation = implementation or service_type
        self.factory = factory
        self.lifetime = lifetime
        self.kwargs = kwargs
        self._instance: Optional[T] = None

    def create_instance(self, container: "Container") -> T:
        if self.lifetime is Lifetime.SINGLETON and self._instance is not None:
            return self._instance

        if self.factory:
            instance = self.factory()
        else:
            instance = container._create_with_injection(self.implementation, **self.kwargs)

        if self.lifetime is Lifetime.SINGLETON:
            self._instance = instance
        return instance


class Container:
    """
    Simple dependency injection container.

    Manages service registration, resolution, and lifetime.
    """

    def __init__(self):
        self._services: Dict[Type, ServiceDescriptor] = {}
        self._setup_core_services()

    def register_singleton(self, service_type: Type[T], implementation: Optional[Type[T]] = None,
                           factory: Optional[Callable[[], T]] = None, **kwargs: Any) -> "Container":
        self._services[service_type] = ServiceDescriptor(
            service_type, implementation, factory, Lifetime.SINGLETON, **kwargs
        )
        return self

    def register_transient(self, service_type: Type[T], implementation: Optional[Type[T]] = None,
                           factory: Optional[Callable[[], T]] = None, **kwargs: Any) -> "Container":
        self._services[service_type] = ServiceDescriptor(
            service_type, implementation, factory, Lifetime.TRANSIENT, **kwargs
        )
        return self

    def register_instance(self, service_type: Type[T], instance: T) -> "Container":
        """Register a pre-created instance as a singleton."""
        descriptor = ServiceDescriptor(service_type=service_type, lifetime=Lifetime.SINGLETON)
        descriptor._instance = instance
        self._services[service_type] = descriptor
        return self

    def resolve(self, service_type: Type[T]) -> T:
        """
        Resolve a service instance.

        Raises:
            KeyError: If service is not registered
        """
        if service_type not in self._services:
            raise KeyError(f"Service {service_type} not registered")
        return self._services[service_type].create_instance(self)

    def try_resolve(self, service_type: Type[T]) -> Optional[T]:
        try:
            return self.resolve(service_type)
        except KeyError:
            return None

    def is_registered(self, service_type: Type) -> bool:
        return service_type in self._services

    def _create_with_injection(self, cls: Type[T], **override_kwargs: Any) -> T:
        """Create an instance with constructor dependency injection."""
        sig = inspect.signature(cls.__init__)
        kwargs = {}
        for param_name, param in sig.parameters.items():
            if param_name == "self" or param.kind in (param.VAR_POSITIONAL, param.VAR_KEYWORD):
                continue
            if param_name in override_kwargs:
                kwargs[param_name] = override_kwargs[param_name]
                continue

            param_type = param.annotation
            if param_type is not inspect.Parameter.empty and self.is_registered(param_type):
                kwargs[param_name] = self.resolve(param_type)
            elif param.default is not inspect.Parameter.empty:
                kwargs[param_name] = param.default
            # otherwise let the constructor report the missing argument
        return cls(**kwargs)

    def _setup_core_services(self):
        """Configuration sections, resolved once from the environment."""
        self.register_singleton(AppSettings, factory=get_settings)
        self.register_singleton(SolverConfig, factory=lambda: self.resolve(AppSettings).solver)
        self.register_singleton(ConditioningConfig, factory=lambda: self.resolve(AppSettings).conditioning)
        self.register_singleton(SinkhornConfig, factory=lambda: self.resolve(AppSettings).sinkhorn)
        self.register_singleton(SubspaceConfig, factory=lambda: self.resolve(AppSettings).subspace)


class ServiceProvider(ABC):
    """Abstract base class for service providers."""

    @abstractmethod
    def configure_services(self, container: Container) -> None:
        pass


class ObservabilityServiceProvider(ServiceProvider):
    """Metrics live for the whole process so one export covers every solve."""

    def configure_services(self, container: Container) -> None:
        from conic_split.observability.metrics import SolverMetrics

        container.register_singleton(SolverMetrics)


class AdapterServiceProvider(ServiceProvider):
    """File-backed implementations of the storage ports."""

    def configure_services(self, container: Container) -> None:
        from conic_split.adapters.outbound.persistence import (
            CsvSummaryWriter, CsvTraceWriter, JsonProblemRepository, JsonSolutionRepository,
        )
        from conic_split.domain.ports import (
            IProblemRepository, ISolutionRepository, ISummaryWriter, ITraceWriter,
        )

        container.register_singleton(IProblemRepository, JsonProblemRepository)
        container.register_singleton(ISolutionRepository, JsonSolutionRepository)
        container.register_singleton(ITraceWriter, CsvTraceWriter)
        container.register_singleton(ISummaryWriter, CsvSummaryWriter)


class ApplicationServiceProvider(ServiceProvider):
    """
    Use cases are registered as transient; they hold no state between
    executions beyond their injected collaborators.
    """

    def configure_services(self, container: Container) -> None:
        from conic_split.application import (
            CompareSolutionsUseCase, GenerateProblemUseCase, RunBenchmarkUseCase, SolveProblemUseCase,
        )

        container.register_transient(SolveProblemUseCase)
        container.register_transient(RunBenchmarkUseCase)
        container.register_transient(CompareSolutionsUseCase)
        container.register_transient(GenerateProblemUseCase)


_container = Container()
_configured = False


def get_container() -> Container:
    """Get the global dependency injection container."""
    return _container


def configure_container(providers: List[ServiceProvider], container: Optional[Container] = None) -> Container:
    container = container or get_container()
    for provider in providers:
        provider.configure_services(container)
    return container


def initialize_container(include_adapters: bool = True) -> Container:
    """
    Initialize the global container with all service providers.

    Args:
        include_adapters: Register the file adapters; tests pass False and
            register fakes with `register_instance` instead

    Returns:
        The configured container
    """
    global _configured
    if _configured:
        return _container

    providers: List[ServiceProvider] = [ObservabilityServiceProvider(), ApplicationServiceProvider()]
    if include_adapters:
        providers.append(AdapterServiceProvider())
    configure_container(providers)
    _configured = True
    return _container


def reset_container() -> Container:
    """Drop every registration and singleton; used between tests."""
    global _container, _configured
    _container = Container()
    _configured = False
    return _container


def resolve_service(service_type: Type[T]) -> T:
    return _container.resolve(service_type)
