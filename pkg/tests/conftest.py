"""Pytest configuration and fixtures."""

import pytest
from pathlib import Path
from typing import Callable, Generator

from src.application.container import Container
from src.application.services.config_generator import ConfigGenerator
from src.application.services.tosca_parser import ToscaParser
from src.application.services.type_mapper import TypeMapper
from src.domain.models.configuration import OcciConfiguration
from src.domain.models.occi import OcciExtension
from src.domain.models.tosca import ToscaTopology, ToscaTypeRegistry
from src.domain.services.extension_set import ExtensionSet
from src.infrastructure.config.settings import Settings
from src.infrastructure.runtime.clients import InProcessRuntimeClient
from src.infrastructure.runtime.mock_runtime import MockRuntime


FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def test_settings() -> Settings:
    """Create test settings."""
    return Settings(
        environment="testing",
        fixtures_dir=FIXTURES_DIR,
        deterministic=True,
        gate_poll_interval=0.001,
        gate_timeout=0.5,
    )


@pytest.fixture
def test_container(test_settings) -> Generator[Container, None, None]:
    """Create test container."""
    container = Container(test_settings)
    yield container
    container.close()


@pytest.fixture
def parser() -> ToscaParser:
    return ToscaParser()


@pytest.fixture
def type_mapper() -> TypeMapper:
    return TypeMapper()


@pytest.fixture
def generator() -> ConfigGenerator:
    return ConfigGenerator()


@pytest.fixture
def registry(test_container) -> ToscaTypeRegistry:
    """Registry of the fixture type corpus."""
    return test_container.registry


@pytest.fixture
def tosca_extension(test_container) -> OcciExtension:
    """Generated extension, linked into the container's extensions."""
    return test_container.tosca_extension


@pytest.fixture
def extensions(test_container, tosca_extension) -> ExtensionSet:
    """Base extensions plus the generated TOSCA extension."""
    return test_container.extensions


@pytest.fixture
def base_extensions(test_container) -> ExtensionSet:
    """Base extensions only."""
    return test_container.extensions


@pytest.fixture
def load_topology(parser) -> Callable[..., ToscaTopology]:
    """Parse a fixture topology by name."""
    def _load(name: str, **inputs) -> ToscaTopology:
        text = (FIXTURES_DIR / "topologies" / f"{name}.yaml").read_text()
        return parser.parse_topology(text, inputs=inputs or None)
    return _load


@pytest.fixture
def make_pim(load_topology, generator, registry, tosca_extension) -> Callable[[str], OcciConfiguration]:
    """Generate the PIM configuration of a fixture topology."""
    def _make(name: str) -> OcciConfiguration:
        return generator.generate_configuration(load_topology(name), tosca_extension, registry)
    return _make


@pytest.fixture
def mock_runtime(extensions) -> Generator[MockRuntime, None, None]:
    """Deterministic mock runtime aware of every extension."""
    runtime = MockRuntime(extensions, activation_delay=0.0)
    yield runtime
    runtime.close()


@pytest.fixture
def runtime_client(mock_runtime) -> InProcessRuntimeClient:
    return InProcessRuntimeClient(mock_runtime)
