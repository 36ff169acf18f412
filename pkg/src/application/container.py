"""Dependency injection container."""

from pathlib import Path
from typing import Optional, TYPE_CHECKING
import logging

from ..infrastructure.config.settings import Settings, get_settings
from ..domain.models.occi import OcciExtension
from ..domain.models.tosca import ToscaTypeRegistry
from ..domain.repositories.runtime_client import RuntimeClient
from ..domain.services.extension_set import ExtensionSet

if TYPE_CHECKING:
    from ..infrastructure.runtime.mock_runtime import MockRuntime
    from .services.config_generator import ConfigGenerator
    from .services.orchestrator import Orchestrator
    from .services.pim2psm import PsmTransformer
    from .services.tosca_parser import ToscaParser
    from .services.type_mapper import TypeMapper


logger = logging.getLogger(__name__)


class Container:
    """Application dependency container."""

    def __init__(self, settings: Optional[Settings] = None, runtime: Optional["MockRuntime"] = None):
        """Initialize container.

        Args:
            settings: Application settings (uses default if None)
            runtime: Mock runtime to serve or talk to (built lazily if None)
        """
        self._settings = settings or get_settings()
        self._extensions: Optional[ExtensionSet] = None
        self._parser: Optional["ToscaParser"] = None
        self._type_mapper: Optional["TypeMapper"] = None
        self._config_generator: Optional["ConfigGenerator"] = None
        self._psm_transformer: Optional["PsmTransformer"] = None
        self._orchestrator: Optional["Orchestrator"] = None
        self._runtime: Optional["MockRuntime"] = runtime
        self._runtime_client: Optional[RuntimeClient] = None
        self._registry: Optional[ToscaTypeRegistry] = None
        self._tosca_extension: Optional[OcciExtension] = None

    @property
    def settings(self) -> Settings:
        """Get application settings."""
        return self._settings

    @property
    def fixtures_dir(self) -> Path:
        return self._settings.fixtures_dir

    @property
    def extensions(self) -> ExtensionSet:
        """Get the linked base extensions (core, infrastructure, MoDMaCAO, SLA, PSM)."""
        if self._extensions is None:
            from ..infrastructure.serialization.files import load_extension_dir
            directory = self.fixtures_dir / "extensions"
            self._extensions = load_extension_dir(directory)
            logger.info(f"Initialized extensions from {directory}: {', '.join(self._extensions.names)}")
        return self._extensions

    @property
    def parser(self) -> "ToscaParser":
        """Get TOSCA parser."""
        if self._parser is None:
            from .services.tosca_parser import ToscaParser
            self._parser = ToscaParser(aliases=self._settings.type_aliases)
            logger.info("Initialized TOSCA parser")
        return self._parser

    @property
    def type_mapper(self) -> "TypeMapper":
        """Get type mapper."""
        if self._type_mapper is None:
            from .services.type_mapper import TypeMapper
            self._type_mapper = TypeMapper(
                tosca_scheme=self._settings.tosca_scheme,
                extension_name=self._settings.tosca_extension_name,
            )
            logger.info("Initialized type mapper")
        return self._type_mapper

    @property
    def config_generator(self) -> "ConfigGenerator":
        """Get configuration generator."""
        if self._config_generator is None:
            from .services.config_generator import ConfigGenerator
            self._config_generator = ConfigGenerator()
        return self._config_generator

    @property
    def psm_transformer(self) -> "PsmTransformer":
        """Get PIM to PSM transformer."""
        if self._psm_transformer is None:
            from .services.pim2psm import PsmTransformer
            self._psm_transformer = PsmTransformer()
        return self._psm_transformer

    @property
    def orchestrator(self) -> "Orchestrator":
        """Get orchestrator."""
        if self._orchestrator is None:
            from .services.orchestrator import Orchestrator
            self._orchestrator = Orchestrator(
                extensions=self.extensions,
                tosca_scheme=self._settings.tosca_scheme,
                poll_interval=self._settings.gate_poll_interval,
                gate_timeout=self._settings.gate_timeout,
            )
            logger.info("Initialized orchestrator")
        return self._orchestrator

    @property
    def runtime(self) -> "MockRuntime":
        """Get mock runtime."""
        if self._runtime is None:
            from ..infrastructure.runtime.mock_runtime import MockRuntime
            self._runtime = MockRuntime(self.extensions, activation_delay=self._settings.activation_delay)
            logger.info(f"Initialized mock runtime (activation delay {self._settings.activation_delay}s)")
        return self._runtime

    @property
    def runtime_client(self) -> RuntimeClient:
        """Get runtime client: HTTP when a runtime URL is configured, in-process otherwise."""
        if self._runtime_client is None:
            from ..infrastructure.runtime.clients import HttpRuntimeClient, InProcessRuntimeClient
            if self._settings.runtime_url:
                self._runtime_client = HttpRuntimeClient(
                    self._settings.runtime_url, timeout=self._settings.runtime_request_timeout
                )
                logger.info(f"Initialized HTTP runtime client for {self._settings.runtime_url}")
            else:
                self._runtime_client = InProcessRuntimeClient(self.runtime)
                logger.info("Initialized in-process runtime client")
        return self._runtime_client

    def use_runtime_client(self, client: RuntimeClient) -> None:
        """Replace the runtime client (closing the current one)."""
        if self._runtime_client is not None:
            self._runtime_client.close()
        self._runtime_client = client

    @property
    def registry(self) -> ToscaTypeRegistry:
        """Get the registry of the fixture type corpus."""
        if self._registry is None:
            types = self.parser.parse_type_dir(self.fixtures_dir / "types")
            self._registry = self.parser.resolve_registry(types)
            logger.info(f"Resolved {len(self._registry)} TOSCA types")
        return self._registry

    @property
    def tosca_extension(self) -> OcciExtension:
        """Get the extension generated from the registry, linked into `extensions`."""
        if self._tosca_extension is None:
            extension = self.extensions.get_extension(self._settings.tosca_extension_name)
            if extension is None:
                extension = self.type_mapper.generate_extension(self.registry, self.extensions)
                self.extensions.add(extension)
            self._tosca_extension = extension
        return self._tosca_extension

    def close(self) -> None:
        """Close all resources."""
        if self._runtime_client is not None:
            self._runtime_client.close()
            self._runtime_client = None
        if self._runtime is not None:
            self._runtime.close()
            logger.info("Closed mock runtime")

    def __enter__(self):
        """Context manager entry."""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit."""
        self.close()


# Global container instance
_container: Optional[Container] = None


def get_container() -> Container:
    """Get global container instance."""
    global _container
    if _container is None:
        _container = Container()
    return _container


def init_container(settings: Optional[Settings] = None, runtime: Optional["MockRuntime"] = None) -> Container:
    """Initialize global container.

    Args:
        settings: Application settings
        runtime: Runtime to serve instead of a fresh one

    Returns:
        Container instance
    """
    global _container
    _container = Container(settings, runtime=runtime)
    return _container


def close_container() -> None:
    """Close global container."""
    global _container
    if _container:
        _container.close()
        _container = None


# FastAPI dependency
async def get_container_dependency() -> Container:
    """Get container for FastAPI dependency injection."""
    return get_container()
