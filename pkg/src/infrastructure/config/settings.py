"""Configuration settings using Pydantic."""

from pathlib import Path
from typing import Dict, List, Optional
from enum import Enum

from pydantic import AliasChoices, Field, field_validator, model_validator
from pydantic_settings import BaseSettings


class Environment(str, Enum):
    """Application environment."""
    DEVELOPMENT = "development"
    TESTING = "testing"
    PRODUCTION = "production"


class LogLevel(str, Enum):
    """Log levels."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class Settings(BaseSettings):
    """Application settings."""

    # Environment
    environment: Environment = Field(
        default=Environment.DEVELOPMENT,
        description="Application environment"
    )
    debug: bool = Field(
        default=False,
        description="Debug mode"
    )

    # Application
    app_name: str = Field(
        default="tosca2occi",
        description="Application name"
    )
    app_version: str = Field(
        default="1.0.0",
        description="Application version"
    )

    # Fixtures
    fixtures_dir: Path = Field(
        default=Path(__file__).resolve().parents[3] / "fixtures",
        validation_alias=AliasChoices("TOSCA2OCCI_FIXTURES", "fixtures_dir"),
        description="Directory holding extensions, types, topologies and profiles"
    )

    # Mapping
    tosca_scheme: str = Field(
        default="http://occiware.org/tosca#",
        description="Scheme of generated TOSCA mixins"
    )
    tosca_extension_name: str = Field(
        default="tosca",
        description="Name of the generated extension"
    )
    type_aliases: Dict[str, str] = Field(
        default_factory=dict,
        description="Alias type name -> canonical type name"
    )

    # Orchestration
    gate_poll_interval: float = Field(
        default=0.05,
        gt=0,
        description="Seconds between state gate polls"
    )
    gate_timeout: float = Field(
        default=10.0,
        gt=0,
        description="Seconds before a state gate gives up"
    )

    # Mock runtime
    activation_delay: float = Field(
        default=0.02,
        ge=0,
        description="Simulated seconds before infrastructure auto-activates"
    )
    deterministic: bool = Field(
        default=False,
        description="Zero activation delay and stable ordering"
    )

    # Server
    runtime_host: str = Field(
        default="127.0.0.1",
        description="Mock runtime host"
    )
    runtime_port: int = Field(
        default=8080,
        description="Mock runtime port"
    )
    runtime_url: Optional[str] = Field(
        default=None,
        description="Runtime base URL used by clients (defaults to host and port)"
    )
    runtime_request_timeout: float = Field(
        default=5.0,
        gt=0,
        description="HTTP request timeout in seconds"
    )
    api_docs_enabled: bool = Field(
        default=True,
        description="Serve OpenAPI docs of the runtime API"
    )
    api_cors_origins: List[str] = Field(
        default_factory=lambda: ["*"],
        description="Allowed CORS origins"
    )

    # Logging
    log_level: LogLevel = Field(
        default=LogLevel.INFO,
        description="Log level"
    )
    log_format: str = Field(
        default="text",
        description="Log format (json or text)"
    )

    @field_validator("fixtures_dir", mode="before")
    @classmethod
    def expand_path(cls, v):
        """Expand path with home directory."""
        if isinstance(v, str):
            v = Path(v)
        return v.expanduser().resolve()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        if v not in ("json", "text"):
            raise ValueError("log_format must be 'json' or 'text'")
        return v

    @model_validator(mode="after")
    def apply_deterministic(self):
        """Deterministic mode activates infrastructure immediately."""
        if self.deterministic:
            self.activation_delay = 0.0
        return self

    @property
    def effective_runtime_url(self) -> str:
        return self.runtime_url or f"http://{self.runtime_host}:{self.runtime_port}"

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "TOSCA2OCCI_",
        "case_sensitive": False,
        "extra": "ignore",
        "validate_assignment": False,
        "populate_by_name": True,
    }


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get settings instance (for dependency injection)."""
    return settings


def reload_settings(**overrides) -> Settings:
    """Reload settings from environment, applying explicit overrides."""
    global settings
    settings = Settings(**overrides)
    return settings
