"""Tests for application settings."""

import pytest
from pydantic import ValidationError

from src.infrastructure.config.settings import Environment, LogLevel, Settings


class TestSettings:
    """Test settings defaults and validation."""

    def test_defaults(self, monkeypatch):
        """Test default values."""
        for name in ("TOSCA2OCCI_FIXTURES", "TOSCA2OCCI_DETERMINISTIC", "TOSCA2OCCI_LOG_FORMAT"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings(_env_file=None)

        assert settings.environment == Environment.DEVELOPMENT
        assert settings.tosca_scheme == "http://occiware.org/tosca#"
        assert settings.tosca_extension_name == "tosca"
        assert settings.log_level == LogLevel.INFO
        assert settings.activation_delay == 0.02
        assert (settings.fixtures_dir / "extensions").is_dir()

    def test_deterministic_zeroes_delay(self):
        """Test deterministic mode activates immediately."""
        settings = Settings(_env_file=None, deterministic=True, activation_delay=1.0)
        assert settings.activation_delay == 0.0

    def test_log_format(self):
        """Test only json and text log formats are accepted."""
        assert Settings(_env_file=None, log_format="json").log_format == "json"
        with pytest.raises(ValidationError):
            Settings(_env_file=None, log_format="xml")

    @pytest.mark.parametrize("field", ["gate_poll_interval", "gate_timeout", "runtime_request_timeout"])
    def test_positive_durations(self, field):
        """Test durations must be positive."""
        with pytest.raises(ValidationError):
            Settings(_env_file=None, **{field: 0})

    def test_runtime_url(self):
        """Test the runtime URL falls back to host and port."""
        assert Settings(_env_file=None, runtime_port=9000).effective_runtime_url == "http://127.0.0.1:9000"
        explicit = Settings(_env_file=None, runtime_url="http://runtime:1234")
        assert explicit.effective_runtime_url == "http://runtime:1234"

    def test_environment_variables(self, monkeypatch, tmp_path):
        """Test settings read prefixed environment variables."""
        monkeypatch.setenv("TOSCA2OCCI_FIXTURES", str(tmp_path))
        monkeypatch.setenv("TOSCA2OCCI_GATE_TIMEOUT", "2.5")

        settings = Settings(_env_file=None)

        assert settings.fixtures_dir == tmp_path.resolve()
        assert settings.gate_timeout == 2.5
