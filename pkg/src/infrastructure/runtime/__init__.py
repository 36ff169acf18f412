"""Simulated runtime and runtime clients."""

from .clients import HttpRuntimeClient, InProcessRuntimeClient
from .lifecycle import FSM_BY_KIND, attach_lifecycle
from .mock_runtime import MockRuntime

__all__ = [
    "FSM_BY_KIND",
    "HttpRuntimeClient",
    "InProcessRuntimeClient",
    "MockRuntime",
    "attach_lifecycle",
]
