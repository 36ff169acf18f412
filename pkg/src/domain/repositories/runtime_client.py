"""Runtime client interface."""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from ..models.configuration import AnyEntity, OcciConfiguration


class RuntimeClient(ABC):
    """Port through which the orchestrator talks to an OCCI runtime.

    Implementations raise RequestError when the runtime rejects a request
    and RuntimeUnreachableError when it cannot be reached.
    """

    @abstractmethod
    def get_configuration(self) -> OcciConfiguration:
        """Snapshot of every live entity, state attributes included."""
        pass

    @abstractmethod
    def create_entity(self, entity: AnyEntity) -> Dict[str, Any]:
        """Create an entity; returns the stored representation."""
        pass

    @abstractmethod
    def update_entity(self, entity_id: str, changes: Dict[str, Any]) -> Dict[str, Any]:
        """Apply a partial update (attributes, mixins, title, source, target)."""
        pass

    @abstractmethod
    def delete_entity(self, entity_id: str) -> None:
        """Remove an entity."""
        pass

    @abstractmethod
    def trigger_action(self, entity_id: str, action: str) -> Dict[str, Any]:
        """Invoke a lifecycle action."""
        pass

    @abstractmethod
    def get_state(self, entity_id: str) -> Optional[str]:
        """Lifecycle state of an entity, or None if it has no state or does not exist."""
        pass

    def close(self) -> None:
        """Release client resources."""
