"""Runtime-side entities, lifecycle machines, requests and faults."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from .configuration import AnyEntity
from .orchestration import Verb


class FaultKind(str, Enum):
    """Faults the simulated runtime can inject."""
    HOLD_STATE = "hold-state"
    REJECT_CREATE = "reject-create"
    DROP_ACTION = "drop-action"


@dataclass(frozen=True)
class FaultSpec:
    """Registered fault."""
    kind: FaultKind
    entity_id: Optional[str] = None
    nth: Optional[int] = None
    action: Optional[str] = None

    def __post_init__(self):
        if self.kind == FaultKind.HOLD_STATE and not self.entity_id:
            raise ValueError("hold-state needs an entity id")
        if self.kind == FaultKind.REJECT_CREATE and (self.nth is None or self.nth < 1):
            raise ValueError("reject-create needs nth >= 1")


@dataclass(frozen=True)
class LifecycleFsm:
    """States and (trigger, source, dest) transitions of a kind family."""
    family: str
    states: Tuple[str, ...]
    initial: str
    transitions: Tuple[Tuple[str, str, str], ...]
    activation: Optional[str] = None

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"Initial state {self.initial} not among states")
        for trigger, source, dest in self.transitions:
            if source not in self.states or dest not in self.states:
                raise ValueError(f"Transition {trigger} uses undeclared states")

    @property
    def triggers(self) -> Tuple[str, ...]:
        seen = []
        for trigger, _, _ in self.transitions:
            if trigger not in seen:
                seen.append(trigger)
        return tuple(seen)

    def next_state(self, state: str, trigger: str) -> Optional[str]:
        for name, source, dest in self.transitions:
            if name == trigger and source == state:
                return dest
        return None


@dataclass
class RuntimeEntity:
    """Stored entity with lifecycle state and provider id."""
    entity: AnyEntity
    provider_id: str
    fsm: Optional[LifecycleFsm] = None
    state: Optional[str] = None


@dataclass(frozen=True)
class RuntimeRequest:
    """Request handled by the runtime."""
    verb: Verb
    entity_id: str
    body: Dict[str, Any] = field(default_factory=dict)
    action: Optional[str] = None


@dataclass(frozen=True)
class RuntimeResponse:
    """Status and JSON body of a handled request."""
    status: int
    body: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return 200 <= self.status < 300


@dataclass(frozen=True)
class TransitionRecord:
    """One lifecycle transition taken by an entity."""
    sequence: int
    entity_id: str
    trigger: str
    source: str
    dest: str
