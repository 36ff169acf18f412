"""Reconciliation data: diffs, provisioning order graphs, plans and reports."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .configuration import AnyEntity


class Verb(str, Enum):
    """Request verbs sent to a runtime."""
    CREATE = "CREATE"
    UPDATE = "UPDATE"
    DELETE = "DELETE"
    ACTION = "ACTION"


class EdgeReason(str, Enum):
    """Why one entity must be provisioned after another."""
    LINK_ENDPOINT = "link-endpoint"
    PLACEMENT = "placement"
    CONNECTS = "connects"
    HOSTED = "hosted"
    DEPENDS = "depends"


class StepStatus(str, Enum):
    """Outcome of one plan step."""
    SUCCEEDED = "succeeded"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class EntityUpdate:
    """Entity present on both sides whose attributes differ."""
    entity_id: str
    kind: str
    changed: Dict[str, Any]
    desired: AnyEntity


@dataclass(frozen=True)
class DiffResult:
    """Classification of desired and current entities by (id, kind)."""
    to_create: Tuple[AnyEntity, ...] = ()
    to_update: Tuple[EntityUpdate, ...] = ()
    to_delete: Tuple[AnyEntity, ...] = ()
    unchanged: Tuple[AnyEntity, ...] = ()

    @property
    def is_empty(self) -> bool:
        """True when nothing has to change."""
        return not (self.to_create or self.to_update or self.to_delete)

    def __len__(self) -> int:
        return len(self.to_create) + len(self.to_update) + len(self.to_delete) + len(self.unchanged)


@dataclass(frozen=True)
class OrderEdge:
    """`source` waits for `target`."""
    source: str
    target: str
    reason: EdgeReason


@dataclass(frozen=True)
class ProvisioningOrderGraph:
    """Dependencies between entities to create."""
    nodes: Tuple[str, ...] = ()
    edges: Tuple[OrderEdge, ...] = ()

    def dependencies_of(self, node: str) -> List[str]:
        return sorted({e.target for e in self.edges if e.source == node})

    def has_edge(self, source: str, target: str) -> bool:
        return any(e.source == source and e.target == target for e in self.edges)


@dataclass(frozen=True)
class StateGate:
    """Precondition: an entity must be in a state before the step runs."""
    entity_id: str
    required_state: str


@dataclass(frozen=True)
class Request:
    """One provisioning step."""
    verb: Verb
    entity_id: str
    payload: Dict[str, Any] = field(default_factory=dict)
    action_name: Optional[str] = None
    gate: Optional[StateGate] = None


@dataclass(frozen=True)
class ProvisioningPlan:
    """Ordered provisioning steps."""
    steps: Tuple[Request, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Request]:
        return iter(self.steps)

    def index_of(self, verb: Verb, entity_id: str) -> int:
        """Position of the first step with this verb and entity, or -1."""
        for index, step in enumerate(self.steps):
            if step.verb == verb and step.entity_id == entity_id:
                return index
        return -1

    def of_verb(self, verb: Verb) -> List[Request]:
        return [step for step in self.steps if step.verb == verb]


@dataclass
class StepOutcome:
    """Result of executing one step."""
    index: int
    request: Request
    status: StepStatus
    error: Optional[str] = None
    duration: float = 0.0


@dataclass
class ExecutionReport:
    """Per-step outcomes of a plan execution."""
    outcomes: List[StepOutcome] = field(default_factory=list)
    duration: float = 0.0
    conformant: Optional[bool] = None

    @property
    def plan_size(self) -> int:
        return len(self.outcomes)

    @property
    def success(self) -> bool:
        return all(o.status == StepStatus.SUCCEEDED for o in self.outcomes)

    def with_status(self, status: StepStatus) -> List[StepOutcome]:
        return [o for o in self.outcomes if o.status == status]
