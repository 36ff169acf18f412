"""Simulated OCCI runtime: a runtime model of live entities driven by lifecycle machines."""

import logging
import threading
from dataclasses import dataclass, replace
from typing import Any, Dict, Iterable, List, Optional

import networkx as nx
from transitions import MachineError

from ...domain.models.configuration import (
    AnyEntity,
    Link,
    MixinBase,
    OcciConfiguration,
    entity_from_dict,
    entity_to_dict,
)
from ...domain.models.occi import CategoryRef
from ...domain.models.orchestration import Verb
from ...domain.models.runtime import (
    FaultKind,
    FaultSpec,
    RuntimeEntity,
    RuntimeRequest,
    RuntimeResponse,
    TransitionRecord,
)
from ...domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENTLINK_KIND,
    COMPUTE_KIND,
    PROVIDER_ID_ATTRIBUTE,
    RUNTIME_ID_MIXIN,
    STATE_ATTRIBUTES,
    is_volatile_attribute,
)
from ...domain.services.extension_set import ExtensionSet
from ...domain.services.validation import check_entity
from ...shared.exceptions import APIException, BadRequestError, ConflictError, EntityNotFoundError
from .lifecycle import FSM_BY_KIND, attach_lifecycle


logger = logging.getLogger(__name__)

ACTIVE_STATE = "active"
PROVIDER_ID_PREFIX = "mock-"

REJECTED_VIOLATIONS = frozenset({
    "UnknownKind",
    "RoleMismatch",
    "MixinNotApplicable",
    "UndeclaredAttribute",
    "InvalidAttributeValue",
})

STATUS_BY_VERB = {
    Verb.CREATE: 201,
    Verb.UPDATE: 200,
    Verb.DELETE: 200,
    Verb.ACTION: 200,
}


@dataclass
class _ActiveFault:
    """Registered fault with its match counter."""
    spec: FaultSpec
    seen: int = 0
    fired: bool = False


class MockRuntime:
    """In-process stand-in for an OCCI runtime server.

    All requests are serialised through one re-entrant lock. Snapshots are
    built from frozen entities under the same lock, so readers never observe
    a half-applied request.
    """

    def __init__(self, extensions: Optional[ExtensionSet] = None, activation_delay: float = 0.0):
        """Initialize runtime.

        Args:
            extensions: Extension set entities are checked against; None stores them unchecked
            activation_delay: Seconds before infrastructure auto-activates; 0 activates synchronously
        """
        self.extensions = extensions
        self.activation_delay = activation_delay
        self._lock = threading.RLock()
        self._entities: Dict[str, RuntimeEntity] = {}
        self._faults: List[_ActiveFault] = []
        self._requests: List[RuntimeRequest] = []
        self._transitions: List[TransitionRecord] = []
        self._timers: List[threading.Timer] = []
        self._provider_sequence = 0

    # Requests

    def handle_request(self, request: RuntimeRequest) -> RuntimeResponse:
        """Apply one request to the runtime model.

        Args:
            request: Verb, entity id, JSON body and action name

        Returns:
            201 for creates, 200 otherwise; 400, 404 or 409 with an error body
        """
        logger.debug(f"{request.verb.value} {request.entity_id} {request.action or ''}".rstrip())
        handlers = {
            Verb.CREATE: self._create,
            Verb.UPDATE: self._update,
            Verb.DELETE: self._delete,
            Verb.ACTION: self._action,
        }
        try:
            with self._lock:
                body = handlers[request.verb](request)
        except APIException as e:
            logger.debug(f"Rejected {request.verb.value} {request.entity_id}: {e.message}")
            return RuntimeResponse(e.status_code, {"error": e.to_dict()})
        return RuntimeResponse(STATUS_BY_VERB[request.verb], body)

    def _create(self, request: RuntimeRequest) -> Dict[str, Any]:
        if request.entity_id in self._entities:
            raise ConflictError(f"Entity {request.entity_id} already exists", request.entity_id)
        self._reject_if_faulted(request.entity_id)
        entity = self._parse(request.body, request.entity_id)
        self._validate(entity)
        if isinstance(entity, Link):
            self._check_endpoints(entity, require_active=True)

        self._provider_sequence += 1
        record = RuntimeEntity(entity=entity, provider_id=f"{PROVIDER_ID_PREFIX}{self._provider_sequence:06d}")
        attach_lifecycle(record, FSM_BY_KIND.get(self._family_kind(entity.kind)))
        self._entities[entity.id] = record
        self._requests.append(request)
        logger.debug(f"Stored {entity.id} as {record.provider_id} in state {record.state}")
        self._schedule_activation(record)
        return self._entity_body(record)

    def _update(self, request: RuntimeRequest) -> Dict[str, Any]:
        record = self._require(request.entity_id)
        body = request.body
        data = entity_to_dict(record.entity)
        for key in ("title", "mixins", "source", "target"):
            if key in body:
                data[key] = body[key]
        attributes = dict(data["attributes"])
        for name, value in (body.get("attributes") or {}).items():
            if value is None:
                attributes.pop(name, None)
            else:
                attributes[name] = value
        data["attributes"] = attributes

        updated = self._parse(data, request.entity_id)
        if updated.is_link != record.entity.is_link:
            raise BadRequestError("An update cannot turn a resource into a link or back", request.entity_id)
        self._validate(updated)
        if isinstance(updated, Link):
            self._check_endpoints(updated, require_active=False)
        record.entity = updated
        self._requests.append(request)
        return self._entity_body(record)

    def _delete(self, request: RuntimeRequest) -> Dict[str, Any]:
        record = self._require(request.entity_id)
        if not record.entity.is_link:
            referencing = sorted(
                other.entity.id
                for other in self._entities.values()
                if isinstance(other.entity, Link)
                and request.entity_id in (other.entity.source, other.entity.target)
            )
            if referencing:
                raise ConflictError(
                    f"Entity {request.entity_id} is still referenced by {', '.join(referencing)}",
                    request.entity_id,
                )
        del self._entities[request.entity_id]
        self._requests.append(request)
        return {"id": request.entity_id, "deleted": True}

    def _action(self, request: RuntimeRequest) -> Dict[str, Any]:
        record = self._require(request.entity_id)
        if not request.action:
            raise BadRequestError("Action name missing", request.entity_id)
        if self._drops(request.entity_id, request.action):
            logger.info(f"Dropped action {request.action} on {request.entity_id}")
            return {"id": request.entity_id, "action": request.action, "dropped": True}

        if self._family_kind(record.entity.kind) == APPLICATION_KIND and request.action == "start":
            self._start_application(record)
        else:
            self._fire(record, request.action)
        self._requests.append(request)
        return self._entity_body(record)

    # Lifecycle

    def _fire(self, record: RuntimeEntity, trigger: str) -> None:
        entity_id = record.entity.id
        fsm = record.fsm
        if fsm is None or record.state is None:
            raise ConflictError(f"Entity {entity_id} has no lifecycle", entity_id)
        dest = fsm.next_state(record.state, trigger)
        if dest is None:
            raise ConflictError(f"Action {trigger} is not allowed in state {record.state}", entity_id)
        source = record.state
        try:
            record.trigger(trigger)  # type: ignore[attr-defined]
        except MachineError as e:
            raise ConflictError(str(e.value), entity_id, cause=e)
        self._transitions.append(
            TransitionRecord(len(self._transitions) + 1, entity_id, trigger, source, record.state)  # type: ignore[arg-type]
        )
        logger.info(f"{entity_id}: {source} -[{trigger}]-> {record.state}")

    def _schedule_activation(self, record: RuntimeEntity) -> None:
        if record.fsm is None or record.fsm.activation is None:
            return
        if self._holds(record.entity.id):
            logger.info(f"Holding {record.entity.id} in state {record.state}")
            return
        if self.activation_delay <= 0:
            self._activate(record.entity.id)
            return
        timer = threading.Timer(self.activation_delay, self._activate, args=(record.entity.id,))
        timer.daemon = True
        self._timers = [t for t in self._timers if t.is_alive()]
        self._timers.append(timer)
        timer.start()

    def _activate(self, entity_id: str) -> None:
        with self._lock:
            record = self._entities.get(entity_id)
            if record is None or record.fsm is None or record.fsm.activation is None:
                return
            if self._holds(entity_id):
                return
            if record.fsm.next_state(record.state, record.fsm.activation) is None:  # type: ignore[arg-type]
                return
            self._fire(record, record.fsm.activation)

    def _start_application(self, application: RuntimeEntity) -> None:
        """Deploy, configure and start every component in dependency order, then the application."""
        app_id = application.entity.id
        links = [r.entity for r in self._entities.values() if isinstance(r.entity, Link)]
        components = sorted({
            link.target
            for link in links
            if link.source == app_id
            and self._is_kind(link.kind, COMPONENTLINK_KIND)
            and link.target in self._entities
        })

        graph = nx.DiGraph()
        graph.add_nodes_from(components)
        for link in links:
            if link.source in components and link.target in components and self._is_kind(link.kind, COMPONENTLINK_KIND):
                graph.add_edge(link.target, link.source)
        try:
            order = list(nx.lexicographical_topological_sort(graph, key=str))
        except nx.NetworkXUnfeasible as e:
            raise ConflictError(f"Components of {app_id} depend on each other cyclically", app_id, cause=e)

        for component_id in order:
            self._start_platform(self._entities[component_id])
        self._start_platform(application)

    def _start_platform(self, record: RuntimeEntity) -> None:
        if record.state == ACTIVE_STATE:
            return
        if record.state == "undeployed":
            self._fire(record, "deploy")
            self._fire(record, "configure")
        self._fire(record, "start")

    # Faults

    def inject_fault(self, spec: FaultSpec) -> None:
        """Register a fault altering later requests."""
        with self._lock:
            self._faults.append(_ActiveFault(spec))
        logger.info(f"Injected fault {spec.kind.value} entity={spec.entity_id} nth={spec.nth} action={spec.action}")

    def clear_faults(self) -> None:
        with self._lock:
            self._faults.clear()

    def _holds(self, entity_id: str) -> bool:
        return any(
            f.spec.kind == FaultKind.HOLD_STATE and f.spec.entity_id == entity_id for f in self._faults
        )

    def _drops(self, entity_id: str, action: str) -> bool:
        for fault in self._faults:
            spec = fault.spec
            if spec.kind != FaultKind.DROP_ACTION:
                continue
            if spec.entity_id not in (None, entity_id) or spec.action not in (None, action):
                continue
            return True
        return False

    def _reject_if_faulted(self, entity_id: str) -> None:
        for fault in self._faults:
            spec = fault.spec
            if spec.kind != FaultKind.REJECT_CREATE or fault.fired:
                continue
            if spec.entity_id not in (None, entity_id):
                continue
            fault.seen += 1
            if fault.seen == spec.nth:
                fault.fired = True
                raise ConflictError(f"Create #{spec.nth} rejected by injected fault", entity_id)

    # Reads

    def snapshot(self) -> OcciConfiguration:
        """Point-in-time configuration of every live entity, state attributes and provider ids included."""
        with self._lock:
            entities = [self._materialize(record) for _, record in sorted(self._entities.items())]
            use = tuple(self.extensions.names) if self.extensions is not None else ()
        return OcciConfiguration(
            use=use,
            resources=tuple(e for e in entities if not e.is_link),  # type: ignore[misc]
            links=tuple(e for e in entities if e.is_link),  # type: ignore[misc]
        )

    def get_entity(self, entity_id: str) -> Optional[AnyEntity]:
        with self._lock:
            record = self._entities.get(entity_id)
            return self._materialize(record) if record is not None else None

    def get_state(self, entity_id: str) -> Optional[str]:
        with self._lock:
            record = self._entities.get(entity_id)
            return record.state if record is not None else None

    def get_provider_id(self, entity_id: str) -> Optional[str]:
        with self._lock:
            record = self._entities.get(entity_id)
            return record.provider_id if record is not None else None

    @property
    def request_log(self) -> List[RuntimeRequest]:
        """Requests that changed the runtime model, in application order."""
        with self._lock:
            return list(self._requests)

    @property
    def transition_log(self) -> List[TransitionRecord]:
        with self._lock:
            return list(self._transitions)

    def replay(self, requests: Iterable[RuntimeRequest]) -> List[RuntimeResponse]:
        """Apply a recorded request log, e.g. into a fresh runtime."""
        return [self.handle_request(request) for request in requests]

    def close(self) -> None:
        """Cancel pending activations."""
        with self._lock:
            for timer in self._timers:
                timer.cancel()
            self._timers.clear()

    # Helpers

    def _require(self, entity_id: str) -> RuntimeEntity:
        record = self._entities.get(entity_id)
        if record is None:
            raise EntityNotFoundError(entity_id)
        return record

    @staticmethod
    def _parse(data: Dict[str, Any], entity_id: str) -> AnyEntity:
        try:
            entity = entity_from_dict(data, entity_id)
        except (ValueError, KeyError, TypeError) as e:
            raise BadRequestError(str(e), entity_id, cause=e)
        return _without_volatile(entity)

    def _validate(self, entity: AnyEntity) -> None:
        if self.extensions is None:
            return
        violations = [v for v in check_entity(entity, self.extensions) if v.name in REJECTED_VIOLATIONS]
        if violations:
            raise BadRequestError("; ".join(v.message for v in violations), entity.id)

    def _check_endpoints(self, link: Link, require_active: bool) -> None:
        for end in (link.source, link.target):
            record = self._entities.get(end)
            if record is None or record.entity.is_link:
                raise ConflictError(f"Link endpoint {end} is not a live resource", link.id)
            if (
                require_active
                and self._family_kind(record.entity.kind) == COMPUTE_KIND
                and record.state != ACTIVE_STATE
            ):
                raise ConflictError(f"Compute {end} is {record.state}, not {ACTIVE_STATE}", link.id)

    def _family_kind(self, kind: CategoryRef) -> Optional[CategoryRef]:
        """Nearest kind in the ancestry that has a lifecycle."""
        if kind in FSM_BY_KIND:
            return kind
        if self.extensions is not None:
            for ancestor in self.extensions.kind_ancestry(kind):
                if ancestor in FSM_BY_KIND:
                    return ancestor
        return None

    def _is_kind(self, kind: CategoryRef, base: CategoryRef) -> bool:
        if kind == base:
            return True
        return self.extensions is not None and self.extensions.is_kind(kind, base)

    def _materialize(self, record: RuntimeEntity) -> AnyEntity:
        entity = record.entity
        attributes = dict(entity.attributes)
        family = self._family_kind(entity.kind)
        if family in STATE_ATTRIBUTES and record.state is not None:
            attributes[STATE_ATTRIBUTES[family]] = record.state  # type: ignore[index]
        bases = tuple(
            MixinBase(mb.mixin, {**mb.attributes, PROVIDER_ID_ATTRIBUTE: record.provider_id})
            if mb.mixin == RUNTIME_ID_MIXIN
            else mb
            for mb in entity.mixin_bases
        )
        return replace(entity, attributes=attributes, mixin_bases=bases)

    def _entity_body(self, record: RuntimeEntity) -> Dict[str, Any]:
        return entity_to_dict(self._materialize(record))


def _without_volatile(entity: AnyEntity) -> AnyEntity:
    """Copy without runtime-maintained attribute values."""
    return replace(
        entity,
        attributes={k: v for k, v in entity.attributes.items() if not is_volatile_attribute(k)},
        mixin_bases=tuple(
            MixinBase(mb.mixin, {k: v for k, v in mb.attributes.items() if not is_volatile_attribute(k)})
            for mb in entity.mixin_bases
        ),
    )


