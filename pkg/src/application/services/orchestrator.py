"""Models@run.time reconciliation: extract, compare, build the order graph, plan and execute."""

import logging
import time
from typing import Any, Callable, Dict, List, Optional, Set, Tuple

import networkx as nx

from ...domain.models.configuration import AnyEntity, OcciConfiguration, entity_from_dict, entity_to_dict
from ...domain.models.occi import CategoryRef
from ...domain.models.orchestration import (
    DiffResult,
    EdgeReason,
    EntityUpdate,
    ExecutionReport,
    OrderEdge,
    ProvisioningOrderGraph,
    ProvisioningPlan,
    Request,
    StateGate,
    StepOutcome,
    StepStatus,
    Verb,
)
from ...domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENT_KIND,
    COMPUTE_KIND,
    DEFAULT_TOSCA_SCHEME,
    NETWORK_KIND,
    PLACEMENTLINK_KIND,
    STORAGE_KIND,
    is_volatile_attribute,
)
from ...domain.repositories.runtime_client import RuntimeClient
from ...domain.services.extension_set import ExtensionSet
from ...shared.exceptions import (
    CyclicDependencyError,
    ExecutionError,
    GateTimeoutError,
    RuntimeUnreachableError,
)
from .mapping_rules import CONNECTS_TO, DEPENDS_ON, HOSTED_ON, mangle_name


logger = logging.getLogger(__name__)

ACTIVE_STATE = "active"
START_ACTION = "start"

KIND_RANKS = {
    COMPUTE_KIND: 0,
    STORAGE_KIND: 1,
    NETWORK_KIND: 1,
    APPLICATION_KIND: 2,
    COMPONENT_KIND: 3,
}
OTHER_RANK = 4

PSEUDO_ATTRIBUTES = ("title", "source", "target", "mixins")


def _comparable(entity: AnyEntity) -> Dict[str, Any]:
    return {
        name: value
        for name, value in entity.flat_attributes().items()
        if value is not None and not is_volatile_attribute(name)
    }


def entity_changes(desired: AnyEntity, current: AnyEntity) -> Dict[str, Any]:
    """Names and desired values of everything that differs between two matched entities.

    Volatile attributes are ignored and None counts as absent. Title,
    endpoints and the mixin set appear under the pseudo names `title`,
    `source`, `target` and `mixins`.
    """
    changes: Dict[str, Any] = {}
    if desired.title != current.title:
        changes["title"] = desired.title
    for end in ("source", "target"):
        if getattr(desired, end, None) != getattr(current, end, None):
            changes[end] = getattr(desired, end, None)
    if set(desired.mixins) != set(current.mixins):
        changes["mixins"] = sorted(desired.mixins)
    wanted, actual = _comparable(desired), _comparable(current)
    for name in sorted(set(wanted) | set(actual)):
        if wanted.get(name) != actual.get(name):
            changes[name] = wanted.get(name)
    return changes


class Orchestrator:
    """Reconciles a runtime towards a desired configuration."""

    def __init__(
        self,
        extensions: Optional[ExtensionSet] = None,
        tosca_scheme: str = DEFAULT_TOSCA_SCHEME,
        poll_interval: float = 0.05,
        gate_timeout: float = 10.0,
        sleep: Callable[[float], None] = time.sleep,
        clock: Callable[[], float] = time.monotonic,
    ):
        """Initialize orchestrator.

        Args:
            extensions: Linked extensions, used for relationship mixin closures and kind ranks
            tosca_scheme: Scheme of the generated relationship mixins
            poll_interval: Seconds between state gate polls
            gate_timeout: Seconds before a state gate gives up
            sleep: Sleep function used while polling
            clock: Monotonic clock
        """
        self.extensions = extensions
        self.poll_interval = poll_interval
        self.gate_timeout = gate_timeout
        self._sleep = sleep
        self._clock = clock
        self._relationship_reasons: Tuple[Tuple[CategoryRef, EdgeReason], ...] = (
            (f"{tosca_scheme}{mangle_name(HOSTED_ON)}", EdgeReason.HOSTED),
            (f"{tosca_scheme}{mangle_name(CONNECTS_TO)}", EdgeReason.CONNECTS),
            (f"{tosca_scheme}{mangle_name(DEPENDS_ON)}", EdgeReason.DEPENDS),
        )

    # Extract and compare

    def extract(self, runtime: RuntimeClient) -> OcciConfiguration:
        """Current runtime configuration, lifecycle states included.

        Raises:
            RuntimeUnreachableError: If the runtime cannot be contacted
        """
        cfg = runtime.get_configuration()
        logger.info(f"Extracted runtime configuration: {len(cfg.resources)} resources, {len(cfg.links)} links")
        return cfg

    def compare(self, desired: OcciConfiguration, current: OcciConfiguration) -> DiffResult:
        """Classify entities by (id, kind) into create, update, delete and unchanged.

        Args:
            desired: Target configuration
            current: Extracted runtime configuration

        Returns:
            Creates and updates in desired order, deletes in current order
        """
        current_by_key: Dict[Tuple[str, str], AnyEntity] = {}
        for entity in current.entities():
            current_by_key.setdefault((entity.id, entity.kind), entity)

        to_create: List[AnyEntity] = []
        to_update: List[EntityUpdate] = []
        unchanged: List[AnyEntity] = []
        desired_keys: Set[Tuple[str, str]] = set()
        for entity in desired.entities():
            key = (entity.id, entity.kind)
            if key in desired_keys:
                continue
            desired_keys.add(key)
            match = current_by_key.get(key)
            if match is None:
                to_create.append(entity)
                continue
            changes = entity_changes(entity, match)
            if changes:
                to_update.append(EntityUpdate(entity.id, entity.kind, changes, entity))
            else:
                unchanged.append(entity)

        to_delete = [entity for key, entity in current_by_key.items() if key not in desired_keys]
        diff = DiffResult(tuple(to_create), tuple(to_update), tuple(to_delete), tuple(unchanged))
        logger.info(
            f"Diff: {len(diff.to_create)} to create, {len(diff.to_update)} to update, "
            f"{len(diff.to_delete)} to delete, {len(diff.unchanged)} unchanged"
        )
        return diff

    # Graph

    def _link_mixin_closure(self, link: AnyEntity) -> Set[CategoryRef]:
        if self.extensions is None:
            return set(link.mixins)
        return self.extensions.closure_of(link.mixins) | set(link.mixins)

    def _relationship_reason(self, link: AnyEntity) -> Optional[EdgeReason]:
        closure = self._link_mixin_closure(link)
        for mixin, reason in self._relationship_reasons:
            if mixin in closure:
                return reason
        return None

    def build_graph(self, diff: DiffResult, desired: OcciConfiguration) -> ProvisioningOrderGraph:
        """Dependencies between the entities to create.

        Every link waits for its endpoints. A component waits for the compute
        it is placed on and for the target of its HostedOn, ConnectsTo or
        DependsOn links.

        Raises:
            CyclicDependencyError: If the dependencies loop
        """
        nodes = [entity.id for entity in diff.to_create]
        node_set = set(nodes)
        edges: List[OrderEdge] = []
        seen: Set[Tuple[str, str]] = set()

        def add(source: str, target: str, reason: EdgeReason) -> None:
            if source in node_set and target in node_set and (source, target) not in seen:
                seen.add((source, target))
                edges.append(OrderEdge(source, target, reason))

        for entity in diff.to_create:
            if entity.is_link:
                add(entity.id, entity.source, EdgeReason.LINK_ENDPOINT)  # type: ignore[union-attr]
                add(entity.id, entity.target, EdgeReason.LINK_ENDPOINT)  # type: ignore[union-attr]
        for link in desired.links:
            if link.kind == PLACEMENTLINK_KIND:
                add(link.source, link.target, EdgeReason.PLACEMENT)
                continue
            reason = self._relationship_reason(link)
            if reason is not None:
                add(link.source, link.target, reason)

        graph = nx.DiGraph()
        graph.add_nodes_from(nodes)
        graph.add_edges_from((edge.source, edge.target) for edge in edges)
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            return ProvisioningOrderGraph(tuple(nodes), tuple(edges))
        raise CyclicDependencyError([edge[0] for edge in cycle] + [cycle[0][0]])

    # Plan

    def _rank(self, kind: CategoryRef) -> int:
        ancestry = self.extensions.kind_ancestry(kind) if self.extensions is not None else []
        for ref in ancestry or [kind]:
            if ref in KIND_RANKS:
                return KIND_RANKS[ref]
        return OTHER_RANK

    @staticmethod
    def _relinked(diff: DiffResult) -> Dict[str, AnyEntity]:
        """Kept links that must be deleted and created again, by id.

        A link is relinked when its source or target changes, or when an
        endpoint is a resource being deleted (a kind change deletes and
        recreates the resource under the same id).
        """
        removed = {entity.id for entity in diff.to_delete if not entity.is_link}
        relinked: Dict[str, AnyEntity] = {}
        for update in diff.to_update:
            link = update.desired
            if not link.is_link:
                continue
            if "source" in update.changed or "target" in update.changed:
                relinked[link.id] = link
            elif {link.source, link.target} & removed:  # type: ignore[union-attr]
                relinked[link.id] = link
        for link in diff.unchanged:
            if link.is_link and {link.source, link.target} & removed:  # type: ignore[union-attr]
                relinked[link.id] = link
        return relinked

    def plan(self, diff: DiffResult, graph: ProvisioningOrderGraph) -> ProvisioningPlan:
        """Sequence the diff into provisioning requests.

        Order: link deletes, resource deletes, updates, resource creates in
        dependency order, link creates gated on their compute being active,
        then a start action on each new application. Ties break on kind rank
        and id. Relinked links are deleted with the other links and created
        with them, so no request ever points a link at a missing resource.

        Args:
            diff: Comparison result
            graph: Acyclic order graph over the entities to create

        Returns:
            Plan with deterministic step order
        """
        steps: List[Request] = []
        relinked = self._relinked(diff)

        deleted = list(diff.to_delete)
        for entity_id in sorted({e.id for e in deleted if e.is_link} | set(relinked)):
            steps.append(Request(Verb.DELETE, entity_id))
        for entity in sorted((e for e in deleted if not e.is_link), key=lambda e: (-self._rank(e.kind), e.id)):
            steps.append(Request(Verb.DELETE, entity.id))

        for update in sorted(diff.to_update, key=lambda u: u.entity_id):
            if update.entity_id not in relinked:
                steps.append(Request(Verb.UPDATE, update.entity_id, self._update_payload(update)))

        created = {entity.id: entity for entity in diff.to_create}
        order = nx.DiGraph()
        order.add_nodes_from(entity_id for entity_id, entity in created.items() if not entity.is_link)
        for edge in graph.edges:
            if edge.source in order and edge.target in order:
                order.add_edge(edge.target, edge.source)
        for entity_id in nx.lexicographical_topological_sort(
            order, key=lambda n: (self._rank(created[n].kind), n)
        ):
            steps.append(Request(Verb.CREATE, entity_id, entity_to_dict(created[entity_id])))

        kinds: Dict[str, CategoryRef] = {entity.id: entity.kind for entity in diff.unchanged}
        kinds.update({update.entity_id: update.kind for update in diff.to_update})
        kinds.update({entity_id: entity.kind for entity_id, entity in created.items()})
        links = {entity_id: entity for entity_id, entity in created.items() if entity.is_link}
        links.update(relinked)
        for entity_id in sorted(links):
            link = links[entity_id]
            gate = None
            for end in (link.source, link.target):  # type: ignore[union-attr]
                if kinds.get(end) is not None and self._rank(kinds[end]) == KIND_RANKS[COMPUTE_KIND]:
                    gate = StateGate(end, ACTIVE_STATE)
                    break
            steps.append(Request(Verb.CREATE, entity_id, entity_to_dict(link), gate=gate))

        for entity_id in sorted(created):
            if not created[entity_id].is_link and self._rank(created[entity_id].kind) == KIND_RANKS[APPLICATION_KIND]:
                steps.append(Request(Verb.ACTION, entity_id, action_name=START_ACTION))

        plan = ProvisioningPlan(tuple(steps))
        logger.info(f"Planned {len(plan)} steps")
        return plan

    @staticmethod
    def _update_payload(update: EntityUpdate) -> Dict[str, Any]:
        desired = update.desired
        attributes = {
            name: value for name, value in desired.attributes.items() if not is_volatile_attribute(name)
        }
        for name, value in update.changed.items():
            if value is None and name not in PSEUDO_ATTRIBUTES and name not in attributes:
                attributes[name] = None
        payload: Dict[str, Any] = {
            "title": desired.title,
            "attributes": attributes,
            "mixins": entity_to_dict(desired)["mixins"],
            "changed": sorted(update.changed),
        }
        if desired.is_link:
            payload["source"] = desired.source  # type: ignore[union-attr]
            payload["target"] = desired.target  # type: ignore[union-attr]
        return payload

    def plan_for(self, desired: OcciConfiguration, current: OcciConfiguration) -> ProvisioningPlan:
        """Compare, build the order graph and plan in one go."""
        diff = self.compare(desired, current)
        return self.plan(diff, self.build_graph(diff, desired))

    # Execute

    def _await_gate(self, gate: StateGate, runtime: RuntimeClient) -> None:
        deadline = self._clock() + self.gate_timeout
        while True:
            state = runtime.get_state(gate.entity_id)
            if state == gate.required_state:
                return
            if self._clock() >= deadline:
                raise GateTimeoutError(gate.entity_id, gate.required_state, state, self.gate_timeout)
            self._sleep(self.poll_interval)

    @staticmethod
    def _send(step: Request, runtime: RuntimeClient) -> None:
        if step.verb == Verb.CREATE:
            runtime.create_entity(entity_from_dict(step.payload, step.entity_id))
        elif step.verb == Verb.UPDATE:
            runtime.update_entity(step.entity_id, {k: v for k, v in step.payload.items() if k != "changed"})
        elif step.verb == Verb.DELETE:
            runtime.delete_entity(step.entity_id)
        else:
            runtime.trigger_action(step.entity_id, step.action_name or START_ACTION)

    def execute(self, plan: ProvisioningPlan, runtime: RuntimeClient) -> ExecutionReport:
        """Run plan steps in order, waiting on state gates.

        On the first failure the remaining steps are marked skipped and the
        error is raised with the report attached as `report`.

        Raises:
            GateTimeoutError: If a gated entity does not reach its state in time
            RequestError: If the runtime rejects a request
            RuntimeUnreachableError: If the runtime cannot be contacted
        """
        report = ExecutionReport()
        started = self._clock()
        for index, step in enumerate(plan.steps):
            step_started = self._clock()
            try:
                if step.gate is not None:
                    self._await_gate(step.gate, runtime)
                self._send(step, runtime)
            except (ExecutionError, RuntimeUnreachableError) as e:
                report.outcomes.append(
                    StepOutcome(index, step, StepStatus.FAILED, e.message, self._clock() - step_started)
                )
                report.outcomes.extend(
                    StepOutcome(later, plan.steps[later], StepStatus.SKIPPED)
                    for later in range(index + 1, len(plan.steps))
                )
                report.duration = self._clock() - started
                e.report = report  # type: ignore[union-attr]
                logger.error(f"Step {index} {step.verb.value} {step.entity_id} failed: {e.message}")
                raise
            report.outcomes.append(
                StepOutcome(index, step, StepStatus.SUCCEEDED, duration=self._clock() - step_started)
            )
            logger.info(f"Step {index} {step.verb.value} {step.entity_id} succeeded")
        report.duration = self._clock() - started
        return report

    def reconcile(self, desired: OcciConfiguration, runtime: RuntimeClient) -> ExecutionReport:
        """Bring the runtime to the desired configuration and check conformance.

        Returns:
            Execution report whose `conformant` tells whether the runtime now matches
        """
        current = self.extract(runtime)
        diff = self.compare(desired, current)
        graph = self.build_graph(diff, desired)
        report = self.execute(self.plan(diff, graph), runtime)
        report.conformant = self.compare(desired, self.extract(runtime)).is_empty
        logger.info(f"Reconciled {report.plan_size} steps in {report.duration:.3f}s, conformant={report.conformant}")
        return report
