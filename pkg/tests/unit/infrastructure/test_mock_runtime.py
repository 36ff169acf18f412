"""Tests for the simulated OCCI runtime."""

import pytest

from src.domain.models.configuration import Link, Resource, entity_to_dict
from src.domain.models.orchestration import Verb
from src.domain.models.runtime import FaultKind, FaultSpec, RuntimeRequest, RuntimeResponse
from src.domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENT_KIND,
    COMPONENTLINK_KIND,
    COMPUTE_KIND,
    PLACEMENTLINK_KIND,
    STORAGE_KIND,
)
from src.infrastructure.runtime.clients import InProcessRuntimeClient
from src.infrastructure.runtime.mock_runtime import MockRuntime
from src.shared.exceptions import RequestError


VM = Resource(id="vm", kind=COMPUTE_KIND, title="vm", attributes={"occi.compute.cores": 2})
COMP = Resource(id="comp", kind=COMPONENT_KIND, title="comp")
APP = Resource(id="app", kind=APPLICATION_KIND, title="app")
PLACEMENT = Link(id="p1", kind=PLACEMENTLINK_KIND, source="comp", target="vm")
MEMBERSHIP = Link(id="c1", kind=COMPONENTLINK_KIND, source="app", target="comp")


def create(runtime: MockRuntime, entity) -> RuntimeResponse:
    return runtime.handle_request(RuntimeRequest(Verb.CREATE, entity.id, entity_to_dict(entity)))


def action(runtime: MockRuntime, entity_id: str, name: str) -> RuntimeResponse:
    return runtime.handle_request(RuntimeRequest(Verb.ACTION, entity_id, action=name))


class TestCreate:
    """Test creating entities."""

    def test_create_compute(self, mock_runtime):
        """Test a compute is stored, given a provider id and activated."""
        response = create(mock_runtime, VM)

        assert response.status == 201
        assert response.body["id"] == "vm"
        assert response.body["attributes"]["occi.compute.state"] == "active"
        assert mock_runtime.get_state("vm") == "active"
        assert mock_runtime.get_provider_id("vm") == "mock-000001"

    def test_component_starts_undeployed(self, mock_runtime):
        """Test platform entities wait for an explicit start."""
        create(mock_runtime, COMP)
        assert mock_runtime.get_state("comp") == "undeployed"

    def test_duplicate(self, mock_runtime):
        """Test creating an existing id conflicts."""
        create(mock_runtime, VM)
        response = create(mock_runtime, VM)

        assert response.status == 409
        assert response.body["error"]["code"] == "4009"

    @pytest.mark.parametrize("entity", [
        Resource(id="x", kind="http://example.org/unknown#thing"),
        Resource(id="x", kind=COMPUTE_KIND, attributes={"occi.compute.cores": "four"}),
        Resource(id="x", kind=COMPUTE_KIND, attributes={"no.such.attribute": 1}),
        Link(id="x", kind=COMPUTE_KIND, source="a", target="b"),
    ])
    def test_invalid_entities(self, mock_runtime, entity):
        """Test entities breaking their extensions are rejected."""
        response = create(mock_runtime, entity)

        assert response.status == 400
        assert mock_runtime.get_entity("x") is None

    def test_missing_kind(self, mock_runtime):
        """Test bodies without a kind are rejected."""
        response = mock_runtime.handle_request(RuntimeRequest(Verb.CREATE, "x", {"title": "x"}))
        assert response.status == 400

    def test_volatile_attributes_dropped(self, mock_runtime):
        """Test clients cannot set runtime maintained attributes."""
        held = Resource(id="vm", kind=COMPUTE_KIND, attributes={"occi.compute.state": "suspended"})
        create(mock_runtime, held)
        assert mock_runtime.get_state("vm") == "active"

    def test_link_needs_live_endpoints(self, mock_runtime):
        """Test links to missing resources conflict."""
        create(mock_runtime, COMP)
        response = create(mock_runtime, PLACEMENT)
        assert response.status == 409

    def test_link_waits_for_active_compute(self, extensions):
        """Test a link to an inactive compute conflicts."""
        runtime = MockRuntime(extensions, activation_delay=0.0)
        runtime.inject_fault(FaultSpec(FaultKind.HOLD_STATE, entity_id="vm"))
        create(runtime, VM)
        create(runtime, COMP)

        assert runtime.get_state("vm") == "inactive"
        assert create(runtime, PLACEMENT).status == 409

        runtime.clear_faults()
        assert action(runtime, "vm", "start").status == 200
        assert create(runtime, PLACEMENT).status == 201

    def test_delayed_activation(self, extensions):
        """Test infrastructure stays inactive until the activation delay passes."""
        runtime = MockRuntime(extensions, activation_delay=30.0)
        try:
            create(runtime, VM)
            assert runtime.get_state("vm") == "inactive"
        finally:
            runtime.close()


class TestUpdateDelete:
    """Test updating and deleting entities."""

    def test_partial_update(self, mock_runtime):
        """Test updates merge attributes and drop None values."""
        create(mock_runtime, VM)
        response = mock_runtime.handle_request(RuntimeRequest(
            Verb.UPDATE, "vm", {"title": "web", "attributes": {"occi.compute.cores": None, "occi.compute.memory": 4.0}}
        ))

        assert response.status == 200
        entity = mock_runtime.get_entity("vm")
        assert entity.title == "web"
        assert "occi.compute.cores" not in entity.attributes
        assert entity.attributes["occi.compute.memory"] == 4.0

    def test_update_missing(self, mock_runtime):
        """Test updating an unknown id is not found."""
        response = mock_runtime.handle_request(RuntimeRequest(Verb.UPDATE, "ghost", {"title": "x"}))
        assert response.status == 404

    def test_update_cannot_change_role(self, mock_runtime):
        """Test a resource cannot be turned into a link."""
        create(mock_runtime, VM)
        create(mock_runtime, COMP)
        response = mock_runtime.handle_request(
            RuntimeRequest(Verb.UPDATE, "comp", {"source": "comp", "target": "vm"})
        )
        assert response.status == 400

    def test_delete_referenced(self, mock_runtime):
        """Test resources are deleted only after their links."""
        for entity in (VM, COMP, PLACEMENT):
            create(mock_runtime, entity)

        assert mock_runtime.handle_request(RuntimeRequest(Verb.DELETE, "vm")).status == 409
        assert mock_runtime.handle_request(RuntimeRequest(Verb.DELETE, "p1")).status == 200
        assert mock_runtime.handle_request(RuntimeRequest(Verb.DELETE, "vm")).status == 200
        assert mock_runtime.get_entity("vm") is None

    def test_delete_missing(self, mock_runtime):
        """Test deleting an unknown id is not found."""
        assert mock_runtime.handle_request(RuntimeRequest(Verb.DELETE, "ghost")).status == 404


class TestActions:
    """Test lifecycle actions."""

    def test_compute_actions(self, mock_runtime):
        """Test compute transitions and their log."""
        create(mock_runtime, VM)
        assert action(mock_runtime, "vm", "suspend").status == 200
        assert mock_runtime.get_state("vm") == "suspended"

        records = mock_runtime.transition_log
        assert [(r.trigger, r.source, r.dest) for r in records] == [
            ("start", "inactive", "active"),
            ("suspend", "active", "suspended"),
        ]
        assert [r.sequence for r in records] == [1, 2]

    def test_action_not_allowed(self, mock_runtime):
        """Test actions invalid in the current state conflict."""
        create(mock_runtime, VM)
        action(mock_runtime, "vm", "stop")

        response = action(mock_runtime, "vm", "suspend")

        assert response.status == 409
        assert mock_runtime.get_state("vm") == "inactive"

    def test_action_missing_name(self, mock_runtime):
        """Test actions need a name."""
        create(mock_runtime, VM)
        assert mock_runtime.handle_request(RuntimeRequest(Verb.ACTION, "vm")).status == 400

    def test_entity_without_lifecycle(self, mock_runtime):
        """Test links have no actions."""
        for entity in (VM, COMP, PLACEMENT):
            create(mock_runtime, entity)
        assert action(mock_runtime, "p1", "start").status == 409

    def test_start_application(self, mock_runtime):
        """Test starting an application brings its components up first."""
        for entity in (VM, APP, COMP, MEMBERSHIP, PLACEMENT):
            create(mock_runtime, entity)

        assert action(mock_runtime, "app", "start").status == 200

        assert mock_runtime.get_state("comp") == "active"
        assert mock_runtime.get_state("app") == "active"
        platform = [(r.entity_id, r.trigger) for r in mock_runtime.transition_log if r.entity_id != "vm"]
        assert platform == [
            ("comp", "deploy"),
            ("comp", "configure"),
            ("comp", "start"),
            ("app", "deploy"),
            ("app", "configure"),
            ("app", "start"),
        ]

    def test_start_application_twice(self, mock_runtime):
        """Test restarting an active application is a no-op."""
        for entity in (APP, COMP, MEMBERSHIP):
            create(mock_runtime, entity)
        action(mock_runtime, "app", "start")
        before = len(mock_runtime.transition_log)

        assert action(mock_runtime, "app", "start").status == 200
        assert len(mock_runtime.transition_log) == before


class TestFaults:
    """Test injected faults."""

    def test_reject_nth_create(self, mock_runtime):
        """Test only the nth create is rejected."""
        mock_runtime.inject_fault(FaultSpec(FaultKind.REJECT_CREATE, nth=2))

        assert create(mock_runtime, VM).status == 201
        assert create(mock_runtime, COMP).status == 409
        assert create(mock_runtime, COMP).status == 201

    def test_drop_action(self, mock_runtime):
        """Test dropped actions succeed without effect."""
        create(mock_runtime, VM)
        mock_runtime.inject_fault(FaultSpec(FaultKind.DROP_ACTION, entity_id="vm", action="stop"))

        response = action(mock_runtime, "vm", "stop")

        assert response.status == 200
        assert response.body["dropped"] is True
        assert mock_runtime.get_state("vm") == "active"

    @pytest.mark.parametrize("kwargs", [
        {"kind": FaultKind.HOLD_STATE},
        {"kind": FaultKind.REJECT_CREATE},
        {"kind": FaultKind.REJECT_CREATE, "nth": 0},
    ])
    def test_invalid_fault(self, kwargs):
        """Test fault specs need their parameters."""
        with pytest.raises(ValueError):
            FaultSpec(**kwargs)


class TestReads:
    """Test snapshots and logs."""

    def test_snapshot(self, mock_runtime, extensions):
        """Test snapshots carry states, sorted ids and loaded extensions."""
        for entity in (VM, COMP, PLACEMENT):
            create(mock_runtime, entity)
        create(mock_runtime, Resource(id="disk", kind=STORAGE_KIND))

        snapshot = mock_runtime.snapshot()

        assert [r.id for r in snapshot.resources] == ["comp", "disk", "vm"]
        assert [link.id for link in snapshot.links] == ["p1"]
        assert snapshot.resource("disk").attributes["occi.storage.state"] == "online"
        assert snapshot.resource("comp").attributes["occi.component.state"] == "undeployed"
        assert snapshot.use == tuple(extensions.names)

    def test_request_log_excludes_rejections(self, mock_runtime):
        """Test only applied requests are logged."""
        create(mock_runtime, VM)
        create(mock_runtime, VM)
        action(mock_runtime, "vm", "stop")

        assert [(r.verb, r.entity_id) for r in mock_runtime.request_log] == [
            (Verb.CREATE, "vm"),
            (Verb.ACTION, "vm"),
        ]

    def test_replay(self, mock_runtime, extensions):
        """Test replaying a request log rebuilds the same runtime."""
        for entity in (VM, APP, COMP, MEMBERSHIP, PLACEMENT):
            create(mock_runtime, entity)
        action(mock_runtime, "app", "start")

        fresh = MockRuntime(extensions, activation_delay=0.0)
        responses = fresh.replay(mock_runtime.request_log)

        assert all(r.ok for r in responses)
        assert fresh.snapshot() == mock_runtime.snapshot()


class TestInProcessClient:
    """Test the in-process runtime client."""

    def test_round_trip(self, runtime_client, mock_runtime):
        """Test client calls reach the runtime."""
        runtime_client.create_entity(VM)
        runtime_client.trigger_action("vm", "stop")

        assert runtime_client.get_state("vm") == "inactive"
        assert runtime_client.get_configuration() == mock_runtime.snapshot()

    def test_rejection_raises(self, runtime_client):
        """Test runtime errors become request errors."""
        with pytest.raises(RequestError) as exc_info:
            runtime_client.delete_entity("ghost")

        assert exc_info.value.status == 404
        assert "ghost" in exc_info.value.details["reason"]

    def test_missing_state(self, runtime_client):
        """Test unknown entities have no state."""
        assert runtime_client.get_state("ghost") is None
        assert InProcessRuntimeClient(MockRuntime()).get_state("ghost") is None
