"""Tests for the mock runtime HTTP API and the HTTP runtime client."""

from typing import Generator

import pytest
from fastapi.testclient import TestClient

from src.application.services.orchestrator import Orchestrator
from src.application.services.pim2psm import PsmTransformer
from src.domain.models.configuration import Resource
from src.domain.models.runtime import FaultKind, FaultSpec
from src.domain.models.vocabulary import COMPONENT_KIND, COMPUTE_KIND, PLACEMENTLINK_KIND
from src.infrastructure.runtime.clients import HttpRuntimeClient
from src.infrastructure.serialization.files import load_profile
from src.presentation.api.app import create_app
from src.shared.exceptions import RequestError, RuntimeUnreachableError


VM = {"kind": COMPUTE_KIND, "title": "vm", "attributes": {"occi.compute.cores": 2}}
COMP = {"kind": COMPONENT_KIND, "title": "comp"}
PLACEMENT = {"kind": PLACEMENTLINK_KIND, "source": "comp", "target": "vm"}


@pytest.fixture
def client(test_settings, mock_runtime) -> Generator[TestClient, None, None]:
    with TestClient(create_app(test_settings, runtime=mock_runtime)) as test_client:
        yield test_client


class TestHealth:
    """Test health endpoints."""

    def test_health(self, client):
        """Test health check."""
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy", "version": "1.0.0"}

    def test_ready(self, client):
        """Test readiness check."""
        assert client.get("/ready").json()["status"] == "ready"


class TestEntityRoutes:
    """Test entity CRUD and actions."""

    def test_create_and_get(self, client):
        """Test a created compute is returned with state and provider id."""
        created = client.put("/entity/vm", json=VM)
        assert created.status_code == 201
        assert created.json()["attributes"]["occi.compute.state"] == "active"

        fetched = client.get("/entity/vm").json()
        assert fetched["state"] == "active"
        assert fetched["providerId"] == "mock-000001"
        assert fetched["attributes"]["occi.compute.cores"] == 2

    def test_get_missing(self, client):
        """Test unknown entities are not found."""
        response = client.get("/entity/ghost")
        assert response.status_code == 404
        assert response.json()["error"]["code"] == "4004"

    def test_body_id_mismatch(self, client):
        """Test the body id must match the path."""
        response = client.put("/entity/vm", json={**VM, "id": "other"})
        assert response.status_code == 400

    def test_missing_kind(self, client):
        """Test request bodies are validated."""
        assert client.put("/entity/vm", json={"title": "vm"}).status_code == 422

    def test_duplicate(self, client):
        """Test creating an existing id conflicts."""
        client.put("/entity/vm", json=VM)
        assert client.put("/entity/vm", json=VM).status_code == 409

    def test_patch(self, client):
        """Test partial updates merge attributes."""
        client.put("/entity/vm", json=VM)
        response = client.patch("/entity/vm", json={"attributes": {"occi.compute.memory": 2.0}})

        assert response.status_code == 200
        attributes = response.json()["attributes"]
        assert attributes["occi.compute.memory"] == 2.0
        assert attributes["occi.compute.cores"] == 2

    def test_delete_order(self, client):
        """Test referenced resources cannot be deleted."""
        client.put("/entity/vm", json=VM)
        client.put("/entity/comp", json=COMP)
        assert client.put("/entity/p1", json=PLACEMENT).status_code == 201

        assert client.delete("/entity/vm").status_code == 409
        assert client.delete("/entity/p1").status_code == 200
        assert client.delete("/entity/vm").status_code == 200

    def test_action(self, client):
        """Test lifecycle actions and invalid transitions."""
        client.put("/entity/vm", json=VM)

        assert client.post("/entity/vm/action/stop").status_code == 200
        assert client.get("/entity/vm").json()["state"] == "inactive"
        assert client.post("/entity/vm/action/suspend").status_code == 409

    def test_configuration(self, client):
        """Test the configuration snapshot lists live entities."""
        client.put("/entity/vm", json=VM)
        body = client.get("/configuration").json()

        assert [r["id"] for r in body["resources"]] == ["vm"]
        assert body["links"] == []
        assert "tosca" in body["use"]


class TestFaultRoute:
    """Test fault injection over HTTP."""

    def test_hold_state(self, client, mock_runtime):
        """Test a held compute stays inactive."""
        response = client.post("/_fault", json={"kind": "hold-state", "entityId": "vm"})
        assert response.status_code == 201

        client.put("/entity/vm", json=VM)
        assert mock_runtime.get_state("vm") == "inactive"

    def test_invalid_fault(self, client):
        """Test incomplete faults are rejected."""
        assert client.post("/_fault", json={"kind": "hold-state"}).status_code == 400
        assert client.post("/_fault", json={"kind": "reject-create", "nth": 0}).status_code == 422
        assert client.post("/_fault", json={"kind": "explode"}).status_code == 422


class TestHttpRuntimeClient:
    """Test the HTTP client against the served runtime."""

    def test_reconcile_wordpress(self, client, make_pim, extensions, mock_runtime, fixtures_dir):
        """Test the WordPress deployment converges over HTTP."""
        profile = load_profile(fixtures_dir / "profiles" / "default.json")
        psm = PsmTransformer().transform(make_pim("wordpress"), profile)
        http_client = HttpRuntimeClient("http://testserver", client=client)
        orchestrator = Orchestrator(extensions, poll_interval=0.001, gate_timeout=0.5)

        report = orchestrator.reconcile(psm, http_client)

        assert report.conformant is True
        assert len(mock_runtime.snapshot().resources) == len(psm.resources)
        assert orchestrator.plan_for(psm, http_client.get_configuration()).steps == ()

    def test_errors(self, client):
        """Test rejections carry status and reason."""
        http_client = HttpRuntimeClient("http://testserver", client=client)

        with pytest.raises(RequestError) as exc_info:
            http_client.delete_entity("ghost")

        assert exc_info.value.status == 404
        assert "ghost" in exc_info.value.details["reason"]
        assert http_client.get_state("ghost") is None

    def test_inject_fault(self, client, mock_runtime):
        """Test faults can be registered remotely."""
        http_client = HttpRuntimeClient("http://testserver", client=client)
        http_client.inject_fault(FaultSpec(FaultKind.REJECT_CREATE, nth=1))

        with pytest.raises(RequestError) as exc_info:
            http_client.create_entity(Resource(id="vm", kind=COMPUTE_KIND))

        assert exc_info.value.status == 409
        assert mock_runtime.get_entity("vm") is None

    def test_unreachable(self):
        """Test connection failures are reported as unreachable."""
        http_client = HttpRuntimeClient("http://127.0.0.1:9", timeout=0.5)
        try:
            with pytest.raises(RuntimeUnreachableError):
                http_client.get_configuration()
        finally:
            http_client.close()
