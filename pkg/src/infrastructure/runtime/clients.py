"""Runtime clients: in-process and HTTP."""

import logging
from typing import Any, Dict, Optional
from urllib.parse import quote

import httpx

from ...domain.models.configuration import AnyEntity, OcciConfiguration, entity_to_dict
from ...domain.models.orchestration import Verb
from ...domain.models.runtime import FaultSpec, RuntimeRequest, RuntimeResponse
from ...domain.repositories.runtime_client import RuntimeClient
from ...shared.exceptions import RequestError, RuntimeUnreachableError
from ..serialization.files import load_configuration
from .mock_runtime import MockRuntime


logger = logging.getLogger(__name__)


def _error_reason(body: Any) -> str:
    if isinstance(body, dict) and isinstance(body.get("error"), dict):
        return str(body["error"].get("message", body["error"]))
    return str(body)


class InProcessRuntimeClient(RuntimeClient):
    """Talks to an embedded MockRuntime without a network hop."""

    def __init__(self, runtime: MockRuntime):
        self.runtime = runtime

    def _send(self, request: RuntimeRequest) -> Dict[str, Any]:
        response: RuntimeResponse = self.runtime.handle_request(request)
        if not response.ok:
            raise RequestError(request.verb.value, request.entity_id, response.status, _error_reason(response.body))
        return response.body

    def get_configuration(self) -> OcciConfiguration:
        return self.runtime.snapshot()

    def create_entity(self, entity: AnyEntity) -> Dict[str, Any]:
        return self._send(RuntimeRequest(Verb.CREATE, entity.id, entity_to_dict(entity)))

    def update_entity(self, entity_id: str, changes: Dict[str, Any]) -> Dict[str, Any]:
        return self._send(RuntimeRequest(Verb.UPDATE, entity_id, dict(changes)))

    def delete_entity(self, entity_id: str) -> None:
        self._send(RuntimeRequest(Verb.DELETE, entity_id))

    def trigger_action(self, entity_id: str, action: str) -> Dict[str, Any]:
        return self._send(RuntimeRequest(Verb.ACTION, entity_id, action=action))

    def get_state(self, entity_id: str) -> Optional[str]:
        return self.runtime.get_state(entity_id)


class HttpRuntimeClient(RuntimeClient):
    """Talks to a runtime served over HTTP (see `tosca2occi serve`)."""

    def __init__(self, base_url: str, timeout: float = 5.0, client: Optional[httpx.Client] = None):
        """Initialize client.

        Args:
            base_url: Runtime root URL, e.g. http://127.0.0.1:8080
            timeout: Request timeout in seconds
            client: Preconfigured httpx client (tests pass fastapi's TestClient)
        """
        self.base_url = base_url.rstrip("/")
        self._owns_client = client is None
        self._client = client or httpx.Client(base_url=self.base_url, timeout=timeout)

    @staticmethod
    def _entity_path(entity_id: str) -> str:
        return f"/entity/{quote(entity_id, safe='')}"

    def _request(self, verb: str, entity_id: str, method: str, path: str, **kwargs) -> httpx.Response:
        try:
            response = self._client.request(method, path, **kwargs)
        except httpx.TransportError as e:
            raise RuntimeUnreachableError(self.base_url, cause=e)
        logger.debug(f"{method} {path} -> {response.status_code}")
        if response.status_code >= 400:
            try:
                reason = _error_reason(response.json())
            except ValueError:
                reason = response.text
            raise RequestError(verb, entity_id, response.status_code, reason)
        return response

    def get_configuration(self) -> OcciConfiguration:
        return load_configuration(self._request("GET", "", "GET", "/configuration").json())

    def create_entity(self, entity: AnyEntity) -> Dict[str, Any]:
        return self._request(
            Verb.CREATE.value, entity.id, "PUT", self._entity_path(entity.id), json=entity_to_dict(entity)
        ).json()

    def update_entity(self, entity_id: str, changes: Dict[str, Any]) -> Dict[str, Any]:
        return self._request(Verb.UPDATE.value, entity_id, "PATCH", self._entity_path(entity_id), json=changes).json()

    def delete_entity(self, entity_id: str) -> None:
        self._request(Verb.DELETE.value, entity_id, "DELETE", self._entity_path(entity_id))

    def trigger_action(self, entity_id: str, action: str) -> Dict[str, Any]:
        path = f"{self._entity_path(entity_id)}/action/{quote(action, safe='')}"
        return self._request(Verb.ACTION.value, entity_id, "POST", path).json()

    def get_state(self, entity_id: str) -> Optional[str]:
        try:
            response = self._client.get(self._entity_path(entity_id))
        except httpx.TransportError as e:
            raise RuntimeUnreachableError(self.base_url, cause=e)
        if response.status_code == 404:
            return None
        if response.status_code >= 400:
            raise RequestError("GET", entity_id, response.status_code, response.text)
        return response.json().get("state")

    def inject_fault(self, spec: FaultSpec) -> None:
        """Register a fault on the remote runtime."""
        body = {"kind": spec.kind.value, "entityId": spec.entity_id, "nth": spec.nth, "action": spec.action}
        self._request("FAULT", spec.entity_id or "", "POST", "/_fault", json=body)

    def close(self) -> None:
        if self._owns_client:
            self._client.close()
