"""Runtime API routes: configuration, entity CRUD, actions and fault injection."""

from typing import Any, Dict

from fastapi import APIRouter, Depends, status
from fastapi.responses import JSONResponse

from .....application.container import Container, get_container_dependency
from .....domain.models.configuration import entity_to_dict
from .....domain.models.orchestration import Verb
from .....domain.models.runtime import FaultSpec, RuntimeRequest
from .....infrastructure.serialization.files import configuration_to_dict
from .....shared.exceptions import BadRequestError, EntityNotFoundError
from ..schemas.entity import (
    CreateEntityRequest,
    EntityResponse,
    FaultRequest,
    UpdateEntityRequest,
)


router = APIRouter(
    tags=["runtime"],
    responses={
        400: {"description": "Bad request"},
        404: {"description": "Not found"},
        409: {"description": "Conflict with the runtime state"},
    }
)


def _handle(container: Container, request: RuntimeRequest) -> JSONResponse:
    response = container.runtime.handle_request(request)
    return JSONResponse(status_code=response.status, content=response.body)


@router.get(
    "/configuration",
    summary="Runtime configuration",
    description="Point-in-time configuration of every live entity, state attributes included"
)
async def get_configuration(
    container: Container = Depends(get_container_dependency)
) -> Dict[str, Any]:
    """Snapshot the runtime model."""
    return configuration_to_dict(container.runtime.snapshot())


@router.get(
    "/entity/{entity_id}",
    response_model=EntityResponse,
    summary="Get entity"
)
async def get_entity(
    entity_id: str,
    container: Container = Depends(get_container_dependency)
) -> EntityResponse:
    """Get one live entity with its lifecycle state."""
    entity = container.runtime.get_entity(entity_id)
    if entity is None:
        raise EntityNotFoundError(entity_id)
    return EntityResponse(
        **entity_to_dict(entity),
        state=container.runtime.get_state(entity_id),
        provider_id=container.runtime.get_provider_id(entity_id),
    )


@router.put(
    "/entity/{entity_id}",
    status_code=status.HTTP_201_CREATED,
    summary="Create entity"
)
async def create_entity(
    entity_id: str,
    body: CreateEntityRequest,
    container: Container = Depends(get_container_dependency)
) -> JSONResponse:
    """Create a resource or link; infrastructure activates after the simulated delay."""
    if body.id is not None and body.id != entity_id:
        raise BadRequestError(f"Body id {body.id} does not match path id", entity_id)
    payload = body.model_dump(exclude={"id"})
    return _handle(container, RuntimeRequest(Verb.CREATE, entity_id, payload))


@router.patch(
    "/entity/{entity_id}",
    summary="Update entity"
)
async def update_entity(
    entity_id: str,
    body: UpdateEntityRequest,
    container: Container = Depends(get_container_dependency)
) -> JSONResponse:
    """Merge attributes (null removes) and replace the other given fields."""
    return _handle(container, RuntimeRequest(Verb.UPDATE, entity_id, body.model_dump(exclude_unset=True)))


@router.delete(
    "/entity/{entity_id}",
    summary="Delete entity"
)
async def delete_entity(
    entity_id: str,
    container: Container = Depends(get_container_dependency)
) -> JSONResponse:
    """Delete an entity no link references any more."""
    return _handle(container, RuntimeRequest(Verb.DELETE, entity_id))


@router.post(
    "/entity/{entity_id}/action/{action}",
    summary="Trigger action"
)
async def trigger_action(
    entity_id: str,
    action: str,
    container: Container = Depends(get_container_dependency)
) -> JSONResponse:
    """Apply a lifecycle action; starting an application starts its components first."""
    return _handle(container, RuntimeRequest(Verb.ACTION, entity_id, action=action))


@router.post(
    "/_fault",
    status_code=status.HTTP_201_CREATED,
    summary="Inject fault",
    description="Test harness only"
)
async def inject_fault(
    body: FaultRequest,
    container: Container = Depends(get_container_dependency)
) -> Dict[str, Any]:
    """Register a fault on the runtime."""
    try:
        spec = FaultSpec(kind=body.kind, entity_id=body.entity_id, nth=body.nth, action=body.action)
    except ValueError as e:
        raise BadRequestError(str(e), body.entity_id)
    container.runtime.inject_fault(spec)
    return {"kind": spec.kind.value, "entityId": spec.entity_id, "nth": spec.nth, "action": spec.action}
