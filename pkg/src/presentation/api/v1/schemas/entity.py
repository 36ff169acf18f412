"""API schemas for runtime entities and faults."""

from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from .....domain.models.runtime import FaultKind


class MixinBaseSchema(BaseModel):
    """Mixin applied to an entity with its attribute values."""

    mixin: str
    attributes: Dict[str, Any] = Field(default_factory=dict)


class CreateEntityRequest(BaseModel):
    """Body of PUT /entity/{id}."""

    id: Optional[str] = None
    kind: str
    title: Optional[str] = None
    mixins: List[Union[MixinBaseSchema, str]] = Field(default_factory=list)
    attributes: Dict[str, Any] = Field(default_factory=dict)
    source: Optional[str] = None
    target: Optional[str] = None

    model_config = ConfigDict(extra="ignore")


class UpdateEntityRequest(BaseModel):
    """Body of PATCH /entity/{id}; only the given fields change."""

    title: Optional[str] = None
    attributes: Optional[Dict[str, Any]] = None
    mixins: Optional[List[Union[MixinBaseSchema, str]]] = None
    source: Optional[str] = None
    target: Optional[str] = None

    model_config = ConfigDict(extra="ignore")


class EntityResponse(BaseModel):
    """Stored entity with its lifecycle state and provider id."""

    id: str
    kind: str
    title: Optional[str] = None
    mixins: List[MixinBaseSchema] = Field(default_factory=list)
    attributes: Dict[str, Any] = Field(default_factory=dict)
    source: Optional[str] = None
    target: Optional[str] = None
    state: Optional[str] = None
    provider_id: Optional[str] = Field(default=None, serialization_alias="providerId")

    model_config = ConfigDict(populate_by_name=True)


class FaultRequest(BaseModel):
    """Body of POST /_fault."""

    kind: FaultKind
    entity_id: Optional[str] = Field(default=None, alias="entityId")
    nth: Optional[int] = Field(default=None, ge=1)
    action: Optional[str] = None

    model_config = ConfigDict(populate_by_name=True)
