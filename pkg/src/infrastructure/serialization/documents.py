"""Pydantic wire documents for extension, configuration, profile and plan files."""

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel


class WireModel(BaseModel):
    """Base for JSON documents: camelCase on the wire, strict keys."""

    model_config = ConfigDict(
        alias_generator=to_camel,
        populate_by_name=True,
        extra="forbid",
    )


# Datatypes

class StringTypeDocument(WireModel):
    name: str
    type: Literal["string"] = "string"
    pattern: Optional[str] = None
    min_length: Optional[int] = None
    max_length: Optional[int] = None


class NumericTypeDocument(WireModel):
    name: str
    type: Literal["numeric"] = "numeric"
    numeric_kind: Literal["integer", "float", "short"] = "integer"
    min_inclusive: Optional[Union[int, float]] = None
    max_inclusive: Optional[Union[int, float]] = None


class BooleanTypeDocument(WireModel):
    name: str
    type: Literal["boolean"] = "boolean"


class EnumerationTypeDocument(WireModel):
    name: str
    type: Literal["enumeration"] = "enumeration"
    literals: List[str]


class ArrayTypeDocument(WireModel):
    name: str
    type: Literal["array"] = "array"
    element_type: str


class RecordFieldDocument(WireModel):
    name: str
    type: str


class RecordTypeDocument(WireModel):
    name: str
    type: Literal["record"] = "record"
    fields: List[RecordFieldDocument]


DataTypeDocument = Annotated[
    Union[
        StringTypeDocument,
        NumericTypeDocument,
        BooleanTypeDocument,
        EnumerationTypeDocument,
        ArrayTypeDocument,
        RecordTypeDocument,
    ],
    Field(discriminator="type"),
]


# Categories

class AttributeDocument(WireModel):
    name: str
    type: str = "string"
    required: bool = False
    mutable: bool = True
    default: Any = None
    description: Optional[str] = None


class ActionDocument(WireModel):
    term: str
    scheme: Optional[str] = None
    title: Optional[str] = None
    parameters: List[AttributeDocument] = Field(default_factory=list)


class ConstraintDocument(WireModel):
    name: str
    body: Dict[str, Any]
    description: Optional[str] = None


class KindDocument(WireModel):
    term: str
    scheme: Optional[str] = None
    title: Optional[str] = None
    parent: Optional[str] = None
    role: Literal["resource", "link"] = "resource"
    attributes: List[AttributeDocument] = Field(default_factory=list)
    actions: List[ActionDocument] = Field(default_factory=list)


class MixinDocument(WireModel):
    term: str
    scheme: Optional[str] = None
    title: Optional[str] = None
    depends: List[str] = Field(default_factory=list)
    applies: List[str] = Field(default_factory=list)
    attributes: List[AttributeDocument] = Field(default_factory=list)
    actions: List[ActionDocument] = Field(default_factory=list)
    constraints: List[ConstraintDocument] = Field(default_factory=list)


class ExtensionDocument(WireModel):
    """Extension file."""
    name: str
    scheme: str
    description: Optional[str] = None
    imports: List[str] = Field(default_factory=list)
    datatypes: List[DataTypeDocument] = Field(default_factory=list)
    kinds: List[KindDocument] = Field(default_factory=list)
    mixins: List[MixinDocument] = Field(default_factory=list)


# Configurations

class MixinBaseDocument(WireModel):
    mixin: str
    attributes: Dict[str, Any] = Field(default_factory=dict)


class EntityDocument(WireModel):
    id: str
    kind: str
    title: Optional[str] = None
    mixins: List[MixinBaseDocument] = Field(default_factory=list)
    attributes: Dict[str, Any] = Field(default_factory=dict)


class LinkDocument(EntityDocument):
    source: str
    target: str


class ConfigurationDocument(WireModel):
    """Configuration file."""
    use: List[str] = Field(default_factory=list)
    resources: List[EntityDocument] = Field(default_factory=list)
    links: List[LinkDocument] = Field(default_factory=list)


# Profiles and plans

class ProfileDocument(WireModel):
    """PSM profile file."""
    provider_name: str
    default_image: str
    default_flavor: str
    ssh_key_name: str
    management_cidr: str
    user_data: Optional[str] = None


class GateDocument(WireModel):
    entity_id: str
    required_state: str


class StepDocument(WireModel):
    """One plan step."""
    verb: Literal["CREATE", "UPDATE", "DELETE", "ACTION"]
    entity_id: str
    payload: Dict[str, Any] = Field(default_factory=dict)
    action: Optional[str] = None
    gate: Optional[GateDocument] = None


class OutcomeDocument(WireModel):
    index: int
    verb: Literal["CREATE", "UPDATE", "DELETE", "ACTION"]
    entity_id: str
    status: Literal["succeeded", "failed", "skipped"]
    error: Optional[str] = None


class ReportDocument(WireModel):
    """Execution report without step durations."""
    outcomes: List[OutcomeDocument] = Field(default_factory=list)
    conformant: Optional[bool] = None
