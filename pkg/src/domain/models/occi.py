"""OCCI metamodel: categories, kinds, mixins, actions, datatypes and extensions."""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, Optional, Tuple, Union


TERM_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# Category references are "<scheme><term>"; datatype references are names.
CategoryRef = str
DataTypeRef = str


class EntityRole(str, Enum):
    """Which root an OCCI kind descends from."""
    RESOURCE = "resource"
    LINK = "link"


class NumericKind(str, Enum):
    """Numeric flavours of NumericType."""
    INTEGER = "integer"
    FLOAT = "float"
    SHORT = "short"


class LinkDirection(str, Enum):
    """Direction of a link relative to the constrained entity."""
    IN = "in"
    OUT = "out"


# Datatypes

@dataclass(frozen=True)
class StringType:
    """String datatype with optional length bounds and a full-match pattern."""
    pattern: Optional[str] = None
    min_length: Optional[int] = None
    max_length: Optional[int] = None

    def __post_init__(self):
        if self.min_length is not None and self.min_length < 0:
            raise ValueError("minLength cannot be negative")
        if (
            self.min_length is not None
            and self.max_length is not None
            and self.min_length > self.max_length
        ):
            raise ValueError("minLength must not exceed maxLength")
        if self.pattern is not None:
            try:
                re.compile(self.pattern)
            except re.error as e:
                raise ValueError(f"Invalid pattern {self.pattern!r}: {e}") from e


@dataclass(frozen=True)
class NumericType:
    """Integer, float or short datatype with inclusive bounds."""
    numeric_kind: NumericKind = NumericKind.INTEGER
    min_inclusive: Optional[Union[int, float]] = None
    max_inclusive: Optional[Union[int, float]] = None

    def __post_init__(self):
        if (
            self.min_inclusive is not None
            and self.max_inclusive is not None
            and self.min_inclusive > self.max_inclusive
        ):
            raise ValueError("minInclusive must not exceed maxInclusive")


@dataclass(frozen=True)
class BooleanType:
    """Boolean datatype."""


@dataclass(frozen=True)
class EnumerationType:
    """Closed set of string literals."""
    literals: Tuple[str, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("Enumeration needs at least one literal")
        if len(set(self.literals)) != len(self.literals):
            raise ValueError("Enumeration literals must be distinct")


@dataclass(frozen=True)
class ArrayType:
    """Homogeneous list of values of one datatype."""
    element_type: DataTypeRef


@dataclass(frozen=True)
class RecordField:
    """Named field of a record datatype."""
    name: str
    datatype: DataTypeRef


@dataclass(frozen=True)
class RecordType:
    """Record of named, typed fields."""
    fields: Tuple[RecordField, ...]

    def __post_init__(self):
        if not self.fields:
            raise ValueError("Record needs at least one field")
        names = [f.name for f in self.fields]
        if len(set(names)) != len(names):
            raise ValueError("Record field names must be distinct")

    def field_type(self, name: str) -> Optional[DataTypeRef]:
        """Get the datatype of a field by name."""
        for record_field in self.fields:
            if record_field.name == name:
                return record_field.datatype
        return None


DataType = Union[StringType, NumericType, BooleanType, EnumerationType, ArrayType, RecordType]


# Categories

@dataclass(frozen=True)
class AttributeDef:
    """Attribute declared by a category."""
    name: str
    datatype: DataTypeRef
    required: bool = False
    mutable: bool = True
    default: Any = None
    description: Optional[str] = None


@dataclass(frozen=True)
class Category:
    """Base identity for kinds, mixins and actions."""
    term: str
    scheme: str
    title: Optional[str] = None
    attributes: Tuple[AttributeDef, ...] = ()

    def __post_init__(self):
        if not TERM_PATTERN.match(self.term):
            raise ValueError(f"Invalid category term: {self.term!r}")
        if not self.scheme.endswith("#"):
            raise ValueError(f"Scheme must end with '#': {self.scheme!r}")

    @property
    def id(self) -> CategoryRef:
        """Scheme and term joined into a reference."""
        return f"{self.scheme}{self.term}"

    def attribute(self, name: str) -> Optional[AttributeDef]:
        """Get a declared attribute by name."""
        for attribute in self.attributes:
            if attribute.name == name:
                return attribute
        return None


@dataclass(frozen=True)
class ActionDef:
    """Action invocable on an entity."""
    category: Category
    parameters: Tuple[AttributeDef, ...] = ()

    @property
    def name(self) -> str:
        return self.category.term

    @property
    def id(self) -> CategoryRef:
        return self.category.id


# Constraint expressions

@dataclass(frozen=True)
class ExistsLink:
    """Holds if a matching link connects the entity to a matching peer."""
    direction: LinkDirection
    link: CategoryRef
    peer: Optional[CategoryRef] = None


@dataclass(frozen=True)
class AttrMatches:
    """Holds if the attribute is set and fully matches the regex."""
    attribute: str
    regex: str

    def __post_init__(self):
        try:
            re.compile(self.regex)
        except re.error as e:
            raise ValueError(f"Invalid regex {self.regex!r}: {e}") from e


@dataclass(frozen=True)
class AllOf:
    items: Tuple["ConstraintExpr", ...]


@dataclass(frozen=True)
class AnyOf:
    items: Tuple["ConstraintExpr", ...]


@dataclass(frozen=True)
class Not:
    item: "ConstraintExpr"


ConstraintExpr = Union[ExistsLink, AttrMatches, AllOf, AnyOf, Not]


@dataclass(frozen=True)
class ConstraintDef:
    """Named business constraint carried by a mixin."""
    name: str
    body: ConstraintExpr
    description: Optional[str] = None


@dataclass(frozen=True)
class Kind:
    """Type of a cloud entity."""
    category: Category
    parent: Optional[CategoryRef] = None
    actions: Tuple[ActionDef, ...] = ()
    entity_role: EntityRole = EntityRole.RESOURCE

    @property
    def id(self) -> CategoryRef:
        return self.category.id

    @property
    def term(self) -> str:
        return self.category.term


@dataclass(frozen=True)
class Mixin:
    """Cross-cutting extension of an entity."""
    category: Category
    depends: Tuple[CategoryRef, ...] = ()
    applies: Tuple[CategoryRef, ...] = ()
    actions: Tuple[ActionDef, ...] = ()
    constraints: Tuple[ConstraintDef, ...] = ()

    @property
    def id(self) -> CategoryRef:
        return self.category.id

    @property
    def term(self) -> str:
        return self.category.term


@dataclass(frozen=True)
class OcciExtension:
    """Named set of kinds, mixins and datatypes for one domain."""
    name: str
    scheme: str
    imports: Tuple[str, ...] = ()
    kinds: Tuple[Kind, ...] = ()
    mixins: Tuple[Mixin, ...] = ()
    datatypes: Dict[str, DataType] = field(default_factory=dict)
    description: Optional[str] = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("Extension name cannot be empty")

    def categories(self) -> Iterator[Category]:
        """Iterate over every category declared here, actions included."""
        for kind in self.kinds:
            yield kind.category
            for action in kind.actions:
                yield action.category
        for mixin in self.mixins:
            yield mixin.category
            for action in mixin.actions:
                yield action.category

    def get_mixin(self, ref: CategoryRef) -> Optional[Mixin]:
        for mixin in self.mixins:
            if mixin.id == ref:
                return mixin
        return None

    def get_kind(self, ref: CategoryRef) -> Optional[Kind]:
        for kind in self.kinds:
            if kind.id == ref:
                return kind
        return None
