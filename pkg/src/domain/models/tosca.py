"""TOSCA data model: entity types, topology templates and the type registry."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple


PRIMITIVE_TOSCA_TYPES = frozenset({
    "string",
    "integer",
    "float",
    "boolean",
    "version",
    "list",
    "map",
    "range",
    "timestamp",
    "scalar-unit.size",
    "scalar-unit.frequency",
    "scalar-unit.time",
})

CONSTRAINT_OPERATORS = frozenset({
    "equal",
    "valid_values",
    "greater_or_equal",
    "greater_than",
    "less_or_equal",
    "less_than",
    "in_range",
    "length",
    "min_length",
    "max_length",
    "pattern",
})


class TypeClass(str, Enum):
    """Families of TOSCA entity types."""
    NODE = "node"
    RELATIONSHIP = "relationship"
    CAPABILITY = "capability"
    INTERFACE = "interface"
    DATATYPE = "datatype"


SECTION_TYPE_CLASSES: Dict[str, TypeClass] = {
    "node_types": TypeClass.NODE,
    "relationship_types": TypeClass.RELATIONSHIP,
    "capability_types": TypeClass.CAPABILITY,
    "interface_types": TypeClass.INTERFACE,
    "data_types": TypeClass.DATATYPE,
}


@dataclass(frozen=True)
class ToscaConstraint:
    """One property constraint clause, e.g. greater_or_equal: 1."""
    operator: str
    operand: Any

    def __post_init__(self):
        if self.operator not in CONSTRAINT_OPERATORS:
            raise ValueError(f"Unknown constraint operator: {self.operator}")


@dataclass(frozen=True)
class ToscaPropertyDef:
    """Property or attribute definition."""
    name: str
    tosca_type: str
    required: bool = True
    default: Any = None
    constraints: Tuple[ToscaConstraint, ...] = ()
    description: Optional[str] = None
    entry_schema: Optional[str] = None


@dataclass(frozen=True)
class ToscaRequirementDef:
    """Requirement a node type places on other nodes."""
    name: str
    capability: Optional[str] = None
    node: Optional[str] = None
    relationship: Optional[str] = None
    occurrences: Optional[Tuple[int, Optional[int]]] = None

    @property
    def min_occurrences(self) -> int:
        return self.occurrences[0] if self.occurrences else 1


@dataclass(frozen=True)
class ToscaTypeDef:
    """Node, relationship, capability, interface or data type."""
    name: str
    type_class: TypeClass
    derived_from: Optional[str] = None
    description: Optional[str] = None
    properties: Tuple[ToscaPropertyDef, ...] = ()
    attributes: Tuple[ToscaPropertyDef, ...] = ()
    requirements: Tuple[ToscaRequirementDef, ...] = ()
    capabilities: Dict[str, str] = field(default_factory=dict)
    interfaces: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    interface_types: Dict[str, str] = field(default_factory=dict)
    operations: Tuple[str, ...] = ()
    constraints: Tuple[ToscaConstraint, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("Type name cannot be empty")

    @property
    def short_name(self) -> str:
        """Last dotted segment of the name."""
        return self.name.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class RequirementBinding:
    """Requirement of a node template fulfilled by another template."""
    requirement: str
    target: str
    relationship: Optional[str] = None
    relationship_template: Optional[str] = None


@dataclass(frozen=True)
class ToscaNodeTemplate:
    """Occurrence of a node type in a topology."""
    name: str
    type_name: str
    property_values: Dict[str, Any] = field(default_factory=dict)
    requirement_bindings: Tuple[RequirementBinding, ...] = ()
    capability_property_values: Dict[str, Dict[str, Any]] = field(default_factory=dict)


@dataclass(frozen=True)
class ToscaRelationshipTemplate:
    """Occurrence of a relationship between two node templates."""
    name: str
    type_name: str
    source_template: Optional[str] = None
    target_template: Optional[str] = None
    property_values: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ToscaTopology:
    """Parsed topology_template."""
    name: str
    inputs: Dict[str, ToscaPropertyDef] = field(default_factory=dict)
    node_templates: Tuple[ToscaNodeTemplate, ...] = ()
    relationship_templates: Tuple[ToscaRelationshipTemplate, ...] = ()
    groups: Tuple[Dict[str, Any], ...] = ()
    description: Optional[str] = None

    def node_template(self, name: str) -> Optional[ToscaNodeTemplate]:
        for template in self.node_templates:
            if template.name == name:
                return template
        return None

    def relationship_template(self, name: str) -> Optional[ToscaRelationshipTemplate]:
        for template in self.relationship_templates:
            if template.name == name:
                return template
        return None

    @property
    def template_names(self) -> List[str]:
        return [t.name for t in self.node_templates] + [t.name for t in self.relationship_templates]


class ToscaTypeRegistry:
    """Resolved type definitions, closed under derived_from."""

    def __init__(self, types: Dict[str, ToscaTypeDef], aliases: Optional[Dict[str, str]] = None):
        self._types = dict(types)
        self._aliases = dict(aliases or {})
        self._effective_properties: Dict[str, Dict[str, ToscaPropertyDef]] = {}

    def canonical(self, name: str) -> str:
        """Resolve an alias to its canonical type name."""
        return self._aliases.get(name, name)

    def get(self, name: str) -> Optional[ToscaTypeDef]:
        return self._types.get(self.canonical(name))

    def __contains__(self, name: str) -> bool:
        return self.canonical(name) in self._types

    def __iter__(self) -> Iterator[ToscaTypeDef]:
        for name in sorted(self._types):
            yield self._types[name]

    def __len__(self) -> int:
        return len(self._types)

    @property
    def names(self) -> List[str]:
        return sorted(self._types)

    def of_class(self, type_class: TypeClass) -> List[ToscaTypeDef]:
        """Types of one family, sorted by name."""
        return [t for t in self if t.type_class == type_class]

    def parent(self, name: str) -> Optional[ToscaTypeDef]:
        type_def = self.get(name)
        if type_def is None or type_def.derived_from is None:
            return None
        return self.get(type_def.derived_from)

    def ancestors(self, name: str) -> List[str]:
        """Names of the parent chain, nearest first, primitives excluded."""
        chain: List[str] = []
        current = self.parent(name)
        while current is not None and current.name not in chain:
            chain.append(current.name)
            current = self.parent(current.name)
        return chain

    def is_a(self, name: str, base: str) -> bool:
        """Check whether a type is the base type or derives from it."""
        name, base = self.canonical(name), self.canonical(base)
        return name == base or base in self.ancestors(name)

    def effective_properties(self, name: str) -> Dict[str, ToscaPropertyDef]:
        """Own properties over inherited ones; own shadows inherited on name clash."""
        name = self.canonical(name)
        if name in self._effective_properties:
            return dict(self._effective_properties[name])
        type_def = self._types[name]
        parent = self.parent(name)
        properties = self.effective_properties(parent.name) if parent else {}
        for prop in type_def.properties:
            properties[prop.name] = prop
        self._effective_properties[name] = properties
        return dict(properties)

    def effective_requirements(self, name: str) -> Dict[str, ToscaRequirementDef]:
        requirements: Dict[str, ToscaRequirementDef] = {}
        for type_name in [*reversed(self.ancestors(name)), self.canonical(name)]:
            for requirement in self._types[type_name].requirements:
                requirements[requirement.name] = requirement
        return requirements

    def effective_capabilities(self, name: str) -> Dict[str, str]:
        capabilities: Dict[str, str] = {}
        for type_name in [*reversed(self.ancestors(name)), self.canonical(name)]:
            capabilities.update(self._types[type_name].capabilities)
        return capabilities

    def effective_operations(self, name: str) -> Tuple[str, ...]:
        """Operations of an interface type, inherited ones first."""
        operations: List[str] = []
        for type_name in [*reversed(self.ancestors(name)), self.canonical(name)]:
            for operation in self._types[type_name].operations:
                if operation not in operations:
                    operations.append(operation)
        return tuple(operations)
