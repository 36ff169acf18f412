"""Compilation of a resolved TOSCA type registry into the generated OCCI extension."""

import logging
from dataclasses import replace
from typing import Dict, Iterator, List, Optional, Tuple

from ...domain.models.mapping import (
    ActionTarget,
    Census,
    ConstraintTarget,
    DataTypeTarget,
    MappingReport,
    MixinAppliedToKind,
    MixinDependsOn,
    ReportLevel,
    RuleTable,
)
from ...domain.models.occi import (
    ActionDef,
    AnyOf,
    ArrayType,
    AttributeDef,
    Category,
    ConstraintDef,
    DataType,
    DataTypeRef,
    EnumerationType,
    ExistsLink,
    LinkDirection,
    Mixin,
    NumericKind,
    NumericType,
    OcciExtension,
    RecordField,
    RecordType,
    StringType,
)
from ...domain.models.tosca import (
    PRIMITIVE_TOSCA_TYPES,
    ToscaConstraint,
    ToscaPropertyDef,
    ToscaRequirementDef,
    ToscaTypeDef,
    ToscaTypeRegistry,
    TypeClass,
)
from ...domain.models.vocabulary import COMPUTE_KIND, DEFAULT_TOSCA_SCHEME, PLACEMENTLINK_KIND
from ...domain.services.datatypes import PRIMITIVE_DATATYPES, check_datatype
from ...domain.services.extension_set import ExtensionSet, constraint_refs, link_extension
from ...shared.exceptions import (
    ApplicationException,
    ConstraintCompileError,
    TypeMappingError,
    UnmappedTypeError,
)
from .mapping_rules import DEPENDS_ON, HOSTED_ON, builtin_rule_table, mangle_name


logger = logging.getLogger(__name__)

BASE_EXTENSIONS = ("core", "infrastructure", "modmacao", "sla")
NO_ANCHOR = "none"

# TOSCA base types with a direct OCCI counterpart
BASE_DATATYPES: Dict[str, DataTypeRef] = {
    "string": "string",
    "integer": "integer",
    "float": "float",
    "boolean": "boolean",
    "version": "version",
    "timestamp": "string",
    "scalar-unit.size": "integer",
    "scalar-unit.frequency": "float",
    "scalar-unit.time": "string",
}

MIXIN_CLASS_ORDER = (TypeClass.CAPABILITY, TypeClass.INTERFACE, TypeClass.RELATIONSHIP, TypeClass.NODE)

_NUMERIC_OPERATORS = {"greater_or_equal", "greater_than", "less_or_equal", "less_than", "in_range"}
_LENGTH_OPERATORS = {"length", "min_length", "max_length"}


class DataTypePool:
    """Datatypes of the extension being generated.

    Anonymous datatypes produced by constraint folding are interned by
    structure: an equal structure reuses the first name.
    """

    def __init__(self):
        self._types: Dict[str, DataType] = {}
        self._names: Dict[DataType, str] = {dt: name for name, dt in PRIMITIVE_DATATYPES.items()}

    def register(self, name: str, datatype: DataType) -> str:
        if name in PRIMITIVE_DATATYPES:
            return name
        self._types[name] = datatype
        self._names.setdefault(datatype, name)
        return name

    def intern(self, owner: str, prop: str, datatype: DataType) -> str:
        existing = self._names.get(datatype)
        if existing is not None:
            return existing
        base = f"{owner}_{prop.replace('.', '_')}Type"
        name, n = base, 2
        while name in self._types:
            name, n = f"{base}{n}", n + 1
        return self.register(name, datatype)

    def remove(self, name: str) -> None:
        datatype = self._types.pop(name, None)
        if datatype is not None and self._names.get(datatype) == name:
            del self._names[datatype]

    def resolve(self, name: DataTypeRef) -> Optional[DataType]:
        return self._types.get(name) or PRIMITIVE_DATATYPES.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._types or name in PRIMITIVE_DATATYPES

    def __len__(self) -> int:
        return len(self._types)

    def items(self) -> Iterator[Tuple[str, DataType]]:
        return iter(sorted(self._types.items()))


def fold_constraints(datatype: DataType, constraints: Tuple[ToscaConstraint, ...], where: str) -> DataType:
    """Fold TOSCA constraint clauses into an OCCI datatype.

    Raises:
        TypeMappingError: If a clause does not fit the base datatype
    """
    for clause in constraints:
        op, operand = clause.operator, clause.operand
        try:
            if op == "valid_values":
                if not isinstance(datatype, (StringType, EnumerationType)):
                    raise TypeMappingError(f"valid_values needs a string base at {where}", type_name=where)
                datatype = EnumerationType(tuple(str(v) for v in operand))
            elif op == "equal":
                if isinstance(datatype, (StringType, EnumerationType)):
                    datatype = EnumerationType((str(operand),))
                elif isinstance(datatype, NumericType):
                    value = _number(operand, where)
                    datatype = replace(datatype, min_inclusive=value, max_inclusive=value)
                else:
                    raise TypeMappingError(f"equal is not supported on {type(datatype).__name__} at {where}", type_name=where)
            elif op in _NUMERIC_OPERATORS:
                if not isinstance(datatype, NumericType):
                    raise TypeMappingError(f"{op} needs a numeric base at {where}", type_name=where)
                datatype = _fold_bound(datatype, op, operand, where)
            elif op in _LENGTH_OPERATORS:
                if not isinstance(datatype, StringType):
                    raise TypeMappingError(f"{op} needs a string base at {where}", type_name=where)
                size = int(_number(operand, where))
                if op in ("length", "min_length"):
                    datatype = replace(datatype, min_length=size)
                if op in ("length", "max_length"):
                    datatype = replace(datatype, max_length=size)
            elif op == "pattern":
                if not isinstance(datatype, StringType) or datatype.pattern is not None:
                    raise TypeMappingError(f"pattern needs an unconstrained string base at {where}", type_name=where)
                datatype = replace(datatype, pattern=str(operand))
        except ValueError as e:
            raise TypeMappingError(f"Constraint {op} at {where}: {e}", type_name=where, cause=e) from e
    return datatype


def _number(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeMappingError(f"Constraint operand {value!r} at {where} is not a number", type_name=where)
    return value


def _fold_bound(datatype: NumericType, op: str, operand, where: str) -> NumericType:
    integral = datatype.numeric_kind in (NumericKind.INTEGER, NumericKind.SHORT)
    if op == "in_range":
        if not isinstance(operand, (list, tuple)) or len(operand) != 2:
            raise TypeMappingError(f"in_range needs [min, max] at {where}", type_name=where)
        return replace(datatype, min_inclusive=_number(operand[0], where), max_inclusive=_number(operand[1], where))
    value = _number(operand, where)
    if op in ("greater_than", "less_than"):
        if not integral:
            raise TypeMappingError(f"{op} has no inclusive form on floats at {where}", type_name=where)
        value = value + 1 if op == "greater_than" else value - 1
    if op in ("greater_or_equal", "greater_than"):
        return replace(datatype, min_inclusive=value)
    return replace(datatype, max_inclusive=value)


def datatype_refs(datatype: DataType) -> List[DataTypeRef]:
    """Datatype names a datatype refers to."""
    if isinstance(datatype, ArrayType):
        return [datatype.element_type]
    if isinstance(datatype, RecordType):
        return [f.datatype for f in datatype.fields]
    return []


class TypeMapper:
    """Maps TOSCA types onto mixins and datatypes of a generated OCCI extension."""

    def __init__(
        self,
        rules: Optional[RuleTable] = None,
        tosca_scheme: str = DEFAULT_TOSCA_SCHEME,
        extension_name: str = "tosca",
    ):
        """Initialize mapper.

        Args:
            rules: Mapping rules (the builtin table if None)
            tosca_scheme: Scheme of generated mixins
            extension_name: Name of the generated extension
        """
        self.rules = rules or builtin_rule_table(tosca_scheme)
        self.tosca_scheme = tosca_scheme
        self.extension_name = extension_name

    # Names

    def mixin_id(self, type_name: str) -> str:
        return f"{self.tosca_scheme}{mangle_name(type_name)}"

    def action_scheme(self, term: str) -> str:
        return f"{self.tosca_scheme.rstrip('#')}/{term}/action#"

    def datatype_name(self, type_def: ToscaTypeDef) -> str:
        """OCCI name of a TOSCA datatype."""
        targets = self.rules.targets(type_def.name, DataTypeTarget)
        if targets:
            return targets[0].datatype_name
        return f"{type_def.short_name}RecordType"

    def anchor_kinds(self, type_name: str, registry: ToscaTypeRegistry) -> Tuple[str, ...]:
        """Kinds the mixin of a type may decorate, from the rules over its parents and depends."""
        kinds = set()
        seen = set()
        pending = [type_name]
        while pending:
            name = registry.canonical(pending.pop())
            if name in seen or name not in registry:
                continue
            seen.add(name)
            kinds.update(t.kind for t in self.rules.targets(name, MixinAppliedToKind))
            type_def = registry.get(name)
            if type_def is not None and type_def.derived_from:
                pending.append(type_def.derived_from)
            for target in self.rules.targets(name, MixinDependsOn):
                pending.extend(target.type_names)
        return tuple(sorted(kinds))

    # Properties and datatypes

    def map_property(
        self,
        prop: ToscaPropertyDef,
        pool: DataTypePool,
        registry: Optional[ToscaTypeRegistry] = None,
        owner: str = "property",
        report: Optional[MappingReport] = None,
    ) -> AttributeDef:
        """Map a property or attribute definition to an OCCI attribute.

        Constraints are folded into the attribute's datatype, which is interned
        in the pool as `<owner>_<property>Type` unless an equal one exists.

        Args:
            prop: TOSCA property definition
            pool: Datatypes generated so far
            registry: Registry resolving named datatypes
            owner: Term of the owning mixin or record
            report: Receives lossy-mapping warnings

        Returns:
            Attribute with required, default and datatype carried over

        Raises:
            TypeMappingError: If the type is unknown or a constraint does not fit it
        """
        datatype_name = self._property_datatype(prop, pool, registry, owner, report)
        default = prop.default
        if prop.tosca_type == "map" and default is not None:
            default = None
            if report is not None:
                report.warn(owner, f"Default of map property '{prop.name}' dropped")
        if default is not None:
            datatype = pool.resolve(datatype_name)
            if datatype is not None and not check_datatype(default, datatype, pool.resolve):
                raise TypeMappingError(
                    f"Default {default!r} of {owner}/{prop.name} does not conform to '{datatype_name}'",
                    type_name=owner,
                )
        return AttributeDef(
            name=prop.name,
            datatype=datatype_name,
            required=prop.required,
            mutable=True,
            default=default,
            description=prop.description,
        )

    def _named_datatype(self, tosca_type: str, registry: Optional[ToscaTypeRegistry]) -> Optional[str]:
        if registry is None:
            return None
        type_def = registry.get(tosca_type)
        if type_def is None or type_def.type_class != TypeClass.DATATYPE:
            return None
        return self.datatype_name(type_def)

    def _entry_datatype(self, entry: Optional[str], registry: Optional[ToscaTypeRegistry], where: str) -> str:
        if entry is None:
            return "string"
        if entry in BASE_DATATYPES:
            return BASE_DATATYPES[entry]
        named = self._named_datatype(entry, registry)
        if named is None:
            raise TypeMappingError(f"Unsupported entry_schema '{entry}' at {where}", type_name=where)
        return named

    def _property_datatype(
        self,
        prop: ToscaPropertyDef,
        pool: DataTypePool,
        registry: Optional[ToscaTypeRegistry],
        owner: str,
        report: Optional[MappingReport],
    ) -> str:
        where = f"{owner}/{prop.name}"
        tosca_type = registry.canonical(prop.tosca_type) if registry else prop.tosca_type
        collection = tosca_type in ("list", "map", "range")
        if tosca_type in BASE_DATATYPES:
            base = BASE_DATATYPES[tosca_type]
        elif tosca_type == "range":
            base = pool.intern(owner, prop.name, ArrayType("integer"))
        elif tosca_type in ("list", "map"):
            element = self._entry_datatype(prop.entry_schema, registry, where)
            base = pool.intern(owner, prop.name, ArrayType(element))
            if tosca_type == "map" and report is not None:
                report.warn(owner, f"Map property '{prop.name}' flattened to an array of {element}")
        else:
            named = self._named_datatype(tosca_type, registry)
            if named is None:
                raise TypeMappingError(f"Unknown type '{prop.tosca_type}' at {where}", type_name=owner)
            base = named

        if not prop.constraints:
            return base
        if collection:
            raise TypeMappingError(f"Constraints on {tosca_type} are not supported at {where}", type_name=owner)
        datatype = pool.resolve(base)
        if datatype is None:
            raise TypeMappingError(f"Datatype '{base}' must be mapped before it is constrained at {where}", type_name=owner)
        folded = fold_constraints(datatype, prop.constraints, where)
        if folded == datatype:
            return base
        return pool.intern(owner, prop.name, folded)

    def map_datatype(
        self,
        type_def: ToscaTypeDef,
        pool: DataTypePool,
        registry: Optional[ToscaTypeRegistry] = None,
        report: Optional[MappingReport] = None,
    ) -> DataType:
        """Map a TOSCA datatype.

        Record types get one field per (inherited or own) property; datatypes
        derived from a primitive become the constrained primitive. Field types
        naming other datatypes are kept by name and checked once all datatypes
        are mapped.

        Raises:
            TypeMappingError: If the datatype has no fields or a field type is unknown
        """
        targets = self.rules.targets(type_def.name, DataTypeTarget)
        if targets and targets[0].datatype_name in PRIMITIVE_DATATYPES:
            return PRIMITIVE_DATATYPES[targets[0].datatype_name]

        primitive, constraints = self._primitive_base(type_def, registry)
        if primitive is not None:
            base = BASE_DATATYPES.get(primitive)
            if base is None:
                raise TypeMappingError(f"Datatype {type_def.name} derives from unsupported '{primitive}'", type_name=type_def.name)
            return fold_constraints(PRIMITIVE_DATATYPES[base], constraints, type_def.name)

        if registry is not None and type_def.name in registry:
            properties = list(registry.effective_properties(type_def.name).values())
        else:
            properties = list(type_def.properties)
        if not properties:
            raise TypeMappingError(f"Datatype {type_def.name} declares no properties", type_name=type_def.name)
        record_name = self.datatype_name(type_def)
        fields = tuple(
            RecordField(prop.name, self._property_datatype(prop, pool, registry, record_name, report))
            for prop in properties
        )
        return RecordType(fields)

    def _primitive_base(
        self, type_def: ToscaTypeDef, registry: Optional[ToscaTypeRegistry]
    ) -> Tuple[Optional[str], Tuple[ToscaConstraint, ...]]:
        constraints: Tuple[ToscaConstraint, ...] = ()
        current: Optional[ToscaTypeDef] = type_def
        while current is not None:
            constraints = current.constraints + constraints
            if current.derived_from in PRIMITIVE_TOSCA_TYPES:
                return current.derived_from, constraints
            current = registry.parent(current.name) if registry is not None else None
        return None, ()

    # Types

    def map_type(
        self,
        type_def: ToscaTypeDef,
        registry: ToscaTypeRegistry,
        pool: Optional[DataTypePool] = None,
        report: Optional[MappingReport] = None,
    ) -> Mixin:
        """Map a node, relationship, capability or interface type to a mixin.

        derived_from becomes a depends edge on the parent's mixin. Exact rules
        add applies targets, extra depends and fixed constraints. Node types
        also depend on their own capability types, carry the capability
        properties prefixed with the capability name, and compile their
        mandatory requirements into constraints.

        Args:
            type_def: Type to map
            registry: Resolved registry holding the type
            pool: Datatypes generated so far
            report: Receives lossy-mapping warnings

        Returns:
            The type's mixin

        Raises:
            UnmappedTypeError: If no rule or parent anchors the type to exactly one kind
            TypeMappingError: If a property cannot be mapped
            ConstraintCompileError: If a requirement cannot be compiled
        """
        pool = pool if pool is not None else DataTypePool()
        name = type_def.name
        term = mangle_name(name)
        if type_def.type_class == TypeClass.DATATYPE:
            raise TypeMappingError(f"{name} is a datatype, not a mixin", type_name=name)

        depends: List[str] = []
        parent = registry.parent(name)
        if parent is not None:
            depends.append(self.mixin_id(parent.name))
        for target in self.rules.targets(name, MixinDependsOn):
            for dep in target.type_names:
                if dep not in registry:
                    raise UnmappedTypeError(name, f"rule depends on unknown type {dep}")
                depends.append(self.mixin_id(registry.canonical(dep)))
        if type_def.type_class == TypeClass.NODE:
            for cap_name, cap_type in type_def.capabilities.items():
                cap_def = registry.get(cap_type)
                if cap_def is None or cap_def.type_class != TypeClass.CAPABILITY:
                    raise UnmappedTypeError(name, f"capability '{cap_name}' has unknown type {cap_type}")
                depends.append(self.mixin_id(cap_def.name))
        depends = list(dict.fromkeys(dep for dep in depends if dep != self.mixin_id(name)))

        applies = tuple(t.kind for t in self.rules.targets(name, MixinAppliedToKind))
        anchors = self.anchor_kinds(name, registry)
        if type_def.type_class in (TypeClass.NODE, TypeClass.RELATIONSHIP) and type_def.derived_from is not None:
            if not anchors:
                raise UnmappedTypeError(name, "no rule and no mapped parent anchors it to a kind")
            if len(anchors) > 1:
                raise UnmappedTypeError(name, f"ambiguous anchor kinds {list(anchors)}")
        anchor = anchors[0] if len(anchors) == 1 else None

        constraints = tuple(t.constraint for t in self.rules.targets(name, ConstraintTarget))
        constraints += self._compile_requirements(type_def, registry, term)

        return Mixin(
            category=Category(
                term=term,
                scheme=self.tosca_scheme,
                title=type_def.description,
                attributes=self._attributes(type_def, registry, pool, term, report),
            ),
            depends=tuple(depends),
            applies=applies,
            actions=self._actions(type_def, registry, term, anchor),
            constraints=constraints,
        )

    def _attributes(
        self,
        type_def: ToscaTypeDef,
        registry: ToscaTypeRegistry,
        pool: DataTypePool,
        term: str,
        report: Optional[MappingReport],
    ) -> Tuple[AttributeDef, ...]:
        if type_def.type_class == TypeClass.INTERFACE:
            return ()
        attributes: Dict[str, AttributeDef] = {}
        for prop in type_def.properties:
            attributes[prop.name] = self.map_property(prop, pool, registry, term, report)
        for attr in type_def.attributes:
            if attr.name not in attributes:
                attributes[attr.name] = replace(self.map_property(attr, pool, registry, term, report), required=False)
        if type_def.type_class == TypeClass.NODE:
            for cap_name, cap_type in type_def.capabilities.items():
                for prop in registry.effective_properties(cap_type).values():
                    flat = f"{cap_name}.{prop.name}"
                    attribute = self.map_property(replace(prop, name=flat), pool, registry, term, report)
                    attributes[flat] = replace(attribute, required=False)
        return tuple(attributes.values())

    def _action_mapping(self, interface_type: Optional[str], registry: ToscaTypeRegistry, anchor: Optional[str]):
        if interface_type is None or interface_type not in registry or anchor is None:
            return None
        for name in [registry.canonical(interface_type), *registry.ancestors(interface_type)]:
            for target in self.rules.targets(name, ActionTarget):
                if anchor in target.action_mapping:
                    return target.action_mapping[anchor]
        return None

    def _actions(
        self,
        type_def: ToscaTypeDef,
        registry: ToscaTypeRegistry,
        term: str,
        anchor: Optional[str],
    ) -> Tuple[ActionDef, ...]:
        names: List[str] = []
        if type_def.type_class == TypeClass.INTERFACE:
            names = list(type_def.operations)
        for iface, operations in type_def.interfaces.items():
            interface_type = type_def.interface_types.get(iface)
            if not operations and interface_type and interface_type in registry:
                operations = registry.effective_operations(interface_type)
            mapping = self._action_mapping(interface_type, registry, anchor)
            for operation in operations:
                if mapping is None:
                    names.append(operation)
                elif operation in mapping:
                    names.append(mapping[operation])
                else:
                    logger.debug(f"Operation {iface}.{operation} of {type_def.name} has no action on {anchor}")
        scheme = self.action_scheme(term)
        return tuple(ActionDef(Category(term=action, scheme=scheme)) for action in dict.fromkeys(names))

    def _compile_requirements(
        self, type_def: ToscaTypeDef, registry: ToscaTypeRegistry, term: str
    ) -> Tuple[ConstraintDef, ...]:
        if type_def.type_class != TypeClass.NODE:
            return ()
        return tuple(
            self.compile_requirement(type_def.name, requirement, registry)
            for requirement in type_def.requirements
            if requirement.min_occurrences >= 1
        )

    def compile_requirement(
        self, type_name: str, requirement: ToscaRequirementDef, registry: ToscaTypeRegistry
    ) -> ConstraintDef:
        """Compile a mandatory requirement into an exists_link constraint.

        The requiring node is the link source. A hosting requirement on a
        compute-anchored node is met by a placementlink; any other hosting
        requirement is met by a HostedOn link or a placement.

        Raises:
            ConstraintCompileError: If the capability or relationship is unknown
        """
        relationship = registry.canonical(requirement.relationship or DEPENDS_ON)
        rel_def = registry.get(relationship)
        if rel_def is None or rel_def.type_class != TypeClass.RELATIONSHIP:
            raise ConstraintCompileError(type_name, requirement.name, f"unknown relationship type {relationship}")

        if requirement.capability is not None:
            cap_def = registry.get(requirement.capability)
            if cap_def is None or cap_def.type_class != TypeClass.CAPABILITY:
                raise ConstraintCompileError(
                    type_name, requirement.name, f"unknown capability type {requirement.capability}"
                )
            peer = self.mixin_id(cap_def.name)
        elif requirement.node is not None:
            node_def = registry.get(requirement.node)
            if node_def is None or node_def.type_class != TypeClass.NODE:
                raise ConstraintCompileError(type_name, requirement.name, f"unknown node type {requirement.node}")
            peer = self.mixin_id(node_def.name)
        else:
            raise ConstraintCompileError(type_name, requirement.name, "needs a capability or a node")

        via_relationship = ExistsLink(LinkDirection.OUT, self.mixin_id(relationship), peer)
        via_placement = ExistsLink(LinkDirection.OUT, PLACEMENTLINK_KIND, peer)
        if registry.is_a(relationship, HOSTED_ON):
            node_anchors = self.anchor_kinds(requirement.node, registry) if requirement.node else ()
            body = via_placement if COMPUTE_KIND in node_anchors else AnyOf((via_relationship, via_placement))
        else:
            body = via_relationship
        return ConstraintDef(
            name=f"{mangle_name(type_name)}_requires_{requirement.name}",
            body=body,
            description=f"{type_name} requires '{requirement.name}'",
        )

    # Extension

    def generate_extension(
        self,
        registry: ToscaTypeRegistry,
        base_extensions: Optional[ExtensionSet] = None,
        report: Optional[MappingReport] = None,
    ) -> OcciExtension:
        """Generate the TOSCA extension for every type of a registry.

        Datatypes are mapped first; references between datatypes are
        resolved in a second pass. A type whose mixin depends on a failed
        type fails too.

        Args:
            registry: Resolved registry
            base_extensions: Loaded core, infrastructure, MoDMaCAO and SLA extensions
            report: Report to fill (a fresh one if None)

        Returns:
            Extension importing the base extensions, mixins sorted by term

        Raises:
            UnmappedTypeError, TypeMappingError, ConstraintCompileError: The first
                node or relationship type error, after the report is logged
            LinkError: If the generated extension does not link against the base extensions
        """
        report = report if report is not None else MappingReport()
        pool = DataTypePool()
        origins: Dict[str, str] = {}
        failures: List[ApplicationException] = []

        for type_def in registry.of_class(TypeClass.DATATYPE):
            if type_def.derived_from is None and not type_def.properties:
                report.warn(type_def.name, "Abstract root datatype; no OCCI datatype emitted")
                continue
            try:
                datatype = self.map_datatype(type_def, pool, registry, report)
            except TypeMappingError as e:
                report.error(type_def.name, e.message)
                continue
            name = self.datatype_name(type_def)
            pool.register(name, datatype)
            origins[name] = type_def.name

        built: Dict[str, Tuple[ToscaTypeDef, Mixin]] = {}
        for type_class in MIXIN_CLASS_ORDER:
            blocking = type_class in (TypeClass.NODE, TypeClass.RELATIONSHIP)
            for type_def in registry.of_class(type_class):
                try:
                    mixin = self.map_type(type_def, registry, pool, report)
                except (UnmappedTypeError, TypeMappingError, ConstraintCompileError) as e:
                    report.error(type_def.name, e.message, blocking=blocking)
                    if blocking:
                        failures.append(e)
                    continue
                built[mixin.id] = (type_def, mixin)

        self._drop_dangling(built, pool, origins, report, failures)

        for ref, (type_def, mixin) in sorted(built.items()):
            source, _ = self.rules.lookup(type_def.name, type_def.derived_from)
            report.mapped(type_def.name, f"-> {mixin.term} ({source.value})")

        self.log_report(report)
        if failures:
            raise failures[0]

        imports = tuple(
            name for name in (base_extensions.names if base_extensions is not None else ())
            if name in BASE_EXTENSIONS
        )
        extension = OcciExtension(
            name=self.extension_name,
            scheme=self.tosca_scheme,
            imports=imports,
            mixins=tuple(mixin for _, mixin in sorted(built.values(), key=lambda item: item[1].term)),
            datatypes=dict(pool.items()),
            description="Mixins generated from TOSCA types",
        )
        if base_extensions is not None and self.extension_name not in base_extensions:
            link_extension(extension, base_extensions)
        logger.info(
            f"Generated extension '{extension.name}': {len(extension.mixins)} mixins, "
            f"{len(extension.datatypes)} datatypes"
        )
        return extension

    def _drop_dangling(
        self,
        built: Dict[str, Tuple[ToscaTypeDef, Mixin]],
        pool: DataTypePool,
        origins: Dict[str, str],
        report: MappingReport,
        failures: List[ApplicationException],
    ) -> None:
        changed = True
        while changed:
            changed = False
            for name, datatype in list(pool.items()):
                missing = [ref for ref in datatype_refs(datatype) if ref not in pool]
                if missing:
                    pool.remove(name)
                    report.error(origins.get(name, name), f"Unresolved datatype '{missing[0]}'")
                    changed = True
            for ref, (type_def, mixin) in list(built.items()):
                problem = next(
                    (f"depends on unmapped mixin {dep}" for dep in mixin.depends if dep not in built),
                    None,
                ) or next(
                    (
                        f"attribute '{a.name}' has unresolved datatype '{a.datatype}'"
                        for a in mixin.category.attributes
                        if a.datatype not in pool
                    ),
                    None,
                ) or next(
                    (
                        f"constraint {c.name} references unmapped mixin {r}"
                        for c in mixin.constraints
                        for r in constraint_refs(c.body)
                        if r.startswith(self.tosca_scheme) and r not in built
                    ),
                    None,
                )
                if problem is None:
                    continue
                del built[ref]
                changed = True
                blocking = type_def.type_class in (TypeClass.NODE, TypeClass.RELATIONSHIP)
                report.error(type_def.name, problem, blocking=blocking)
                if blocking:
                    failures.append(UnmappedTypeError(type_def.name, problem))

    @staticmethod
    def log_report(report: MappingReport) -> None:
        """Emit one structured log line per report entry."""
        for entry in report.entries:
            line = f"mapping type={entry.type_name} level={entry.level.value} message={entry.message!r}"
            if entry.level == ReportLevel.ERROR:
                logger.error(line)
            elif entry.level == ReportLevel.WARNING:
                logger.warning(line)
            else:
                logger.debug(line)

    # Census

    def census(self, extension: OcciExtension, extensions: ExtensionSet) -> Census:
        """Count mixins per base extension owning their anchor kinds.

        Args:
            extension: Generated extension
            extensions: Linked set holding the extension and its imports

        Returns:
            Census with the total and a count per base extension (or `none`)
        """
        per_extension = {name: 0 for name in (*BASE_EXTENSIONS, NO_ANCHOR)}
        for mixin in extension.mixins:
            owners = {extensions.owner_of(kind) for kind in extensions.anchor_kinds(mixin.id)}
            owners.discard(None)
            if not owners:
                per_extension[NO_ANCHOR] += 1
            for owner in owners:
                per_extension[owner] = per_extension.get(owner, 0) + 1  # type: ignore[index]
        return Census(total=len(extension.mixins), per_extension=per_extension)
