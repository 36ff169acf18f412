"""TOSCA Simple Profile YAML parsing: type documents, topology templates and the type registry."""

import logging
import re
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import yaml

from ...domain.models.tosca import (
    CONSTRAINT_OPERATORS,
    PRIMITIVE_TOSCA_TYPES,
    SECTION_TYPE_CLASSES,
    RequirementBinding,
    ToscaConstraint,
    ToscaNodeTemplate,
    ToscaPropertyDef,
    ToscaRelationshipTemplate,
    ToscaRequirementDef,
    ToscaTopology,
    ToscaTypeDef,
    ToscaTypeRegistry,
    TypeClass,
)
from ...shared.exceptions import (
    DanglingReferenceError,
    DuplicateTemplateError,
    DuplicateTypeError,
    InheritanceCycleError,
    MissingInputError,
    SchemaError,
    UnresolvedParentError,
    YamlError,
)


logger = logging.getLogger(__name__)

DEFINITION_KEYS = {"tosca_definitions_version", "description", "metadata", "dsl_definitions", "repositories"}
IGNORED_SECTIONS = {"imports", "artifact_types", "policy_types", "group_types"}
COMMON_TYPE_KEYS = {"derived_from", "description", "version", "metadata"}
TYPE_KEYS: Dict[TypeClass, set] = {
    TypeClass.NODE: COMMON_TYPE_KEYS | {
        "properties", "attributes", "requirements", "capabilities", "interfaces", "artifacts",
    },
    TypeClass.RELATIONSHIP: COMMON_TYPE_KEYS | {
        "properties", "attributes", "interfaces", "valid_target_types",
    },
    TypeClass.CAPABILITY: COMMON_TYPE_KEYS | {"properties", "attributes", "valid_source_types"},
    TypeClass.DATATYPE: COMMON_TYPE_KEYS | {"properties", "constraints"},
}
INTERFACE_RESERVED_KEYS = COMMON_TYPE_KEYS | {"inputs", "type"}
PROPERTY_KEYS = {"type", "required", "default", "constraints", "description", "entry_schema", "status"}
TEMPLATE_KEYS = {
    "type", "description", "metadata", "properties", "attributes", "requirements",
    "capabilities", "interfaces", "artifacts", "directives", "node_filter", "copy",
}
UNBOUNDED = "UNBOUNDED"

_SIZE_UNITS = {
    "b": 1,
    "kb": 10**3,
    "kib": 2**10,
    "mb": 10**6,
    "mib": 2**20,
    "gb": 10**9,
    "gib": 2**30,
    "tb": 10**12,
    "tib": 2**40,
}
_FREQUENCY_UNITS = {"hz": 1e-6, "khz": 1e-3, "mhz": 1.0, "ghz": 1e3}
SCALAR_UNIT_SIZE = "scalar-unit.size"
SCALAR_UNIT_FREQUENCY = "scalar-unit.frequency"
SCALAR_UNIT_TYPES = (SCALAR_UNIT_SIZE, SCALAR_UNIT_FREQUENCY)
_SCALAR_PATTERN = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([A-Za-z]+)\s*$")


class _DuplicateKey(Exception):
    def __init__(self, key: Any, line: int):
        super().__init__(f"duplicate key {key!r}")
        self.key = key
        self.line = line


class _UniqueKeyLoader(yaml.SafeLoader):
    """SafeLoader that rejects duplicate mapping keys."""

    def construct_mapping(self, node, deep=False):
        seen = set()
        for key_node, _ in node.value:
            key = self.construct_object(key_node, deep=deep)
            if key in seen:
                raise _DuplicateKey(key, key_node.start_mark.line + 1)
            seen.add(key)
        return super().construct_mapping(node, deep=deep)


def _load_yaml(text: str) -> Tuple[Any, Optional[_DuplicateKey]]:
    try:
        return yaml.load(text, Loader=_UniqueKeyLoader), None
    except _DuplicateKey as dup:
        return None, dup
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise YamlError(f"Invalid YAML: {e}", line=line, cause=e) from e


def normalize_scalar(value: Any, tosca_type: Optional[str]) -> Any:
    """Normalize a scalar-unit string of a declared scalar-unit type.

    Sizes become integer megabytes (decimal units, rounded); frequencies become
    float megahertz. Values of any other type are returned unchanged, however
    they look.
    """
    if tosca_type not in SCALAR_UNIT_TYPES or not isinstance(value, str):
        return value
    match = _SCALAR_PATTERN.match(value)
    if match is None:
        return value
    amount, unit = float(match.group(1)), match.group(2).lower()
    if tosca_type == SCALAR_UNIT_SIZE and unit in _SIZE_UNITS:
        return int(round(amount * _SIZE_UNITS[unit] / 10**6))
    if tosca_type == SCALAR_UNIT_FREQUENCY and unit in _FREQUENCY_UNITS:
        return amount * _FREQUENCY_UNITS[unit]
    return value


def normalize_value(value: Any, prop: Optional[ToscaPropertyDef]) -> Any:
    """Normalize a value against its property definition, list and map entries included."""
    if prop is None:
        return value
    if prop.tosca_type in ("list", "map") and prop.entry_schema in SCALAR_UNIT_TYPES:
        if isinstance(value, list):
            return [normalize_scalar(v, prop.entry_schema) for v in value]
        if isinstance(value, dict):
            return {k: normalize_scalar(v, prop.entry_schema) for k, v in value.items()}
    return normalize_scalar(value, prop.tosca_type)


def _mapping(value: Any, where: str) -> Dict[str, Any]:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise SchemaError(f"Expected a mapping at {where}", location=where)
    return value


def _sequence(value: Any, where: str) -> List[Any]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise SchemaError(f"Expected a list at {where}", location=where)
    return value


def _single_entry(item: Any, where: str) -> Tuple[str, Any]:
    if not isinstance(item, dict) or len(item) != 1:
        raise SchemaError(f"Expected a single-key mapping at {where}", location=where)
    return next(iter(item.items()))


class ToscaParser:
    """Parses TOSCA type documents and topology templates."""

    def __init__(self, aliases: Optional[Mapping[str, str]] = None):
        """Initialize parser.

        Args:
            aliases: Alias type name -> canonical type name
        """
        self.aliases = dict(aliases or {})

    # Types

    def parse_types(self, text: str) -> List[ToscaTypeDef]:
        """Parse a type-definition document.

        Types are returned grouped by section (nodes, relationships,
        capabilities, interfaces, data), each in declaration order. References
        to datatypes not yet defined are kept by name.

        Args:
            text: YAML document

        Returns:
            One ToscaTypeDef per declared type

        Raises:
            YamlError: If the document is not YAML
            SchemaError: On unknown sections or fields
            DuplicateTypeError: On a duplicated key
        """
        doc, duplicate = _load_yaml(text)
        if duplicate is not None:
            raise DuplicateTypeError(str(duplicate.key), line=duplicate.line)
        if doc is None:
            return []
        doc = _mapping(doc, "document")

        types: List[ToscaTypeDef] = []
        for key, value in doc.items():
            if key in DEFINITION_KEYS or key == "topology_template":
                continue
            if key in IGNORED_SECTIONS:
                logger.warning(f"Section '{key}' is not mapped; ignored")
                continue
            if key not in SECTION_TYPE_CLASSES:
                raise SchemaError(f"Unknown section '{key}'", location=key)

        for section, type_class in SECTION_TYPE_CLASSES.items():
            for name, body in _mapping(doc.get(section), section).items():
                types.append(self._parse_type(str(name), type_class, _mapping(body, f"{section}/{name}")))
        logger.debug(f"Parsed {len(types)} types")
        return types

    def parse_type_files(self, paths: Iterable[Union[str, Path]]) -> List[ToscaTypeDef]:
        """Parse several type documents.

        Raises:
            DuplicateTypeError: If a type is declared in two files
        """
        types: List[ToscaTypeDef] = []
        seen: Dict[str, str] = {}
        for path in paths:
            path = Path(path)
            for type_def in self.parse_types(path.read_text(encoding="utf-8")):
                if type_def.name in seen:
                    logger.error(f"{type_def.name} is declared in {seen[type_def.name]} and {path}")
                    raise DuplicateTypeError(type_def.name)
                seen[type_def.name] = str(path)
                types.append(type_def)
        return types

    def parse_type_dir(self, directory: Union[str, Path]) -> List[ToscaTypeDef]:
        """Parse every `*.yaml` file of a directory, in name order."""
        directory = Path(directory)
        if not directory.is_dir():
            raise SchemaError(f"Type directory not found: {directory}", location=str(directory))
        return self.parse_type_files(sorted(directory.glob("*.yaml")))

    def _parse_type(self, name: str, type_class: TypeClass, body: Dict[str, Any]) -> ToscaTypeDef:
        where = name
        if type_class != TypeClass.INTERFACE:
            unknown = set(body) - TYPE_KEYS[type_class]
            if unknown:
                raise SchemaError(f"Unknown fields {sorted(unknown)} in {where}", location=where)

        derived_from = body.get("derived_from")
        description = body.get("description")
        if derived_from is not None and not isinstance(derived_from, str):
            raise SchemaError(f"derived_from of {where} must be a type name", location=where)

        if type_class == TypeClass.INTERFACE:
            operations = tuple(str(k) for k in body if k not in INTERFACE_RESERVED_KEYS)
            return ToscaTypeDef(
                name=name,
                type_class=type_class,
                derived_from=derived_from,
                description=description,
                operations=operations,
            )

        properties = self._parse_properties(body.get("properties"), f"{where}/properties")
        attributes = self._parse_properties(body.get("attributes"), f"{where}/attributes")
        requirements: Tuple[ToscaRequirementDef, ...] = ()
        capabilities: Dict[str, str] = {}
        interfaces: Dict[str, Tuple[str, ...]] = {}
        interface_types: Dict[str, str] = {}
        constraints: Tuple[ToscaConstraint, ...] = ()

        if type_class == TypeClass.NODE:
            requirements = tuple(
                self._parse_requirement_def(item, f"{where}/requirements")
                for item in _sequence(body.get("requirements"), f"{where}/requirements")
            )
            for cap_name, cap in _mapping(body.get("capabilities"), f"{where}/capabilities").items():
                if isinstance(cap, str):
                    capabilities[str(cap_name)] = cap
                elif isinstance(cap, dict) and isinstance(cap.get("type"), str):
                    capabilities[str(cap_name)] = cap["type"]
                else:
                    raise SchemaError(f"Capability '{cap_name}' of {where} needs a type", location=where)
        if type_class in (TypeClass.NODE, TypeClass.RELATIONSHIP):
            for iface_name, iface in _mapping(body.get("interfaces"), f"{where}/interfaces").items():
                iface = _mapping(iface, f"{where}/interfaces/{iface_name}")
                if isinstance(iface.get("type"), str):
                    interface_types[str(iface_name)] = iface["type"]
                interfaces[str(iface_name)] = tuple(
                    str(k) for k in iface if k not in INTERFACE_RESERVED_KEYS
                )
        if type_class == TypeClass.NODE and body.get("artifacts"):
            logger.warning(f"Artifacts of {name} are not mapped; ignored")
        if type_class == TypeClass.DATATYPE:
            constraints = self._parse_constraints(body.get("constraints"), f"{where}/constraints", derived_from)

        try:
            return ToscaTypeDef(
                name=name,
                type_class=type_class,
                derived_from=derived_from,
                description=description,
                properties=properties,
                attributes=attributes,
                requirements=requirements,
                capabilities=capabilities,
                interfaces=interfaces,
                interface_types=interface_types,
                constraints=constraints,
            )
        except ValueError as e:
            raise SchemaError(str(e), location=where) from e

    def _parse_constraints(
        self, raw: Any, where: str, tosca_type: Optional[str] = None
    ) -> Tuple[ToscaConstraint, ...]:
        constraints = []
        for item in _sequence(raw, where):
            operator, operand = _single_entry(item, where)
            if operator not in CONSTRAINT_OPERATORS:
                raise SchemaError(f"Unknown constraint '{operator}' at {where}", location=where)
            if isinstance(operand, list):
                operand = [normalize_scalar(o, tosca_type) for o in operand]
            else:
                operand = normalize_scalar(operand, tosca_type)
            constraints.append(ToscaConstraint(operator, operand))
        return tuple(constraints)

    def _parse_properties(self, raw: Any, where: str) -> Tuple[ToscaPropertyDef, ...]:
        properties = []
        for prop_name, body in _mapping(raw, where).items():
            body = _mapping(body, f"{where}/{prop_name}")
            unknown = set(body) - PROPERTY_KEYS
            if unknown:
                raise SchemaError(f"Unknown fields {sorted(unknown)} in {where}/{prop_name}", location=where)
            tosca_type = body.get("type")
            if not isinstance(tosca_type, str):
                raise SchemaError(f"Property {where}/{prop_name} needs a type", location=where)
            entry_schema = body.get("entry_schema")
            if isinstance(entry_schema, dict):
                entry_schema = entry_schema.get("type")
            properties.append(
                ToscaPropertyDef(
                    name=str(prop_name),
                    tosca_type=tosca_type,
                    required=bool(body.get("required", True)),
                    default=normalize_scalar(body.get("default"), tosca_type),
                    constraints=self._parse_constraints(body.get("constraints"), f"{where}/{prop_name}", tosca_type),
                    description=body.get("description"),
                    entry_schema=entry_schema,
                )
            )
        return tuple(properties)

    def _parse_requirement_def(self, item: Any, where: str) -> ToscaRequirementDef:
        name, body = _single_entry(item, where)
        if isinstance(body, str):
            return ToscaRequirementDef(name=str(name), capability=body)
        body = _mapping(body, f"{where}/{name}")
        relationship = body.get("relationship")
        if isinstance(relationship, dict):
            relationship = relationship.get("type")
        occurrences = None
        if body.get("occurrences") is not None:
            raw = _sequence(body["occurrences"], f"{where}/{name}/occurrences")
            if len(raw) != 2:
                raise SchemaError(f"occurrences of {where}/{name} must be [min, max]", location=where)
            upper = None if raw[1] == UNBOUNDED else int(raw[1])
            occurrences = (int(raw[0]), upper)
        return ToscaRequirementDef(
            name=str(name),
            capability=body.get("capability"),
            node=body.get("node"),
            relationship=relationship,
            occurrences=occurrences,
        )

    # Registry

    def resolve_registry(
        self,
        type_defs: Iterable[ToscaTypeDef],
        builtins: Optional[ToscaTypeRegistry] = None,
    ) -> ToscaTypeRegistry:
        """Close a set of types under derived_from.

        Args:
            type_defs: Parsed types
            builtins: Registry of already-resolved types (e.g. the normative ones)

        Returns:
            Registry in which every non-root type's parent resolves

        Raises:
            DuplicateTypeError: If a type is defined twice
            UnresolvedParentError: If a parent is unknown
            InheritanceCycleError: If derived_from loops
        """
        types: Dict[str, ToscaTypeDef] = {}
        for type_def in list(builtins or []) + list(type_defs):
            if type_def.name in types:
                raise DuplicateTypeError(type_def.name)
            types[type_def.name] = type_def
        for alias in self.aliases:
            if types.pop(alias, None) is not None:
                logger.info(f"Dropped alias type {alias} in favour of {self.aliases[alias]}")

        def canonical(name: str) -> str:
            return self.aliases.get(name, name)

        for type_def in types.values():
            parent = type_def.derived_from
            if parent is None:
                continue
            if canonical(parent) == type_def.name:
                raise InheritanceCycleError([type_def.name, type_def.name])
            if canonical(parent) not in types and not (
                type_def.type_class == TypeClass.DATATYPE and parent in PRIMITIVE_TOSCA_TYPES
            ):
                raise UnresolvedParentError(type_def.name, parent)

        for name in sorted(types):
            chain = [name]
            current = types[name].derived_from
            while current is not None and canonical(current) in types:
                current = canonical(current)
                if current in chain:
                    raise InheritanceCycleError(chain[chain.index(current):] + [current])
                chain.append(current)
                current = types[current].derived_from

        registry = ToscaTypeRegistry(types, self.aliases)
        logger.info(f"Resolved registry of {len(registry)} types")
        return registry

    # Topologies

    def parse_topology(
        self,
        text: str,
        name: Optional[str] = None,
        inputs: Optional[Mapping[str, Any]] = None,
    ) -> ToscaTopology:
        """Parse a document holding a topology_template.

        Args:
            text: YAML document
            name: Topology name (defaults to metadata.template_name, else "topology")
            inputs: Input values overriding declared defaults

        Returns:
            Parsed topology with get_input resolved and inline requirements
            normalized into bindings

        Raises:
            YamlError: If the document is not YAML
            SchemaError: If topology_template is missing or malformed
            DanglingReferenceError: If a requirement names an unknown template
            MissingInputError: If an input has neither value nor default
        """
        doc, duplicate = _load_yaml(text)
        if duplicate is not None:
            raise DuplicateTemplateError(str(duplicate.key))
        doc = _mapping(doc, "document")
        if "topology_template" not in doc:
            raise SchemaError("Document has no topology_template", location="topology_template")
        topo = _mapping(doc["topology_template"], "topology_template")
        metadata = _mapping(doc.get("metadata"), "metadata")
        topology_name = name or metadata.get("template_name") or "topology"

        for key in ("policies", "outputs", "substitution_mappings", "workflows"):
            if topo.get(key):
                logger.warning(f"topology_template/{key} is not mapped; ignored")

        declared = self._parse_properties(topo.get("inputs"), "topology_template/inputs")
        input_defs = {p.name: p for p in declared}
        values = self._input_values(input_defs, dict(inputs or {}))

        raw_nodes = _mapping(topo.get("node_templates"), "topology_template/node_templates")
        raw_relationships = _mapping(
            topo.get("relationship_templates"), "topology_template/relationship_templates"
        )
        relationships: Dict[str, ToscaRelationshipTemplate] = {}
        for rel_name, body in raw_relationships.items():
            body = _mapping(body, f"relationship_templates/{rel_name}")
            if not isinstance(body.get("type"), str):
                raise SchemaError(f"Relationship template '{rel_name}' needs a type", location=str(rel_name))
            relationships[str(rel_name)] = ToscaRelationshipTemplate(
                name=str(rel_name),
                type_name=body["type"],
                property_values=self._values(body.get("properties"), values, f"{rel_name}/properties"),
            )

        nodes: List[ToscaNodeTemplate] = []
        for node_name, body in raw_nodes.items():
            nodes.append(
                self._parse_node_template(str(node_name), body, values, set(map(str, raw_nodes)), relationships)
            )

        groups = tuple(
            {"name": str(group_name), **_mapping(body, f"groups/{group_name}")}
            for group_name, body in _mapping(topo.get("groups"), "topology_template/groups").items()
        )
        if groups:
            logger.warning(f"{len(groups)} groups parsed but not mapped")

        return ToscaTopology(
            name=str(topology_name),
            inputs=input_defs,
            node_templates=tuple(nodes),
            relationship_templates=tuple(relationships.values()),
            groups=groups,
            description=topo.get("description") or doc.get("description"),
        )

    def _input_values(self, input_defs: Dict[str, ToscaPropertyDef], given: Dict[str, Any]) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        for input_name, definition in input_defs.items():
            if input_name in given:
                values[input_name] = normalize_scalar(given[input_name], definition.tosca_type)
            elif definition.default is not None:
                values[input_name] = definition.default
            elif definition.required:
                raise MissingInputError(input_name)
        for input_name in given:
            if input_name not in input_defs:
                logger.warning(f"Input '{input_name}' is not declared by the topology")
        return values

    def _resolve(self, value: Any, inputs: Dict[str, Any]) -> Any:
        if isinstance(value, dict):
            if len(value) == 1 and "get_input" in value:
                input_name = value["get_input"]
                if isinstance(input_name, list):
                    input_name = input_name[0]
                if input_name not in inputs:
                    raise MissingInputError(str(input_name))
                return self._resolve(inputs[input_name], inputs)
            if len(value) == 1 and next(iter(value)) in ("get_property", "get_attribute", "concat", "token"):
                logger.warning(f"Intrinsic function {next(iter(value))} is not evaluated")
                return value
            return {k: self._resolve(v, inputs) for k, v in value.items()}
        if isinstance(value, list):
            return [self._resolve(v, inputs) for v in value]
        return value

    def _values(self, raw: Any, inputs: Dict[str, Any], where: str) -> Dict[str, Any]:
        return self._resolve(_mapping(raw, where), inputs)

    def _parse_node_template(
        self,
        name: str,
        body: Any,
        inputs: Dict[str, Any],
        node_names: set,
        relationships: Dict[str, ToscaRelationshipTemplate],
    ) -> ToscaNodeTemplate:
        body = _mapping(body, f"node_templates/{name}")
        unknown = set(body) - TEMPLATE_KEYS
        if unknown:
            raise SchemaError(f"Unknown fields {sorted(unknown)} in node template {name}", location=name)
        if not isinstance(body.get("type"), str):
            raise SchemaError(f"Node template '{name}' needs a type", location=name)
        if body.get("interfaces") or body.get("artifacts"):
            logger.warning(f"Interfaces and artifacts of template {name} are not mapped; ignored")

        bindings: List[RequirementBinding] = []
        for item in _sequence(body.get("requirements"), f"{name}/requirements"):
            req_name, req = _single_entry(item, f"{name}/requirements")
            relationship: Optional[str] = None
            relationship_template: Optional[str] = None
            if isinstance(req, str):
                target = req
            else:
                req = _mapping(req, f"{name}/requirements/{req_name}")
                target = req.get("node")
                if not isinstance(target, str):
                    raise SchemaError(
                        f"Requirement '{req_name}' of node template '{name}' names no target node",
                        location=f"{name}/requirements/{req_name}",
                    )
                rel = req.get("relationship")
                if isinstance(rel, dict):
                    relationship = rel.get("type")
                elif isinstance(rel, str) and rel in relationships:
                    relationship_template = rel
                    relationship = relationships[rel].type_name
                elif isinstance(rel, str):
                    relationship = rel
            if target not in node_names:
                raise DanglingReferenceError(name, str(req_name), str(target))
            if relationship_template is not None:
                relationships[relationship_template] = replace(
                    relationships[relationship_template], source_template=name, target_template=target
                )
            bindings.append(
                RequirementBinding(
                    requirement=str(req_name),
                    target=target,
                    relationship=relationship,
                    relationship_template=relationship_template,
                )
            )

        capability_values = {
            str(cap): self._values(
                _mapping(cap_body, f"{name}/capabilities/{cap}").get("properties"),
                inputs,
                f"{name}/capabilities/{cap}",
            )
            for cap, cap_body in _mapping(body.get("capabilities"), f"{name}/capabilities").items()
        }
        return ToscaNodeTemplate(
            name=name,
            type_name=body["type"],
            property_values=self._values(body.get("properties"), inputs, f"{name}/properties"),
            requirement_bindings=tuple(bindings),
            capability_property_values=capability_values,
        )

    # Emission

    def dump_types(self, types: Iterable[ToscaTypeDef]) -> str:
        """Re-emit types as canonical YAML that parses back to the same model."""
        doc: Dict[str, Dict[str, Any]] = {}
        sections = {type_class: section for section, type_class in SECTION_TYPE_CLASSES.items()}
        for type_def in types:
            doc.setdefault(sections[type_def.type_class], {})[type_def.name] = _type_body(type_def)
        doc["tosca_definitions_version"] = "tosca_simple_yaml_1_0"  # type: ignore[assignment]
        return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


def _constraints_body(constraints: Tuple[ToscaConstraint, ...]) -> List[Dict[str, Any]]:
    return [{c.operator: c.operand} for c in constraints]


def _property_body(prop: ToscaPropertyDef) -> Dict[str, Any]:
    body: Dict[str, Any] = {"type": prop.tosca_type, "required": prop.required}
    if prop.default is not None:
        body["default"] = prop.default
    if prop.constraints:
        body["constraints"] = _constraints_body(prop.constraints)
    if prop.description is not None:
        body["description"] = prop.description
    if prop.entry_schema is not None:
        body["entry_schema"] = {"type": prop.entry_schema}
    return body


def _type_body(type_def: ToscaTypeDef) -> Dict[str, Any]:
    body: Dict[str, Any] = {}
    if type_def.derived_from is not None:
        body["derived_from"] = type_def.derived_from
    if type_def.description is not None:
        body["description"] = type_def.description
    if type_def.type_class == TypeClass.INTERFACE:
        for operation in type_def.operations:
            body[operation] = None
        return body
    if type_def.properties:
        body["properties"] = {p.name: _property_body(p) for p in type_def.properties}
    if type_def.attributes:
        body["attributes"] = {p.name: _property_body(p) for p in type_def.attributes}
    if type_def.requirements:
        requirements = []
        for req in type_def.requirements:
            req_body: Dict[str, Any] = {}
            for key in ("capability", "node", "relationship"):
                if getattr(req, key) is not None:
                    req_body[key] = getattr(req, key)
            if req.occurrences is not None:
                lower, upper = req.occurrences
                req_body["occurrences"] = [lower, UNBOUNDED if upper is None else upper]
            requirements.append({req.name: req_body})
        body["requirements"] = requirements
    if type_def.capabilities:
        body["capabilities"] = {name: {"type": cap} for name, cap in type_def.capabilities.items()}
    if type_def.interfaces or type_def.interface_types:
        interfaces: Dict[str, Dict[str, Any]] = {}
        for name in list(type_def.interface_types) + list(type_def.interfaces):
            iface = interfaces.setdefault(name, {})
            if name in type_def.interface_types:
                iface["type"] = type_def.interface_types[name]
            for operation in type_def.interfaces.get(name, ()):
                iface[operation] = None
        body["interfaces"] = interfaces
    if type_def.constraints:
        body["constraints"] = _constraints_body(type_def.constraints)
    return body
