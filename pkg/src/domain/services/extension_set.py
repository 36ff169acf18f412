"""Linking and lookup over a set of loaded OCCI extensions."""

import logging
from typing import Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx

from ...shared.exceptions import CycleError, LinkError
from ..models.occi import (
    ActionDef,
    AllOf,
    AnyOf,
    ArrayType,
    AttributeDef,
    CategoryRef,
    ConstraintExpr,
    DataType,
    DataTypeRef,
    ExistsLink,
    Kind,
    Mixin,
    Not,
    OcciExtension,
    RecordType,
)
from ..models.vocabulary import LINK_KIND, RESOURCE_KIND
from .datatypes import PRIMITIVE_DATATYPES, check_datatype


logger = logging.getLogger(__name__)

ROOT_KINDS = (RESOURCE_KIND, LINK_KIND)


class ExtensionSet:
    """Linked extensions indexed by category reference and datatype name."""

    def __init__(self, extensions: Iterable[OcciExtension] = ()):
        self._extensions: Dict[str, OcciExtension] = {}
        self._kinds: Dict[CategoryRef, Kind] = {}
        self._mixins: Dict[CategoryRef, Mixin] = {}
        self._datatypes: Dict[DataTypeRef, DataType] = dict(PRIMITIVE_DATATYPES)
        self._owners: Dict[CategoryRef, str] = {}
        self._closures: Dict[CategoryRef, Tuple[CategoryRef, ...]] = {}
        for extension in extensions:
            self.add(extension)

    def add(self, extension: OcciExtension) -> OcciExtension:
        """Link an extension against the loaded ones and index it.

        Raises:
            LinkError: If a reference does not resolve or a category is duplicated
            CycleError: If mixin depends or kind parents loop
        """
        link_extension(extension, self)
        self._extensions[extension.name] = extension
        for kind in extension.kinds:
            self._kinds[kind.id] = kind
            self._owners[kind.id] = extension.name
        for mixin in extension.mixins:
            self._mixins[mixin.id] = mixin
            self._owners[mixin.id] = extension.name
        for name, datatype in extension.datatypes.items():
            self._datatypes.setdefault(name, datatype)
        self._closures.clear()
        logger.info(
            f"Linked extension '{extension.name}': {len(extension.kinds)} kinds, "
            f"{len(extension.mixins)} mixins, {len(extension.datatypes)} datatypes"
        )
        return extension

    # Lookup

    @property
    def names(self) -> List[str]:
        return list(self._extensions)

    @property
    def extensions(self) -> List[OcciExtension]:
        return list(self._extensions.values())

    def get_extension(self, name: str) -> Optional[OcciExtension]:
        return self._extensions.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._extensions

    def get_kind(self, ref: CategoryRef) -> Optional[Kind]:
        return self._kinds.get(ref)

    def get_mixin(self, ref: CategoryRef) -> Optional[Mixin]:
        return self._mixins.get(ref)

    def get_datatype(self, name: DataTypeRef) -> Optional[DataType]:
        return self._datatypes.get(name)

    def kinds(self) -> List[Kind]:
        return list(self._kinds.values())

    def mixins(self) -> List[Mixin]:
        return list(self._mixins.values())

    def owner_of(self, ref: CategoryRef) -> Optional[str]:
        """Name of the extension declaring a kind or mixin."""
        return self._owners.get(ref)

    # Kinds

    def kind_ancestry(self, ref: CategoryRef) -> List[CategoryRef]:
        """The kind followed by its parents up to the root."""
        chain: List[CategoryRef] = []
        current: Optional[CategoryRef] = ref
        while current is not None and current not in chain:
            kind = self._kinds.get(current)
            if kind is None:
                break
            chain.append(current)
            current = kind.parent
        return chain

    def is_kind(self, ref: CategoryRef, base: CategoryRef) -> bool:
        """Check whether a kind is the base kind or derives from it."""
        return base in self.kind_ancestry(ref)

    def kind_attributes(self, ref: CategoryRef) -> Dict[str, AttributeDef]:
        """Attributes declared by a kind and its parents."""
        attributes: Dict[str, AttributeDef] = {}
        for kind_ref in reversed(self.kind_ancestry(ref)):
            for attribute in self._kinds[kind_ref].category.attributes:
                attributes[attribute.name] = attribute
        return attributes

    def kind_actions(self, ref: CategoryRef) -> Dict[str, ActionDef]:
        """Actions declared by a kind and its parents, by name."""
        actions: Dict[str, ActionDef] = {}
        for kind_ref in reversed(self.kind_ancestry(ref)):
            for action in self._kinds[kind_ref].actions:
                actions[action.name] = action
        return actions

    # Mixins

    def depends_closure(self, ref: CategoryRef) -> Tuple[CategoryRef, ...]:
        """The mixin and everything it transitively depends on, breadth first."""
        if ref in self._closures:
            return self._closures[ref]
        order: List[CategoryRef] = []
        queue = [ref]
        while queue:
            current = queue.pop(0)
            if current in order:
                continue
            mixin = self._mixins.get(current)
            if mixin is None:
                continue
            order.append(current)
            queue.extend(mixin.depends)
        closure = tuple(order)
        self._closures[ref] = closure
        return closure

    def closure_of(self, refs: Iterable[CategoryRef]) -> Set[CategoryRef]:
        """Union of the depends closures of several mixins."""
        result: Set[CategoryRef] = set()
        for ref in refs:
            result.update(self.depends_closure(ref))
        return result

    def mixin_attributes(self, ref: CategoryRef) -> Dict[str, AttributeDef]:
        """Attributes declared by a mixin and its depends closure."""
        attributes: Dict[str, AttributeDef] = {}
        for mixin_ref in reversed(self.depends_closure(ref)):
            for attribute in self._mixins[mixin_ref].category.attributes:
                attributes[attribute.name] = attribute
        return attributes

    def anchor_kinds(self, ref: CategoryRef) -> Tuple[CategoryRef, ...]:
        """Kinds a mixin may decorate: union of applies over its closure."""
        kinds: Set[CategoryRef] = set()
        for mixin_ref in self.depends_closure(ref):
            kinds.update(self._mixins[mixin_ref].applies)
        return tuple(sorted(kinds))

    def resolve_datatype(self, name: DataTypeRef) -> Optional[DataType]:
        """Datatype resolver for conformance checks."""
        return self._datatypes.get(name)


def _import_closure(extension: OcciExtension, available: ExtensionSet) -> List[OcciExtension]:
    seen: List[str] = []
    pending = list(extension.imports)
    while pending:
        name = pending.pop(0)
        if name in seen:
            continue
        imported = available.get_extension(name)
        if imported is None:
            raise LinkError(
                f"Extension '{extension.name}' imports '{name}', which is not loaded",
                extension=extension.name,
                ref=name,
            )
        seen.append(name)
        pending.extend(imported.imports)
    return [available.get_extension(name) for name in seen]  # type: ignore[misc]


def link_extension(extension: OcciExtension, available: ExtensionSet) -> None:
    """Check that every reference of an extension resolves.

    References resolve within the extension itself or its transitive imports.

    Args:
        extension: Extension to link
        available: Extensions loaded so far

    Raises:
        LinkError: On unresolved references, parentless kinds other than the core
            resource and link, duplicate categories or invalid defaults
        CycleError: On mixin depends or kind parent cycles
    """
    name = extension.name
    if name in available:
        raise LinkError(f"Extension '{name}' is already loaded", extension=name)

    visible = [extension] + _import_closure(extension, available)
    kinds: Dict[CategoryRef, Kind] = {}
    mixins: Dict[CategoryRef, Mixin] = {}
    datatypes: Dict[DataTypeRef, DataType] = dict(PRIMITIVE_DATATYPES)
    for ext in reversed(visible):
        kinds.update({k.id: k for k in ext.kinds})
        mixins.update({m.id: m for m in ext.mixins})
        datatypes.update(ext.datatypes)

    # (scheme, term) uniqueness within this extension and against the loaded set
    known = {
        category.id
        for ext in available.extensions
        for category in ext.categories()
    }
    seen: Set[CategoryRef] = set()
    for category in extension.categories():
        if category.id in seen or category.id in known:
            raise LinkError(
                f"Duplicate category {category.id}", extension=name, ref=category.id
            )
        seen.add(category.id)

    def require_datatype(ref: DataTypeRef, where: str) -> None:
        if ref not in datatypes:
            raise LinkError(
                f"Unresolved datatype '{ref}' in {where}", extension=name, ref=ref
            )

    for dt_name, datatype in extension.datatypes.items():
        if isinstance(datatype, ArrayType):
            require_datatype(datatype.element_type, f"datatype {dt_name}")
        elif isinstance(datatype, RecordType):
            for record_field in datatype.fields:
                require_datatype(record_field.datatype, f"datatype {dt_name}")

    def check_attributes(attributes: Iterable[AttributeDef], where: str) -> None:
        for attribute in attributes:
            require_datatype(attribute.datatype, f"{where}/{attribute.name}")
            if attribute.default is not None and not check_datatype(
                attribute.default, datatypes[attribute.datatype], datatypes.get
            ):
                raise LinkError(
                    f"Default of {where}/{attribute.name} does not conform to "
                    f"'{attribute.datatype}'",
                    extension=name,
                    ref=attribute.name,
                )

    def check_actions(actions: Iterable[ActionDef], where: str) -> None:
        for action in actions:
            check_attributes(action.parameters, f"{where}/{action.name}")

    for kind in extension.kinds:
        if kind.parent is None and kind.id not in ROOT_KINDS:
            raise LinkError(
                f"Kind {kind.id} has no parent; only {RESOURCE_KIND} and {LINK_KIND} are roots",
                extension=name,
                ref=kind.id,
            )
        if kind.parent is not None and kind.parent not in kinds:
            raise LinkError(
                f"Kind {kind.id} has unresolved parent {kind.parent}",
                extension=name,
                ref=kind.parent,
            )
        if kind.parent is not None and kinds[kind.parent].entity_role != kind.entity_role:
            raise LinkError(
                f"Kind {kind.id} is a {kind.entity_role.value} but its parent is not",
                extension=name,
                ref=kind.parent,
            )
        check_attributes(kind.category.attributes, kind.id)
        check_actions(kind.actions, kind.id)

    for mixin in extension.mixins:
        for dep in mixin.depends:
            if dep not in mixins:
                raise LinkError(
                    f"Mixin {mixin.id} depends on unresolved mixin {dep}",
                    extension=name,
                    ref=dep,
                )
        for target in mixin.applies:
            if target not in kinds:
                raise LinkError(
                    f"Mixin {mixin.id} applies to unresolved kind {target}",
                    extension=name,
                    ref=target,
                )
        check_attributes(mixin.category.attributes, mixin.id)
        check_actions(mixin.actions, mixin.id)
        for constraint in mixin.constraints:
            for ref in constraint_refs(constraint.body):
                if ref not in kinds and ref not in mixins:
                    raise LinkError(
                        f"Constraint {constraint.name} of {mixin.id} references "
                        f"unresolved category {ref}",
                        extension=name,
                        ref=ref,
                    )

    _reject_cycles(name, {k.id: [k.parent] if k.parent else [] for k in kinds.values()})
    _reject_cycles(name, {m.id: list(m.depends) for m in mixins.values()})


def constraint_refs(expr: ConstraintExpr) -> List[CategoryRef]:
    """Category references used by a constraint expression."""
    if isinstance(expr, ExistsLink):
        return [expr.link] + ([expr.peer] if expr.peer else [])
    if isinstance(expr, (AllOf, AnyOf)):
        return [ref for item in expr.items for ref in constraint_refs(item)]
    if isinstance(expr, Not):
        return constraint_refs(expr.item)
    return []


def _reject_cycles(extension: str, edges: Dict[CategoryRef, List[CategoryRef]]) -> None:
    graph = nx.DiGraph()
    for node, targets in sorted(edges.items()):
        graph.add_node(node)
        for target in targets:
            graph.add_edge(node, target)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return
    nodes = [edge[0] for edge in cycle] + [cycle[0][0]]
    raise CycleError(extension, nodes)

