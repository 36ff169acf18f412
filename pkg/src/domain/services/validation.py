"""Configuration validation against an extension set."""

import re
from collections import defaultdict
from typing import Dict, List, Optional

from ..models.configuration import (
    AnyEntity,
    Link,
    OcciConfiguration,
    ValidationReport,
    Violation,
)
from ..models.occi import (
    AllOf,
    AnyOf,
    AttrMatches,
    AttributeDef,
    ConstraintExpr,
    EntityRole,
    ExistsLink,
    LinkDirection,
    Not,
)
from .datatypes import check_datatype
from .extension_set import ExtensionSet


class _ConstraintContext:
    """Link indexes shared by constraint evaluation."""

    def __init__(self, cfg: OcciConfiguration, extensions: ExtensionSet):
        self.extensions = extensions
        self.entities: Dict[str, AnyEntity] = {}
        for entity in cfg.entities():
            self.entities.setdefault(entity.id, entity)
        self.outgoing: Dict[str, List[Link]] = defaultdict(list)
        self.incoming: Dict[str, List[Link]] = defaultdict(list)
        for link in cfg.links:
            self.outgoing[link.source].append(link)
            self.incoming[link.target].append(link)

    def link_matches(self, link: Link, ref: str) -> bool:
        if self.extensions.get_kind(ref) is not None:
            return self.extensions.is_kind(link.kind, ref)
        return ref in self.extensions.closure_of(link.mixins)

    def peer_matches(self, peer_id: str, ref: Optional[str]) -> bool:
        if ref is None:
            return peer_id in self.entities
        peer = self.entities.get(peer_id)
        if peer is None:
            return False
        if self.extensions.get_kind(ref) is not None:
            return self.extensions.is_kind(peer.kind, ref)
        return ref in self.extensions.closure_of(peer.mixins)


def evaluate_constraint(expr: ConstraintExpr, entity: AnyEntity, ctx: _ConstraintContext) -> bool:
    """Evaluate a constraint expression for one entity."""
    if isinstance(expr, ExistsLink):
        if expr.direction == LinkDirection.OUT:
            candidates = [(link, link.target) for link in ctx.outgoing.get(entity.id, [])]
        else:
            candidates = [(link, link.source) for link in ctx.incoming.get(entity.id, [])]
        return any(
            ctx.link_matches(link, expr.link) and ctx.peer_matches(peer, expr.peer)
            for link, peer in candidates
        )
    if isinstance(expr, AttrMatches):
        value = entity.flat_attributes().get(expr.attribute)
        return value is not None and re.fullmatch(expr.regex, str(value)) is not None
    if isinstance(expr, AllOf):
        return all(evaluate_constraint(item, entity, ctx) for item in expr.items)
    if isinstance(expr, AnyOf):
        return any(evaluate_constraint(item, entity, ctx) for item in expr.items)
    if isinstance(expr, Not):
        return not evaluate_constraint(expr.item, entity, ctx)
    raise TypeError(f"Unknown constraint expression: {expr!r}")


def validate_configuration(cfg: OcciConfiguration, extensions: ExtensionSet) -> ValidationReport:
    """Validate a configuration against an extension set.

    Problems are collected as report entries; nothing is raised.

    Args:
        cfg: Configuration to validate
        extensions: Linked extensions the configuration uses

    Returns:
        Report whose violations are empty iff the configuration is valid
    """
    violations: List[Violation] = []

    for name in cfg.use:
        if name not in extensions:
            violations.append(Violation(None, "UnknownExtension", f"Extension '{name}' is not loaded"))

    seen = set()
    for entity in cfg.entities():
        if entity.id in seen:
            violations.append(Violation(entity.id, "DuplicateId", f"Id '{entity.id}' is used twice"))
        seen.add(entity.id)

    resource_ids = {resource.id for resource in cfg.resources}
    for entity in cfg.entities():
        violations.extend(check_entity(entity, extensions))
        if isinstance(entity, Link):
            for end, ref in (("source", entity.source), ("target", entity.target)):
                if ref not in resource_ids:
                    violations.append(
                        Violation(entity.id, "DanglingEndpoint", f"Link {end} '{ref}' is not a resource")
                    )

    ctx = _ConstraintContext(cfg, extensions)
    for entity in cfg.entities():
        for mixin_ref in sorted(extensions.closure_of(entity.mixins)):
            mixin = extensions.get_mixin(mixin_ref)
            if mixin is None:
                continue
            for constraint in mixin.constraints:
                if not evaluate_constraint(constraint.body, entity, ctx):
                    violations.append(
                        Violation(
                            entity.id,
                            constraint.name,
                            constraint.description or f"Constraint {constraint.name} of {mixin.term} failed",
                        )
                    )

    return ValidationReport(tuple(violations))


def _check_values(
    entity_id: str,
    values: Dict,
    declared: Dict[str, AttributeDef],
    extensions: ExtensionSet,
    owner: str,
) -> List[Violation]:
    violations: List[Violation] = []
    for name, value in values.items():
        attribute = declared.get(name)
        if attribute is None:
            violations.append(
                Violation(entity_id, "UndeclaredAttribute", f"{owner} declares no attribute '{name}'")
            )
            continue
        if value is None:
            continue
        datatype = extensions.resolve_datatype(attribute.datatype)
        if datatype is None or not check_datatype(value, datatype, extensions.resolve_datatype):
            violations.append(
                Violation(
                    entity_id,
                    "InvalidAttributeValue",
                    f"Value {value!r} of '{name}' does not conform to '{attribute.datatype}'",
                )
            )
    for name, attribute in declared.items():
        if attribute.required and attribute.default is None and values.get(name) is None:
            violations.append(
                Violation(entity_id, "MissingRequiredAttribute", f"{owner} requires '{name}'")
            )
    return violations


def check_entity(entity: AnyEntity, extensions: ExtensionSet) -> List[Violation]:
    violations: List[Violation] = []
    kind = extensions.get_kind(entity.kind)
    if kind is None:
        violations.append(Violation(entity.id, "UnknownKind", f"Kind {entity.kind} is not loaded"))
    else:
        expected = EntityRole.LINK if isinstance(entity, Link) else EntityRole.RESOURCE
        if kind.entity_role != expected:
            violations.append(
                Violation(
                    entity.id,
                    "RoleMismatch",
                    f"Kind {kind.term} is a {kind.entity_role.value} kind, entity is a {expected.value}",
                )
            )
        violations.extend(
            _check_values(
                entity.id, entity.attributes, extensions.kind_attributes(entity.kind), extensions, kind.term
            )
        )

    for mixin_base in entity.mixin_bases:
        mixin = extensions.get_mixin(mixin_base.mixin)
        if mixin is None:
            violations.append(
                Violation(entity.id, "UnknownMixin", f"Mixin {mixin_base.mixin} is not loaded")
            )
            continue
        anchors = extensions.anchor_kinds(mixin.id)
        if kind is not None and anchors and not any(
            extensions.is_kind(entity.kind, anchor) for anchor in anchors
        ):
            violations.append(
                Violation(
                    entity.id,
                    "MixinNotApplicable",
                    f"Mixin {mixin.term} does not apply to kind {kind.term}",
                )
            )
        violations.extend(
            _check_values(
                entity.id,
                mixin_base.attributes,
                extensions.mixin_attributes(mixin.id),
                extensions,
                mixin.term,
            )
        )
    return violations
