"""OCCI instance model: configurations of resources and links."""

from dataclasses import dataclass, field, replace
from typing import AbstractSet, Any, Dict, Iterator, List, Optional, Tuple, Union

from .occi import CategoryRef


@dataclass(frozen=True)
class MixinBase:
    """Mixin applied to an entity, with the attribute values it instantiates."""
    mixin: CategoryRef
    attributes: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, kw_only=True)
class Entity:
    """Common fields of resources and links."""
    id: str
    kind: CategoryRef
    title: Optional[str] = None
    mixin_bases: Tuple[MixinBase, ...] = ()
    attributes: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("Entity id cannot be empty")

    @property
    def mixins(self) -> Tuple[CategoryRef, ...]:
        """References of all applied mixins."""
        return tuple(mb.mixin for mb in self.mixin_bases)

    @property
    def is_link(self) -> bool:
        return False

    def mixin_base(self, mixin: CategoryRef) -> Optional[MixinBase]:
        """Get the mixin base for a mixin reference."""
        for mb in self.mixin_bases:
            if mb.mixin == mixin:
                return mb
        return None

    def has_mixin(self, mixin: CategoryRef) -> bool:
        return self.mixin_base(mixin) is not None

    def flat_attributes(self) -> Dict[str, Any]:
        """Entity attributes merged with every mixin base's attributes."""
        merged: Dict[str, Any] = dict(self.attributes)
        for mb in self.mixin_bases:
            merged.update(mb.attributes)
        return merged

    def with_mixin_base(self, mixin_base: MixinBase) -> "Entity":
        """Copy with a mixin base added or replaced."""
        bases = [mb for mb in self.mixin_bases if mb.mixin != mixin_base.mixin]
        if len(bases) == len(self.mixin_bases):
            return replace(self, mixin_bases=self.mixin_bases + (mixin_base,))
        return replace(
            self,
            mixin_bases=tuple(
                mixin_base if mb.mixin == mixin_base.mixin else mb
                for mb in self.mixin_bases
            ),
        )


@dataclass(frozen=True, kw_only=True)
class Resource(Entity):
    """Cloud resource."""


@dataclass(frozen=True, kw_only=True)
class Link(Entity):
    """Directed link between two resources."""
    source: str
    target: str

    @property
    def is_link(self) -> bool:
        return True


AnyEntity = Union[Resource, Link]


@dataclass(frozen=True)
class OcciConfiguration:
    """A running or desired system: resources and links over used extensions."""
    use: Tuple[str, ...] = ()
    resources: Tuple[Resource, ...] = ()
    links: Tuple[Link, ...] = ()

    def entities(self) -> Iterator[AnyEntity]:
        """Iterate resources first, then links."""
        yield from self.resources
        yield from self.links

    def entity(self, entity_id: str) -> Optional[AnyEntity]:
        for entity in self.entities():
            if entity.id == entity_id:
                return entity
        return None

    def resource(self, entity_id: str) -> Optional[Resource]:
        for resource in self.resources:
            if resource.id == entity_id:
                return resource
        return None

    @property
    def ids(self) -> List[str]:
        return [entity.id for entity in self.entities()]

    def resources_of_kind(self, kind: CategoryRef) -> List[Resource]:
        return [r for r in self.resources if r.kind == kind]

    def links_of(self, resource_id: str) -> List[Link]:
        """Links having the resource as source or target."""
        return [
            link for link in self.links
            if link.source == resource_id or link.target == resource_id
        ]

    def without(self, entity_ids: AbstractSet[str]) -> "OcciConfiguration":
        """Copy without the given entities."""
        return OcciConfiguration(
            use=self.use,
            resources=tuple(r for r in self.resources if r.id not in entity_ids),
            links=tuple(link for link in self.links if link.id not in entity_ids),
        )

    @property
    def is_empty(self) -> bool:
        return not self.resources and not self.links


@dataclass(frozen=True)
class Violation:
    """One problem found while validating a configuration."""
    entity_id: Optional[str]
    name: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating a configuration."""
    violations: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def names(self) -> List[str]:
        return [v.name for v in self.violations]

    def for_entity(self, entity_id: str) -> List[Violation]:
        return [v for v in self.violations if v.entity_id == entity_id]

    def __len__(self) -> int:
        return len(self.violations)


def entity_to_dict(entity: AnyEntity) -> Dict[str, Any]:
    """Plain JSON shape of an entity, as carried by plan payloads and runtime requests."""
    data: Dict[str, Any] = {
        "id": entity.id,
        "kind": entity.kind,
        "title": entity.title,
        "mixins": [{"mixin": mb.mixin, "attributes": dict(mb.attributes)} for mb in entity.mixin_bases],
        "attributes": dict(entity.attributes),
    }
    if isinstance(entity, Link):
        data["source"] = entity.source
        data["target"] = entity.target
    return data


def entity_from_dict(data: Dict[str, Any], entity_id: Optional[str] = None) -> AnyEntity:
    """Rebuild an entity from its plain JSON shape.

    Raises:
        ValueError: If the kind is missing or a link lacks an endpoint
    """
    entity_id = entity_id or data.get("id")
    if not data.get("kind"):
        raise ValueError(f"Entity {entity_id} has no kind")
    bases = tuple(
        MixinBase(item["mixin"], dict(item.get("attributes") or {})) if isinstance(item, dict) else MixinBase(item)
        for item in data.get("mixins") or ()
    )
    common = dict(
        id=entity_id or "",
        kind=data["kind"],
        title=data.get("title"),
        mixin_bases=bases,
        attributes=dict(data.get("attributes") or {}),
    )
    if data.get("source") is not None or data.get("target") is not None:
        if not data.get("source") or not data.get("target"):
            raise ValueError(f"Link {entity_id} needs both source and target")
        return Link(source=data["source"], target=data["target"], **common)
    return Resource(**common)
