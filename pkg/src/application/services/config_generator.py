"""Topology to OCCI configuration generation."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ...domain.models.configuration import Link, MixinBase, OcciConfiguration, Resource
from ...domain.models.mapping import TemplateBinding
from ...domain.models.occi import AttributeDef, CategoryRef, DataType, Mixin, OcciExtension
from ...domain.models.tosca import RequirementBinding, ToscaNodeTemplate, ToscaTopology, ToscaTypeRegistry
from ...domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENT_KIND,
    COMPONENTLINK_KIND,
    COMPUTE_KIND,
    PLACEMENTLINK_KIND,
    STORAGELINK_KIND,
)
from ...domain.services.datatypes import PRIMITIVE_DATATYPES, check_datatype
from ...shared.exceptions import (
    AttributeValidationError,
    DanglingBindingError,
    DuplicateTemplateError,
    UnmappedTemplateError,
)
from .mapping_rules import DEPENDS_ON, HOSTED_ON, mangle_name
from .tosca_parser import normalize_value


logger = logging.getLogger(__name__)

ID_PREFIX = "urn:tosca"
APPLICATION_SUFFIX = "app"

TITLE_PREFIXES = {
    COMPONENTLINK_KIND: "c",
    PLACEMENTLINK_KIND: "p",
    STORAGELINK_KIND: "s",
}


class _ExtensionView:
    """Mixin closures, anchors and datatypes of one generated extension."""

    def __init__(self, extension: OcciExtension):
        self.extension = extension
        self.mixins: Dict[CategoryRef, Mixin] = {m.id: m for m in extension.mixins}

    def closure(self, ref: CategoryRef) -> List[CategoryRef]:
        order: List[CategoryRef] = []
        queue = [ref]
        while queue:
            current = queue.pop(0)
            if current in order or current not in self.mixins:
                continue
            order.append(current)
            queue.extend(self.mixins[current].depends)
        return order

    def anchors(self, ref: CategoryRef) -> List[CategoryRef]:
        return sorted({kind for m in self.closure(ref) for kind in self.mixins[m].applies})

    def attributes(self, ref: CategoryRef) -> Dict[str, AttributeDef]:
        attributes: Dict[str, AttributeDef] = {}
        for mixin_ref in reversed(self.closure(ref)):
            for attribute in self.mixins[mixin_ref].category.attributes:
                attributes[attribute.name] = attribute
        return attributes

    def resolve_datatype(self, name: str) -> Optional[DataType]:
        return self.extension.datatypes.get(name) or PRIMITIVE_DATATYPES.get(name)


@dataclass
class _LinkCounters:
    """Link id and per-kind title counters."""
    ids: int = 0
    titles: Dict[str, int] = field(default_factory=dict)

    def next_id(self, topology: str) -> str:
        self.ids += 1
        return f"{ID_PREFIX}:{topology}:link:{self.ids}"

    def next_title(self, kind: CategoryRef) -> str:
        prefix = TITLE_PREFIXES.get(kind, "l")
        self.titles[prefix] = self.titles.get(prefix, 0) + 1
        return f"{prefix}{self.titles[prefix]}"


class ConfigGenerator:
    """Turns TOSCA topologies into OCCI configurations over the generated extension."""

    def assign_ids(self, topo: ToscaTopology) -> Dict[str, str]:
        """Deterministic entity ids for every node and relationship template.

        Args:
            topo: Parsed topology

        Returns:
            Template name -> `urn:tosca:<topology>:<template>`

        Raises:
            DuplicateTemplateError: If two templates share a name or one uses a reserved name
        """
        ids: Dict[str, str] = {}
        for name in topo.template_names:
            if name in ids or name == APPLICATION_SUFFIX:
                raise DuplicateTemplateError(name)
            ids[name] = f"{ID_PREFIX}:{topo.name}:{name}"
        return ids

    @staticmethod
    def application_id(topo: ToscaTopology) -> str:
        return f"{ID_PREFIX}:{topo.name}:{APPLICATION_SUFFIX}"

    def generate_configuration(
        self, topo: ToscaTopology, ext: OcciExtension, registry: ToscaTypeRegistry
    ) -> OcciConfiguration:
        """Generate the configuration of a topology.

        Args:
            topo: Parsed topology
            ext: Generated TOSCA extension
            registry: Registry the extension was generated from

        Returns:
            Configuration using the extension and its imports

        Raises:
            UnmappedTemplateError: If a template type has no mixin or no single anchor kind
            AttributeValidationError: If a value is undeclared or fails its datatype
            DanglingBindingError: If a relationship template is never bound
        """
        cfg, _ = self.generate_with_bindings(topo, ext, registry)
        return cfg

    def generate_with_bindings(
        self, topo: ToscaTopology, ext: OcciExtension, registry: ToscaTypeRegistry
    ) -> Tuple[OcciConfiguration, List[TemplateBinding]]:
        """Generate the configuration together with the template to entity bindings."""
        ids = self.assign_ids(topo)
        view = _ExtensionView(ext)
        bindings: List[TemplateBinding] = []
        kinds: Dict[str, CategoryRef] = {}

        resources: List[Resource] = [
            Resource(id=self.application_id(topo), kind=APPLICATION_KIND, title=topo.name)
        ]
        for template in topo.node_templates:
            mixin, kind = self._resolve(view, registry, template.name, template.type_name)
            values = self._normalized(registry, template.type_name, template.property_values)
            capability_types = registry.effective_capabilities(template.type_name)
            for capability, properties in template.capability_property_values.items():
                for name, value in self._normalized(registry, capability_types.get(capability), properties).items():
                    values[f"{capability}.{name}"] = value
            resources.append(
                Resource(
                    id=ids[template.name],
                    kind=kind,
                    title=template.name,
                    mixin_bases=(MixinBase(mixin.id, self._check_values(view, template.name, mixin, values)),),
                )
            )
            kinds[template.name] = kind
            bindings.append(TemplateBinding(template.name, ids[template.name], mixin.term, kind))

        counters = _LinkCounters()
        links: List[Link] = []
        components = [t for t in topo.node_templates if kinds[t.name] == COMPONENT_KIND]

        for template in components:
            links.append(
                Link(
                    id=counters.next_id(topo.name),
                    kind=COMPONENTLINK_KIND,
                    title=counters.next_title(COMPONENTLINK_KIND),
                    source=self.application_id(topo),
                    target=ids[template.name],
                )
            )

        hosts: Dict[str, str] = {}
        hosting_templates: Dict[str, Tuple[str, str]] = {}
        bound: set = set()
        for template in topo.node_templates:
            requirements = registry.effective_requirements(template.type_name)
            for binding in template.requirement_bindings:
                requirement = requirements.get(binding.requirement)
                if requirement is None:
                    logger.warning(
                        f"Template {template.name} binds requirement '{binding.requirement}' "
                        f"not declared by {template.type_name}"
                    )
                relationship = registry.canonical(
                    binding.relationship
                    or (requirement.relationship if requirement is not None else None)
                    or DEPENDS_ON
                )
                if binding.relationship_template is not None:
                    bound.add(binding.relationship_template)
                hosted = relationship in registry and registry.is_a(relationship, HOSTED_ON)
                if hosted:
                    hosts.setdefault(template.name, binding.target)
                    if kinds[binding.target] == COMPUTE_KIND:
                        if binding.relationship_template is not None and hosts[template.name] == binding.target:
                            hosting_templates[template.name] = (
                                binding.relationship_template, mangle_name(relationship)
                            )
                        elif binding.relationship_template is not None:
                            logger.warning(
                                f"Relationship template {binding.relationship_template} is not the placement "
                                f"of {template.name}; no entity carries it"
                            )
                        continue
                links.append(
                    self._requirement_link(view, registry, topo, ids, counters, template, binding, relationship)
                )
                if binding.relationship_template is not None:
                    bindings.append(
                        TemplateBinding(
                            binding.relationship_template,
                            links[-1].id,
                            mangle_name(relationship),
                            links[-1].kind,
                        )
                    )

        for relationship_template in topo.relationship_templates:
            if relationship_template.name not in bound:
                raise DanglingBindingError(
                    f"Relationship template '{relationship_template.name}' is not bound by any requirement",
                    template=relationship_template.name,
                )

        for template in components:
            compute = self._placement(template.name, hosts, kinds)
            if compute is None:
                logger.debug(f"Component {template.name} is not hosted on a compute")
                continue
            relationship_template, mixin_term = hosting_templates.pop(template.name, (None, None))
            links.append(
                Link(
                    id=ids[relationship_template] if relationship_template else counters.next_id(topo.name),
                    kind=PLACEMENTLINK_KIND,
                    title=counters.next_title(PLACEMENTLINK_KIND),
                    source=ids[template.name],
                    target=ids[compute],
                )
            )
            if relationship_template is not None:
                bindings.append(
                    TemplateBinding(relationship_template, links[-1].id, mixin_term, PLACEMENTLINK_KIND)
                )

        for template_name, (relationship_template, _) in sorted(hosting_templates.items()):
            logger.warning(
                f"Relationship template {relationship_template} hosts {template_name} on a compute "
                f"but no placement link carries it"
            )

        if topo.groups:
            logger.warning(f"{len(topo.groups)} groups of topology {topo.name} are not expanded")

        cfg = OcciConfiguration(
            use=tuple(ext.imports) + (ext.name,),
            resources=tuple(resources),
            links=tuple(links),
        )
        logger.info(
            f"Generated configuration for {topo.name}: {len(cfg.resources)} resources, {len(cfg.links)} links"
        )
        return cfg, bindings

    def _resolve(
        self, view: _ExtensionView, registry: ToscaTypeRegistry, template: str, type_name: str
    ) -> Tuple[Mixin, CategoryRef]:
        if type_name not in registry:
            raise UnmappedTemplateError(template, type_name)
        ref = f"{view.extension.scheme}{mangle_name(registry.canonical(type_name))}"
        mixin = view.mixins.get(ref)
        anchors = view.anchors(ref) if mixin is not None else []
        if mixin is None or len(anchors) != 1:
            raise UnmappedTemplateError(template, type_name)
        return mixin, anchors[0]

    @staticmethod
    def _normalized(
        registry: ToscaTypeRegistry, type_name: Optional[str], values: Dict[str, Any]
    ) -> Dict[str, Any]:
        """Scalar-unit values converted by their declared property type."""
        if type_name is None or type_name not in registry:
            return dict(values)
        declared = registry.effective_properties(type_name)
        return {name: normalize_value(value, declared.get(name)) for name, value in values.items()}

    def _check_values(
        self, view: _ExtensionView, template: str, mixin: Mixin, values: Dict[str, Any]
    ) -> Dict[str, Any]:
        declared = view.attributes(mixin.id)
        checked: Dict[str, Any] = {}
        for name, value in values.items():
            attribute = declared.get(name)
            if attribute is None:
                raise AttributeValidationError(template, name, f"not declared by {mixin.term}")
            if value is None:
                continue
            datatype = view.resolve_datatype(attribute.datatype)
            if datatype is None or not check_datatype(value, datatype, view.resolve_datatype):
                raise AttributeValidationError(
                    template, name, f"value {value!r} does not conform to '{attribute.datatype}'"
                )
            checked[name] = value
        return checked

    def _requirement_link(
        self,
        view: _ExtensionView,
        registry: ToscaTypeRegistry,
        topo: ToscaTopology,
        ids: Dict[str, str],
        counters: _LinkCounters,
        template: ToscaNodeTemplate,
        binding: RequirementBinding,
        relationship: str,
    ) -> Link:
        owner = binding.relationship_template or template.name
        mixin, kind = self._resolve(view, registry, owner, relationship)
        values: Dict[str, Any] = {}
        if binding.relationship_template is not None:
            relationship_template = topo.relationship_template(binding.relationship_template)
            if relationship_template is None:
                raise DanglingBindingError(
                    f"Relationship template '{binding.relationship_template}' does not exist",
                    template=template.name,
                )
            link_id = ids[relationship_template.name]
            values = self._check_values(
                view,
                relationship_template.name,
                mixin,
                self._normalized(registry, relationship_template.type_name, relationship_template.property_values),
            )
        else:
            link_id = counters.next_id(topo.name)
        return Link(
            id=link_id,
            kind=kind,
            title=counters.next_title(kind),
            source=ids[template.name],
            target=ids[binding.target],
            mixin_bases=(MixinBase(mixin.id, values),),
        )

    @staticmethod
    def _placement(template: str, hosts: Dict[str, str], kinds: Dict[str, CategoryRef]) -> Optional[str]:
        """First compute along the HostedOn chain of a template."""
        seen = {template}
        current = hosts.get(template)
        while current is not None and current not in seen:
            if kinds.get(current) == COMPUTE_KIND:
                return current
            seen.add(current)
            current = hosts.get(current)
        return None
