"""Builtin TOSCA to OCCI mapping rules for the normative types and known custom types."""

from typing import List

from ...domain.models.mapping import (
    ActionTarget,
    ConstraintTarget,
    DataTypeTarget,
    MappingRule,
    MixinAppliedToKind,
    MixinDependsOn,
    RuleTable,
)
from ...domain.models.occi import ConstraintDef, ExistsLink, LinkDirection
from ...domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENT_KIND,
    COMPONENTLINK_KIND,
    COMPUTE_KIND,
    DEFAULT_TOSCA_SCHEME,
    NETWORK_KIND,
    PLACEMENTLINK_KIND,
    RESOURCE_KIND,
    STORAGE_KIND,
    STORAGELINK_KIND,
)


SOFTWARE_COMPONENT = "tosca.nodes.SoftwareComponent"
HOSTED_ON = "tosca.relationships.HostedOn"
CONNECTS_TO = "tosca.relationships.ConnectsTo"
DEPENDS_ON = "tosca.relationships.DependsOn"
LIFECYCLE_STANDARD = "tosca.interfaces.node.lifecycle.Standard"
RELATIONSHIP_CONFIGURE = "tosca.interfaces.relationship.Configure"

SOURCE_MUST_BE_SOFTWARE_COMPONENT = "SourceMustBeSoftwareComponent"

PLATFORM_LIFECYCLE = {
    "create": "deploy",
    "configure": "configure",
    "start": "start",
    "stop": "stop",
    "delete": "undeploy",
}

LIFECYCLE_ACTIONS = {
    COMPONENT_KIND: PLATFORM_LIFECYCLE,
    APPLICATION_KIND: PLATFORM_LIFECYCLE,
    COMPUTE_KIND: {"start": "start", "stop": "stop"},
    STORAGE_KIND: {"start": "online", "stop": "offline"},
    NETWORK_KIND: {"start": "up", "stop": "down"},
}


def mangle_name(tosca_name: str) -> str:
    """Turn a dotted TOSCA type name into a category term."""
    return tosca_name.replace(".", "_")


def _applied(concept: str, kind: str, notes: str = "") -> MappingRule:
    return MappingRule(concept, MixinAppliedToKind(kind), notes)


def _depends(concept: str, *type_names: str, notes: str = "") -> MappingRule:
    return MappingRule(concept, MixinDependsOn(tuple(type_names)), notes)


def builtin_rules(tosca_scheme: str = DEFAULT_TOSCA_SCHEME) -> List[MappingRule]:
    """Rows of the normative and custom type mapping tables.

    Args:
        tosca_scheme: Scheme of the generated mixins, used by fixed constraints

    Returns:
        Rules in table order
    """
    software_component = f"{tosca_scheme}{mangle_name(SOFTWARE_COMPONENT)}"
    rules = [
        # Node types
        _applied("tosca.nodes.BlockStorage", STORAGE_KIND),
        _applied("tosca.nodes.ObjectStorage", STORAGE_KIND),
        _applied("tosca.nodes.Compute", COMPUTE_KIND),
        # No requirement yields this one; a VM must host at least one software component.
        MappingRule(
            "tosca.nodes.Compute",
            ConstraintTarget(
                ConstraintDef(
                    SOURCE_MUST_BE_SOFTWARE_COMPONENT,
                    ExistsLink(LinkDirection.IN, PLACEMENTLINK_KIND, software_component),
                    "A compute must host at least one software component",
                )
            ),
        ),
        _applied(SOFTWARE_COMPONENT, COMPONENT_KIND),
        _depends("tosca.nodes.WebServer", SOFTWARE_COMPONENT),
        _applied("tosca.nodes.WebApplication", COMPONENT_KIND),
        _depends("tosca.nodes.DBMS", SOFTWARE_COMPONENT, "tosca.nodes.Database"),
        _applied("tosca.nodes.Database", COMPONENT_KIND),
        _applied("tosca.nodes.LoadBalancer", RESOURCE_KIND, "applied to the generic resource kind"),
        _depends("tosca.nodes.Container.Runtime", SOFTWARE_COMPONENT),
        _applied("tosca.nodes.Container.Application", COMPONENT_KIND),
        # Relationship types
        _applied("tosca.relationships.AttachesTo", STORAGELINK_KIND),
        _applied(CONNECTS_TO, COMPONENTLINK_KIND),
        _applied(DEPENDS_ON, COMPONENTLINK_KIND),
        _applied(HOSTED_ON, COMPONENTLINK_KIND),
        _depends("tosca.relationships.RoutesTo", CONNECTS_TO),
        # Datatypes
        MappingRule("tosca.datatypes.Credential", DataTypeTarget("CredentialRecordType")),
        MappingRule("tosca.datatypes.network.NetworkInfo", DataTypeTarget("NetworkInfoRecordType")),
        MappingRule("tosca.datatypes.network.PortDef", DataTypeTarget("PortDefRecordType")),
        MappingRule("tosca.datatypes.network.PortInfo", DataTypeTarget("PortInfoRecordType")),
        MappingRule("tosca.datatypes.network.PortSpec", DataTypeTarget("short")),
        # Interfaces
        _applied(LIFECYCLE_STANDARD, RESOURCE_KIND),
        MappingRule(LIFECYCLE_STANDARD, ActionTarget(LIFECYCLE_ACTIONS), "operations renamed per anchor kind"),
        _applied(RELATIONSHIP_CONFIGURE, COMPONENTLINK_KIND),
        # Custom types
        _depends("tosca.nodes.Apache", "tosca.nodes.WebServer"),
        _depends("tosca.nodes.SoftwareComponent.Collectd", SOFTWARE_COMPONENT),
        _depends("tosca.nodes.HACompute", "tosca.nodes.Compute"),
        _depends("tosca.nodes.Database.Mysql", "tosca.nodes.Database"),
        _depends("tosca.nodes.DBMS.MySQL", "tosca.nodes.DBMS"),
        _depends("tosca.nodes.Container.Application.Docker", "tosca.nodes.Container.Application"),
        _depends("tosca.nodes.SoftwareComponent.Elasticsearch", SOFTWARE_COMPONENT),
        _depends("tosca.nodes.SoftwareComponent.Logstash", SOFTWARE_COMPONENT),
        _depends("tosca.nodes.SoftwareComponent.Kibana", SOFTWARE_COMPONENT),
        _depends("tosca.nodes.AbstractMysql", "tosca.nodes.Database"),
        _applied("tosca.nodes.network.Network", NETWORK_KIND),
        _applied("tosca.nodes.network.Port", NETWORK_KIND),
        _depends("tosca.nodes.Nodejs", "tosca.nodes.WebServer"),
        _depends("tosca.nodes.WebApplication.PayPalPizzaStore", "tosca.nodes.WebApplication"),
        _depends("tosca.nodes.PHP", SOFTWARE_COMPONENT),
        _depends("tosca.nodes.SoftwareComponent.Rsyslog", SOFTWARE_COMPONENT),
        _depends("tosca.nodes.Wordpress", "tosca.nodes.WebApplication"),
        _depends("tosca.nodes.Nodecellar", "tosca.nodes.WebApplication"),
        _depends("tosca.nodes.MongoD", "tosca.nodes.DBMS"),
    ]
    return rules


def builtin_rule_table(tosca_scheme: str = DEFAULT_TOSCA_SCHEME) -> RuleTable:
    """Rule table seeded with the builtin rules."""
    return RuleTable(tuple(builtin_rules(tosca_scheme)))
