"""Well-known schemes, category references and attribute names."""

CORE_SCHEME = "http://schemas.ogf.org/occi/core#"
INFRASTRUCTURE_SCHEME = "http://schemas.ogf.org/occi/infrastructure#"
PLATFORM_SCHEME = "http://schemas.modmacao.org/occi/platform#"
SLA_SCHEME = "http://schemas.ogf.org/occi/sla#"
PSM_SCHEME = "http://occiware.org/psm#"
DEFAULT_TOSCA_SCHEME = "http://occiware.org/tosca#"

# Core
RESOURCE_KIND = f"{CORE_SCHEME}resource"
LINK_KIND = f"{CORE_SCHEME}link"

# Infrastructure
COMPUTE_KIND = f"{INFRASTRUCTURE_SCHEME}compute"
NETWORK_KIND = f"{INFRASTRUCTURE_SCHEME}network"
STORAGE_KIND = f"{INFRASTRUCTURE_SCHEME}storage"
STORAGELINK_KIND = f"{INFRASTRUCTURE_SCHEME}storagelink"
NETWORKINTERFACE_KIND = f"{INFRASTRUCTURE_SCHEME}networkinterface"
IPNETWORK_MIXIN = f"{INFRASTRUCTURE_SCHEME}ipnetwork"

# Platform (MoDMaCAO)
APPLICATION_KIND = f"{PLATFORM_SCHEME}application"
COMPONENT_KIND = f"{PLATFORM_SCHEME}component"
COMPONENTLINK_KIND = f"{PLATFORM_SCHEME}componentlink"
PLACEMENTLINK_KIND = f"{PLATFORM_SCHEME}placementlink"

# PSM
MANAGEMENT_NETWORK_MIXIN = f"{PSM_SCHEME}management_network"
RUNTIME_ID_MIXIN = f"{PSM_SCHEME}runtime_id"
PROVIDER_COMPUTE_MIXIN = f"{PSM_SCHEME}provider_compute"

# Attributes
PROVIDER_ID_ATTRIBUTE = "providerId"
NETWORK_ADDRESS_ATTRIBUTE = "occi.network.address"
IMAGE_ATTRIBUTE = "psm.image"
FLAVOR_ATTRIBUTE = "psm.flavor"
SSH_KEY_ATTRIBUTE = "psm.ssh_key"
USER_DATA_ATTRIBUTE = "psm.user_data"

STATE_ATTRIBUTES = {
    COMPUTE_KIND: "occi.compute.state",
    STORAGE_KIND: "occi.storage.state",
    NETWORK_KIND: "occi.network.state",
    APPLICATION_KIND: "occi.app.state",
    COMPONENT_KIND: "occi.component.state",
}

VOLATILE_ATTRIBUTES = frozenset(STATE_ATTRIBUTES.values()) | {PROVIDER_ID_ATTRIBUTE}


def is_volatile_attribute(name: str) -> bool:
    """Check whether an attribute is maintained by the runtime, not the model."""
    return name in VOLATILE_ATTRIBUTES
