"""PIM to PSM transformation: management network, runtime ids and provider defaults."""

import logging
from typing import Any, Dict, List

from ...domain.models.configuration import AnyEntity, Link, MixinBase, OcciConfiguration, Resource
from ...domain.models.psm import PsmProfile
from ...domain.models.vocabulary import (
    COMPUTE_KIND,
    FLAVOR_ATTRIBUTE,
    IMAGE_ATTRIBUTE,
    INFRASTRUCTURE_SCHEME,
    IPNETWORK_MIXIN,
    MANAGEMENT_NETWORK_MIXIN,
    NETWORK_ADDRESS_ATTRIBUTE,
    NETWORK_KIND,
    NETWORKINTERFACE_KIND,
    PROVIDER_COMPUTE_MIXIN,
    PROVIDER_ID_ATTRIBUTE,
    RUNTIME_ID_MIXIN,
    SSH_KEY_ATTRIBUTE,
    USER_DATA_ATTRIBUTE,
)


logger = logging.getLogger(__name__)

PSM_EXTENSION = "psm"
MANAGEMENT_TITLE = "management"
NIC_SUFFIX = ":mgmt-nic"


def is_infrastructural(entity: AnyEntity) -> bool:
    """Resources whose kind comes from the infrastructure extension."""
    return not entity.is_link and entity.kind.startswith(INFRASTRUCTURE_SCHEME)


class PsmTransformer:
    """Enriches a platform-independent configuration with provider specifics."""

    def management_network_id(self, profile: PsmProfile) -> str:
        return f"urn:psm:{profile.provider_name}:management"

    def transform(self, cfg: OcciConfiguration, profile: PsmProfile) -> OcciConfiguration:
        """Produce the platform-specific configuration.

        Adds a management network, connects every compute to it, tags every
        infrastructural resource with a runtime id mixin and applies the
        profile defaults to computes. Values already modeled are kept, and an
        existing management network (found by its mixin) is reused, so the
        transformation is idempotent.

        Args:
            cfg: Platform-independent configuration
            profile: Provider profile

        Returns:
            New configuration; the input is not modified
        """
        resources: List[Resource] = list(cfg.resources)
        links: List[Link] = list(cfg.links)

        network = next((r for r in resources if r.has_mixin(MANAGEMENT_NETWORK_MIXIN)), None)
        if network is None:
            network = Resource(
                id=self.management_network_id(profile),
                kind=NETWORK_KIND,
                title=MANAGEMENT_TITLE,
                mixin_bases=(
                    MixinBase(IPNETWORK_MIXIN, {NETWORK_ADDRESS_ATTRIBUTE: profile.management_cidr}),
                    MixinBase(MANAGEMENT_NETWORK_MIXIN),
                ),
            )
            resources.append(network)
            logger.info(f"Added management network {network.id} ({profile.management_cidr})")

        existing_ids = {entity.id for entity in cfg.entities()}
        for resource in list(resources):
            if resource.kind != COMPUTE_KIND:
                continue
            nic_id = f"{resource.id}{NIC_SUFFIX}"
            if nic_id in existing_ids:
                continue
            links.append(
                Link(
                    id=nic_id,
                    kind=NETWORKINTERFACE_KIND,
                    title="mgmt",
                    source=resource.id,
                    target=network.id,
                )
            )

        defaults = self._compute_defaults(profile)
        for index, resource in enumerate(resources):
            if not is_infrastructural(resource):
                continue
            if not resource.has_mixin(RUNTIME_ID_MIXIN):
                resource = resource.with_mixin_base(MixinBase(RUNTIME_ID_MIXIN, {PROVIDER_ID_ATTRIBUTE: None}))
            if resource.kind == COMPUTE_KIND:
                resource = self._apply_defaults(resource, defaults)
            resources[index] = resource  # type: ignore[assignment]

        use = cfg.use if PSM_EXTENSION in cfg.use else cfg.use + (PSM_EXTENSION,)
        psm = OcciConfiguration(use=use, resources=tuple(resources), links=tuple(links))
        logger.info(
            f"PSM for provider {profile.provider_name}: {len(psm.resources)} resources, {len(psm.links)} links"
        )
        return psm

    @staticmethod
    def _compute_defaults(profile: PsmProfile) -> Dict[str, Any]:
        defaults: Dict[str, Any] = {
            IMAGE_ATTRIBUTE: profile.default_image,
            FLAVOR_ATTRIBUTE: profile.default_flavor,
            SSH_KEY_ATTRIBUTE: profile.ssh_key_name,
        }
        if profile.user_data is not None:
            defaults[USER_DATA_ATTRIBUTE] = profile.user_data
        return defaults

    @staticmethod
    def _apply_defaults(resource: Resource, defaults: Dict[str, Any]) -> Resource:
        modeled = resource.flat_attributes()
        current = resource.mixin_base(PROVIDER_COMPUTE_MIXIN)
        values = dict(current.attributes) if current is not None else {}
        for name, value in defaults.items():
            if modeled.get(name) is None:
                values[name] = value
        return resource.with_mixin_base(MixinBase(PROVIDER_COMPUTE_MIXIN, values))  # type: ignore[return-value]
