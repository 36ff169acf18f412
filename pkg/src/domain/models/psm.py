"""Platform-specific profile used by the PIM to PSM transformation."""

import ipaddress
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class PsmProfile:
    """Provider defaults added to a platform-independent configuration."""
    provider_name: str
    default_image: str
    default_flavor: str
    ssh_key_name: str
    management_cidr: str
    user_data: Optional[str] = None

    def __post_init__(self):
        if not self.provider_name:
            raise ValueError("Provider name cannot be empty")
        try:
            ipaddress.IPv4Network(self.management_cidr)
        except ValueError as e:
            raise ValueError(f"Invalid management CIDR {self.management_cidr!r}: {e}") from e
