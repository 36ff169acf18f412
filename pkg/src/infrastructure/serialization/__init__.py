"""JSON serialization of extensions, configurations, profiles and plans."""

from .files import (
    configuration_to_dict,
    dump_configuration,
    dump_extension,
    dump_plan,
    dump_report,
    dumps,
    load_configuration,
    load_extension,
    load_extension_dir,
    load_extensions,
    load_plan,
    load_profile,
    parse_extension,
    write_text,
)
from .mappers import DocumentMapper

__all__ = [
    "DocumentMapper",
    "configuration_to_dict",
    "dump_configuration",
    "dump_extension",
    "dump_plan",
    "dump_report",
    "dumps",
    "load_configuration",
    "load_extension",
    "load_extension_dir",
    "load_extensions",
    "load_plan",
    "load_profile",
    "parse_extension",
    "write_text",
]
