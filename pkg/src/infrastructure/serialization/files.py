"""Deterministic JSON and the file loaders for extensions, configurations, profiles and plans."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from pydantic import BaseModel, TypeAdapter, ValidationError

from ...domain.models.configuration import OcciConfiguration
from ...domain.models.occi import OcciExtension
from ...domain.models.orchestration import ExecutionReport, ProvisioningPlan
from ...domain.models.psm import PsmProfile
from ...domain.services.extension_set import ExtensionSet
from ...shared.exceptions import LinkError, ParseError
from .documents import ConfigurationDocument, ExtensionDocument, ProfileDocument, StepDocument
from .mappers import DocumentMapper


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_STEPS = TypeAdapter(List[StepDocument])


def dumps(data: Any) -> str:
    """Serialize with sorted keys; lists keep declaration order."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json", by_alias=True)
    elif isinstance(data, list) and data and isinstance(data[0], BaseModel):
        data = [item.model_dump(mode="json", by_alias=True) for item in data]
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _read_json(source: Union[PathLike, str, Dict[str, Any]], what: str) -> Any:
    if isinstance(source, (dict, list)):
        return source
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read {what} file: {e}", path=str(path), cause=e) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Malformed {what} JSON at line {e.lineno}: {e.msg}", path=str(path), cause=e
        ) from e


def _validate(model, data: Any, what: str, path: Optional[str] = None):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"Invalid {what}: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}", path=path, cause=e) from e


# Extensions

def parse_extension(data: Union[PathLike, Dict[str, Any]]) -> OcciExtension:
    """Read an extension file without linking it.

    Raises:
        ParseError: If the file is malformed
    """
    path = None if isinstance(data, dict) else str(data)
    doc = _validate(ExtensionDocument, _read_json(data, "extension"), "extension", path)
    return DocumentMapper.extension_from_document(doc)


def load_extension(path: PathLike, extensions: Optional[ExtensionSet] = None) -> OcciExtension:
    """Read an extension file and link it into an extension set.

    Args:
        path: Extension JSON file
        extensions: Set holding the imports (a fresh set if None)

    Returns:
        The linked extension

    Raises:
        ParseError: If the file is malformed
        LinkError: If a reference does not resolve
        CycleError: If mixin depends or kind parents loop
    """
    extension = parse_extension(path)
    target = extensions if extensions is not None else ExtensionSet()
    target.add(extension)
    return extension


def load_extension_dir(directory: PathLike, extensions: Optional[ExtensionSet] = None) -> ExtensionSet:
    """Load every `*.json` extension of a directory in import order.

    Raises:
        ParseError: If a file is malformed
        LinkError: If imports cannot be satisfied by the directory
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError(f"Extension directory not found: {directory}", path=str(directory))
    target = extensions if extensions is not None else ExtensionSet()
    pending = [parse_extension(path) for path in sorted(directory.glob("*.json"))]
    load_extensions(pending, target)
    logger.info(f"Loaded {len(pending)} extensions from {directory}")
    return target


def load_extensions(pending: Iterable[OcciExtension], extensions: ExtensionSet) -> ExtensionSet:
    """Link unlinked extensions once their imports are loaded."""
    pending = list(pending)
    while pending:
        ready = [ext for ext in pending if all(name in extensions for name in ext.imports)]
        if not ready:
            missing = sorted({name for ext in pending for name in ext.imports if name not in extensions})
            raise LinkError(
                f"Cannot satisfy imports {missing} of {[ext.name for ext in pending]}",
                extension=pending[0].name,
                ref=missing[0] if missing else None,
            )
        for extension in ready:
            extensions.add(extension)
            pending.remove(extension)
    return extensions


def dump_extension(extension: OcciExtension) -> str:
    return dumps(DocumentMapper.extension_to_document(extension))


# Configurations

def load_configuration(source: Union[PathLike, Dict[str, Any]]) -> OcciConfiguration:
    """Read a configuration file.

    Raises:
        ParseError: If the file is malformed
    """
    path = None if isinstance(source, dict) else str(source)
    doc = _validate(ConfigurationDocument, _read_json(source, "configuration"), "configuration", path)
    return DocumentMapper.configuration_from_document(doc)


def configuration_to_dict(cfg: OcciConfiguration) -> Dict[str, Any]:
    return DocumentMapper.configuration_to_document(cfg).model_dump(mode="json", by_alias=True)


def dump_configuration(cfg: OcciConfiguration) -> str:
    return dumps(DocumentMapper.configuration_to_document(cfg))


# Profiles

def load_profile(source: Union[PathLike, Dict[str, Any]]) -> PsmProfile:
    """Read a PSM profile file.

    Raises:
        ParseError: If the file is malformed or the CIDR is invalid
    """
    path = None if isinstance(source, dict) else str(source)
    doc = _validate(ProfileDocument, _read_json(source, "profile"), "profile", path)
    return DocumentMapper.profile_from_document(doc)


# Plans

def dump_plan(plan: ProvisioningPlan) -> str:
    return dumps([doc.model_dump(mode="json", by_alias=True) for doc in DocumentMapper.plan_to_documents(plan)])


def load_plan(source: Union[PathLike, List[Any]]) -> ProvisioningPlan:
    """Read a plan file (JSON array of steps)."""
    data = source if isinstance(source, list) else _read_json(source, "plan")
    try:
        docs = _STEPS.validate_python(data)
    except ValidationError as e:
        raise ParseError(f"Invalid plan: {e.errors()[0]['msg']}", cause=e) from e
    return DocumentMapper.plan_from_documents(docs)


# Reports

def dump_report(report: ExecutionReport) -> str:
    return dumps(DocumentMapper.report_to_document(report))
