"""Shared exception classes for the application."""

from typing import Optional, Dict, Any, List
from enum import Enum


class ErrorCode(str, Enum):
    """Standard error codes."""
    # Model errors (1xxx)
    PARSE_ERROR = "1001"
    LINK_ERROR = "1002"
    CYCLE_ERROR = "1003"

    # Parsing and mapping errors (2xxx)
    YAML_ERROR = "2001"
    SCHEMA_ERROR = "2002"
    DUPLICATE_TYPE = "2003"
    DANGLING_REFERENCE = "2004"
    UNRESOLVED_PARENT = "2005"
    INHERITANCE_CYCLE = "2006"
    MISSING_INPUT = "2007"
    TYPE_MAPPING_ERROR = "2010"
    UNMAPPED_TYPE = "2011"
    CONSTRAINT_COMPILE_ERROR = "2012"
    UNMAPPED_TEMPLATE = "2020"
    ATTRIBUTE_VALIDATION = "2021"
    DANGLING_BINDING = "2022"
    DUPLICATE_TEMPLATE = "2023"

    # Orchestration errors (3xxx)
    CYCLIC_DEPENDENCY = "3001"
    GATE_TIMEOUT = "3002"
    REQUEST_FAILED = "3003"
    RUNTIME_UNREACHABLE = "3004"

    # Runtime API errors (4xxx)
    BAD_REQUEST = "4000"
    ENTITY_NOT_FOUND = "4004"
    CONFLICT = "4009"

    # System errors (5xxx)
    INTERNAL_ERROR = "5000"
    CONFIGURATION_ERROR = "5002"


class BaseException(Exception):
    """Base exception class with error code and context."""

    def __init__(
        self,
        message: str,
        code: ErrorCode = ErrorCode.INTERNAL_ERROR,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None
    ):
        """Initialize exception.

        Args:
            message: Error message
            code: Error code
            details: Additional error details
            cause: Original exception that caused this error
        """
        super().__init__(message)
        self.message = message
        self.code = code
        self.details = details or {}
        self.cause = cause

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for API responses."""
        result = {
            "code": self.code.value,
            "message": self.message,
            "details": self.details
        }

        if self.cause:
            result["cause"] = str(self.cause)

        return result

    def __str__(self) -> str:
        """String representation."""
        parts = [f"[{self.code.value}] {self.message}"]

        if self.details:
            parts.append(f"Details: {self.details}")

        if self.cause:
            parts.append(f"Caused by: {self.cause}")

        return " | ".join(parts)


# Domain Exceptions

class DomainException(BaseException):
    """Base class for OCCI model exceptions."""
    pass


class ParseError(DomainException):
    """Extension or configuration file is malformed."""

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.PARSE_ERROR,
            details={"path": path} if path else {},
            **kwargs
        )


class LinkError(DomainException):
    """A reference inside an extension does not resolve."""

    def __init__(self, message: str, extension: str, ref: Optional[str] = None, **kwargs):
        details: Dict[str, Any] = {"extension": extension}
        if ref:
            details["ref"] = ref
        super().__init__(
            message=message,
            code=ErrorCode.LINK_ERROR,
            details=details,
            **kwargs
        )


class CycleError(DomainException):
    """Mixin depends (or kind parent) graph contains a cycle."""

    def __init__(self, extension: str, cycle: List[str], **kwargs):
        super().__init__(
            message=f"Cycle in extension '{extension}': {' -> '.join(cycle)}",
            code=ErrorCode.CYCLE_ERROR,
            details={"extension": extension, "cycle": cycle},
            **kwargs
        )
        self.cycle = cycle


# Application Exceptions

class ApplicationException(BaseException):
    """Base class for parsing, mapping and generation exceptions."""
    pass


class YamlError(ApplicationException):
    """Document is not valid YAML."""

    def __init__(self, message: str, line: Optional[int] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.YAML_ERROR,
            details={"line": line} if line else {},
            **kwargs
        )


class SchemaError(ApplicationException):
    """Document uses an unknown section or field."""

    def __init__(self, message: str, location: Optional[str] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.SCHEMA_ERROR,
            details={"location": location} if location else {},
            **kwargs
        )


class DuplicateTypeError(ApplicationException):
    """Type name defined more than once."""

    def __init__(self, type_name: str, line: Optional[int] = None, **kwargs):
        details: Dict[str, Any] = {"type_name": type_name}
        if line:
            details["line"] = line
        super().__init__(
            message=f"Duplicate type definition: {type_name}",
            code=ErrorCode.DUPLICATE_TYPE,
            details=details,
            **kwargs
        )


class DanglingReferenceError(ApplicationException):
    """Requirement names a template that does not exist."""

    def __init__(self, template: str, requirement: str, target: str, **kwargs):
        super().__init__(
            message=f"Requirement '{requirement}' of '{template}' targets unknown template '{target}'",
            code=ErrorCode.DANGLING_REFERENCE,
            details={"template": template, "requirement": requirement, "target": target},
            **kwargs
        )


class UnresolvedParentError(ApplicationException):
    """derived_from names a type that is not in the registry."""

    def __init__(self, type_name: str, parent: str, **kwargs):
        super().__init__(
            message=f"Type '{type_name}' derives from unknown type '{parent}'",
            code=ErrorCode.UNRESOLVED_PARENT,
            details={"type_name": type_name, "parent": parent},
            **kwargs
        )


class InheritanceCycleError(ApplicationException):
    """derived_from chain loops back on itself."""

    def __init__(self, cycle: List[str], **kwargs):
        super().__init__(
            message=f"Inheritance cycle: {' -> '.join(cycle)}",
            code=ErrorCode.INHERITANCE_CYCLE,
            details={"cycle": cycle},
            **kwargs
        )
        self.cycle = cycle


class MissingInputError(ApplicationException):
    """Topology input has no default and no provided value."""

    def __init__(self, input_name: str, **kwargs):
        super().__init__(
            message=f"No value for topology input '{input_name}'",
            code=ErrorCode.MISSING_INPUT,
            details={"input": input_name},
            **kwargs
        )


class TypeMappingError(ApplicationException):
    """A TOSCA property or datatype cannot be expressed as an OCCI datatype."""

    def __init__(self, message: str, type_name: Optional[str] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.TYPE_MAPPING_ERROR,
            details={"type_name": type_name} if type_name else {},
            **kwargs
        )


class UnmappedTypeError(ApplicationException):
    """No rule and no mapped parent for a type."""

    def __init__(self, type_name: str, reason: str, **kwargs):
        super().__init__(
            message=f"Cannot map type '{type_name}': {reason}",
            code=ErrorCode.UNMAPPED_TYPE,
            details={"type_name": type_name, "reason": reason},
            **kwargs
        )


class ConstraintCompileError(ApplicationException):
    """Requirement cannot be compiled into a constraint."""

    def __init__(self, type_name: str, requirement: str, reason: str, **kwargs):
        super().__init__(
            message=f"Requirement '{requirement}' of '{type_name}': {reason}",
            code=ErrorCode.CONSTRAINT_COMPILE_ERROR,
            details={"type_name": type_name, "requirement": requirement},
            **kwargs
        )


class UnmappedTemplateError(ApplicationException):
    """Template type has no mixin or no anchored kind."""

    def __init__(self, template: str, type_name: str, **kwargs):
        super().__init__(
            message=f"Template '{template}' has unmapped type '{type_name}'",
            code=ErrorCode.UNMAPPED_TEMPLATE,
            details={"template": template, "type_name": type_name},
            **kwargs
        )


class AttributeValidationError(ApplicationException):
    """Template property value does not fit its attribute."""

    def __init__(self, template: str, attribute: str, reason: str, **kwargs):
        super().__init__(
            message=f"Template '{template}' attribute '{attribute}': {reason}",
            code=ErrorCode.ATTRIBUTE_VALIDATION,
            details={"template": template, "attribute": attribute},
            **kwargs
        )


class DanglingBindingError(ApplicationException):
    """Relationship or binding cannot be resolved to two entities."""

    def __init__(self, message: str, template: Optional[str] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.DANGLING_BINDING,
            details={"template": template} if template else {},
            **kwargs
        )


class DuplicateTemplateError(ApplicationException):
    """Two templates share a name."""

    def __init__(self, template: str, **kwargs):
        super().__init__(
            message=f"Duplicate template name: {template}",
            code=ErrorCode.DUPLICATE_TEMPLATE,
            details={"template": template},
            **kwargs
        )


class CyclicDependencyError(ApplicationException):
    """Provisioning order graph contains a cycle."""

    def __init__(self, cycle: List[str], **kwargs):
        super().__init__(
            message=f"Cyclic provisioning dependency: {' -> '.join(cycle)}",
            code=ErrorCode.CYCLIC_DEPENDENCY,
            details={"cycle": cycle},
            **kwargs
        )
        self.cycle = cycle


class ExecutionError(ApplicationException):
    """Base class for failures while executing a plan."""

    report: Optional[Any] = None


class GateTimeoutError(ExecutionError):
    """Entity did not reach the required state in time."""

    def __init__(self, entity_id: str, required_state: str, last_state: Optional[str], timeout: float, **kwargs):
        super().__init__(
            message=f"Entity '{entity_id}' did not reach state '{required_state}' within {timeout}s "
                    f"(last state: {last_state})",
            code=ErrorCode.GATE_TIMEOUT,
            details={
                "entity_id": entity_id,
                "required_state": required_state,
                "last_state": last_state,
            },
            **kwargs
        )
        self.entity_id = entity_id


class RequestError(ExecutionError):
    """Runtime rejected a request."""

    def __init__(self, verb: str, entity_id: str, status: int, reason: str, **kwargs):
        super().__init__(
            message=f"{verb} {entity_id} rejected with {status}: {reason}",
            code=ErrorCode.REQUEST_FAILED,
            details={"verb": verb, "entity_id": entity_id, "status": status, "reason": reason},
            **kwargs
        )
        self.status = status


# Infrastructure Exceptions

class InfrastructureException(BaseException):
    """Base class for infrastructure exceptions."""
    pass


class RuntimeUnreachableError(InfrastructureException):
    """Runtime endpoint cannot be contacted."""

    def __init__(self, url: str, **kwargs):
        super().__init__(
            message=f"Runtime unreachable at {url}",
            code=ErrorCode.RUNTIME_UNREACHABLE,
            details={"url": url},
            **kwargs
        )


# API Exceptions

class APIException(BaseException):
    """Base class for runtime API exceptions."""

    @property
    def status_code(self) -> int:
        """Get HTTP status code for this exception."""
        mapping = {
            ErrorCode.BAD_REQUEST: 400,
            ErrorCode.ENTITY_NOT_FOUND: 404,
            ErrorCode.CONFLICT: 409,
        }
        return mapping.get(self.code, 500)


class BadRequestError(APIException):
    """Request body is invalid for the targeted entity."""

    def __init__(self, message: str, entity_id: Optional[str] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.BAD_REQUEST,
            details={"entity_id": entity_id} if entity_id else {},
            **kwargs
        )


class EntityNotFoundError(APIException):
    """Runtime holds no entity with this id."""

    def __init__(self, entity_id: str, **kwargs):
        super().__init__(
            message=f"Entity not found: {entity_id}",
            code=ErrorCode.ENTITY_NOT_FOUND,
            details={"entity_id": entity_id},
            **kwargs
        )


class ConflictError(APIException):
    """Request conflicts with the current runtime state."""

    def __init__(self, message: str, entity_id: str, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.CONFLICT,
            details={"entity_id": entity_id},
            **kwargs
        )


# System Exceptions

class SystemException(BaseException):
    """Base class for system exceptions."""
    pass


class ConfigurationException(SystemException):
    """Configuration error."""

    def __init__(self, message: str, setting: Optional[str] = None, **kwargs):
        super().__init__(
            message=message,
            code=ErrorCode.CONFIGURATION_ERROR,
            details={"setting": setting} if setting else {},
            **kwargs
        )
