"""Datatype conformance checks."""

import math
import re
from typing import Any, Callable, Dict, Optional

from ..models.occi import (
    ArrayType,
    BooleanType,
    DataType,
    DataTypeRef,
    EnumerationType,
    NumericKind,
    NumericType,
    RecordType,
    StringType,
)


SHORT_MIN = -32768
SHORT_MAX = 32767
VERSION_PATTERN = r"\d+(\.\d+){0,3}(\.[A-Za-z0-9_]+)?(-\d+)?"

PRIMITIVE_DATATYPES: Dict[str, DataType] = {
    "string": StringType(),
    "integer": NumericType(NumericKind.INTEGER),
    "float": NumericType(NumericKind.FLOAT),
    "short": NumericType(NumericKind.SHORT),
    "boolean": BooleanType(),
    "version": StringType(pattern=VERSION_PATTERN),
}

DataTypeResolver = Callable[[DataTypeRef], Optional[DataType]]


def resolve_primitive(name: DataTypeRef) -> Optional[DataType]:
    """Resolve one of the built-in primitive datatype names."""
    return PRIMITIVE_DATATYPES.get(name)


def check_datatype(
    value: Any,
    datatype: DataType,
    resolver: Optional[DataTypeResolver] = None,
) -> bool:
    """Check whether a literal conforms to a datatype.

    Args:
        value: Literal to check
        datatype: Datatype to check against
        resolver: Lookup for datatype names used by arrays and records
            (defaults to the primitive names)

    Returns:
        True iff the value conforms
    """
    resolve = resolver or resolve_primitive

    if value is None:
        return False

    if isinstance(datatype, StringType):
        return _check_string(value, datatype)

    if isinstance(datatype, NumericType):
        return _check_numeric(value, datatype)

    if isinstance(datatype, BooleanType):
        return isinstance(value, bool)

    if isinstance(datatype, EnumerationType):
        return isinstance(value, str) and value in datatype.literals

    if isinstance(datatype, ArrayType):
        if not isinstance(value, (list, tuple)):
            return False
        element = resolve(datatype.element_type)
        if element is None:
            return False
        return all(check_datatype(item, element, resolve) for item in value)

    if isinstance(datatype, RecordType):
        if not isinstance(value, dict):
            return False
        for key, item in value.items():
            field_ref = datatype.field_type(key)
            if field_ref is None:
                return False
            if item is None:
                continue
            field_type = resolve(field_ref)
            if field_type is None or not check_datatype(item, field_type, resolve):
                return False
        return True

    return False


def _check_string(value: Any, datatype: StringType) -> bool:
    if not isinstance(value, str):
        return False
    if datatype.min_length is not None and len(value) < datatype.min_length:
        return False
    if datatype.max_length is not None and len(value) > datatype.max_length:
        return False
    if datatype.pattern is not None and re.fullmatch(datatype.pattern, value) is None:
        return False
    return True


def _check_numeric(value: Any, datatype: NumericType) -> bool:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return False
    if datatype.numeric_kind in (NumericKind.INTEGER, NumericKind.SHORT):
        if not isinstance(value, int):
            return False
    if datatype.numeric_kind == NumericKind.SHORT and not SHORT_MIN <= value <= SHORT_MAX:
        return False
    if datatype.min_inclusive is not None and value < datatype.min_inclusive:
        return False
    if datatype.max_inclusive is not None and value > datatype.max_inclusive:
        return False
    return True
