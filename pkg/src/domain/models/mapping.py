"""Mapping rules from TOSCA concepts to OCCI targets, and mapping reports."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from .occi import CategoryRef, ConstraintDef


@dataclass(frozen=True)
class MixinAppliedToKind:
    """The concept's mixin applies to a kind."""
    kind: CategoryRef


@dataclass(frozen=True)
class MixinDependsOn:
    """The concept's mixin depends on the mixins of other TOSCA types."""
    type_names: Tuple[str, ...]


@dataclass(frozen=True)
class DataTypeTarget:
    """The concept maps to a named OCCI datatype."""
    datatype_name: str


@dataclass(frozen=True)
class ConstraintTarget:
    """The concept's mixin carries a fixed constraint."""
    constraint: ConstraintDef


@dataclass(frozen=True)
class ActionTarget:
    """Operations are renamed per anchor kind: kind -> (operation -> action)."""
    action_mapping: Dict[CategoryRef, Dict[str, str]]


@dataclass(frozen=True)
class InheritFromParent:
    """Fallback: the mixin depends on the parent type's mixin."""


RuleTarget = Union[
    MixinAppliedToKind,
    MixinDependsOn,
    DataTypeTarget,
    ConstraintTarget,
    ActionTarget,
    InheritFromParent,
]


@dataclass(frozen=True)
class MappingRule:
    """One row of the concept mapping table."""
    tosca_concept: str
    target: RuleTarget
    notes: str = ""


class RuleSource(str, Enum):
    """Where the rules applied to a type came from."""
    EXACT = "exact"
    INHERITED = "inherited"
    DEFAULT = "default"


@dataclass(frozen=True)
class RuleTable:
    """Builtin rules plus the derive-from-parent fallback."""
    builtin_rules: Tuple[MappingRule, ...]
    fallback_rule: MappingRule = field(
        default_factory=lambda: MappingRule(
            "derived_from", InheritFromParent(), "derived_from becomes a depends edge on the parent mixin"
        )
    )

    def exact(self, tosca_name: str) -> List[MappingRule]:
        """Builtin rules naming this concept, in table order."""
        return [rule for rule in self.builtin_rules if rule.tosca_concept == tosca_name]

    def lookup(self, tosca_name: str, derived_from: Optional[str]) -> Tuple[RuleSource, List[MappingRule]]:
        """Rules for a type: exact rules, else the inherited fallback, else the class default."""
        rules = self.exact(tosca_name)
        if rules:
            return RuleSource.EXACT, rules
        if derived_from:
            return RuleSource.INHERITED, [self.fallback_rule]
        return RuleSource.DEFAULT, []

    def targets(self, tosca_name: str, target_type: type) -> list:
        """Exact-rule targets of one target class."""
        return [rule.target for rule in self.exact(tosca_name) if isinstance(rule.target, target_type)]


class ReportLevel(str, Enum):
    """Severity of a mapping report entry."""
    MAPPED = "mapped"
    WARNING = "warning"
    ERROR = "error"


@dataclass(frozen=True)
class ReportEntry:
    """Outcome of mapping one type."""
    type_name: str
    level: ReportLevel
    message: str
    blocking: bool = False


@dataclass
class MappingReport:
    """Aggregated per-type mapping outcomes."""
    entries: List[ReportEntry] = field(default_factory=list)

    def mapped(self, type_name: str, message: str) -> None:
        self.entries.append(ReportEntry(type_name, ReportLevel.MAPPED, message))

    def warn(self, type_name: str, message: str) -> None:
        self.entries.append(ReportEntry(type_name, ReportLevel.WARNING, message))

    def error(self, type_name: str, message: str, blocking: bool = False) -> None:
        self.entries.append(ReportEntry(type_name, ReportLevel.ERROR, message, blocking))

    @property
    def errors(self) -> List[ReportEntry]:
        return [e for e in self.entries if e.level == ReportLevel.ERROR]

    @property
    def warnings(self) -> List[ReportEntry]:
        return [e for e in self.entries if e.level == ReportLevel.WARNING]

    @property
    def has_blocking_errors(self) -> bool:
        return any(e.blocking for e in self.errors)


@dataclass(frozen=True)
class Census:
    """Mixin counts of a generated extension, per anchored base extension."""
    total: int
    per_extension: Dict[str, int]

    def to_dict(self) -> Dict[str, object]:
        return {"total": self.total, "per_extension": dict(sorted(self.per_extension.items()))}


@dataclass(frozen=True)
class TemplateBinding:
    """Node or relationship template and the entity generated for it."""
    template_name: str
    entity_id: str
    mixin_term: str
    kind: CategoryRef
