"""Mappers between domain models and wire documents."""

from typing import Any, Dict, List, Optional

from ...domain.models.configuration import (
    AnyEntity,
    Link,
    MixinBase,
    OcciConfiguration,
    Resource,
)
from ...domain.models.occi import (
    ActionDef,
    AllOf,
    AnyOf,
    ArrayType,
    AttrMatches,
    AttributeDef,
    BooleanType,
    Category,
    ConstraintDef,
    ConstraintExpr,
    DataType,
    EntityRole,
    EnumerationType,
    ExistsLink,
    Kind,
    LinkDirection,
    Mixin,
    Not,
    NumericKind,
    NumericType,
    OcciExtension,
    RecordField,
    RecordType,
    StringType,
)
from ...domain.models.orchestration import ExecutionReport, ProvisioningPlan, Request, StateGate, Verb
from ...domain.models.psm import PsmProfile
from ...shared.exceptions import ParseError
from .documents import (
    ActionDocument,
    ArrayTypeDocument,
    AttributeDocument,
    BooleanTypeDocument,
    ConfigurationDocument,
    ConstraintDocument,
    EntityDocument,
    EnumerationTypeDocument,
    ExtensionDocument,
    GateDocument,
    KindDocument,
    LinkDocument,
    MixinBaseDocument,
    MixinDocument,
    NumericTypeDocument,
    OutcomeDocument,
    ProfileDocument,
    RecordFieldDocument,
    RecordTypeDocument,
    ReportDocument,
    StepDocument,
    StringTypeDocument,
)


class DocumentMapper:
    """Maps between domain models and wire documents."""

    # Datatypes

    @staticmethod
    def datatype_from_document(doc) -> DataType:
        if isinstance(doc, StringTypeDocument):
            return StringType(doc.pattern, doc.min_length, doc.max_length)
        if isinstance(doc, NumericTypeDocument):
            return NumericType(NumericKind(doc.numeric_kind), doc.min_inclusive, doc.max_inclusive)
        if isinstance(doc, BooleanTypeDocument):
            return BooleanType()
        if isinstance(doc, EnumerationTypeDocument):
            return EnumerationType(tuple(doc.literals))
        if isinstance(doc, ArrayTypeDocument):
            return ArrayType(doc.element_type)
        if isinstance(doc, RecordTypeDocument):
            return RecordType(tuple(RecordField(f.name, f.type) for f in doc.fields))
        raise ParseError(f"Unknown datatype document: {doc!r}")

    @staticmethod
    def datatype_to_document(name: str, datatype: DataType):
        if isinstance(datatype, StringType):
            return StringTypeDocument(
                name=name,
                pattern=datatype.pattern,
                min_length=datatype.min_length,
                max_length=datatype.max_length,
            )
        if isinstance(datatype, NumericType):
            return NumericTypeDocument(
                name=name,
                numeric_kind=datatype.numeric_kind.value,
                min_inclusive=datatype.min_inclusive,
                max_inclusive=datatype.max_inclusive,
            )
        if isinstance(datatype, BooleanType):
            return BooleanTypeDocument(name=name)
        if isinstance(datatype, EnumerationType):
            return EnumerationTypeDocument(name=name, literals=list(datatype.literals))
        if isinstance(datatype, ArrayType):
            return ArrayTypeDocument(name=name, element_type=datatype.element_type)
        if isinstance(datatype, RecordType):
            return RecordTypeDocument(
                name=name,
                fields=[RecordFieldDocument(name=f.name, type=f.datatype) for f in datatype.fields],
            )
        raise TypeError(f"Unknown datatype: {datatype!r}")

    # Constraints

    @staticmethod
    def constraint_from_dict(body: Dict[str, Any]) -> ConstraintExpr:
        """Parse the constraint DSL.

        Raises:
            ParseError: If the expression is malformed
        """
        if not isinstance(body, dict):
            raise ParseError(f"Constraint expression must be an object, got {body!r}")
        op = body.get("op")
        try:
            if op == "exists_link":
                return ExistsLink(LinkDirection(body["direction"]), body["link"], body.get("peer"))
            if op == "attr_matches":
                return AttrMatches(body["attribute"], body["regex"])
            if op == "all":
                return AllOf(tuple(DocumentMapper.constraint_from_dict(i) for i in body["items"]))
            if op == "any":
                return AnyOf(tuple(DocumentMapper.constraint_from_dict(i) for i in body["items"]))
            if op == "not":
                return Not(DocumentMapper.constraint_from_dict(body["item"]))
        except (KeyError, ValueError) as e:
            raise ParseError(f"Malformed '{op}' constraint: {e}") from e
        raise ParseError(f"Unknown constraint operator: {op!r}")

    @staticmethod
    def constraint_to_dict(expr: ConstraintExpr) -> Dict[str, Any]:
        if isinstance(expr, ExistsLink):
            return {
                "op": "exists_link",
                "direction": expr.direction.value,
                "link": expr.link,
                "peer": expr.peer,
            }
        if isinstance(expr, AttrMatches):
            return {"op": "attr_matches", "attribute": expr.attribute, "regex": expr.regex}
        if isinstance(expr, AllOf):
            return {"op": "all", "items": [DocumentMapper.constraint_to_dict(i) for i in expr.items]}
        if isinstance(expr, AnyOf):
            return {"op": "any", "items": [DocumentMapper.constraint_to_dict(i) for i in expr.items]}
        if isinstance(expr, Not):
            return {"op": "not", "item": DocumentMapper.constraint_to_dict(expr.item)}
        raise TypeError(f"Unknown constraint expression: {expr!r}")

    # Categories

    @staticmethod
    def _attribute(doc: AttributeDocument) -> AttributeDef:
        return AttributeDef(
            name=doc.name,
            datatype=doc.type,
            required=doc.required,
            mutable=doc.mutable,
            default=doc.default,
            description=doc.description,
        )

    @staticmethod
    def _attribute_document(attribute: AttributeDef) -> AttributeDocument:
        return AttributeDocument(
            name=attribute.name,
            type=attribute.datatype,
            required=attribute.required,
            mutable=attribute.mutable,
            default=attribute.default,
            description=attribute.description,
        )

    @staticmethod
    def _action(doc: ActionDocument, scheme: str) -> ActionDef:
        return ActionDef(
            category=Category(term=doc.term, scheme=doc.scheme or scheme, title=doc.title),
            parameters=tuple(DocumentMapper._attribute(p) for p in doc.parameters),
        )

    @staticmethod
    def _action_document(action: ActionDef) -> ActionDocument:
        return ActionDocument(
            term=action.category.term,
            scheme=action.category.scheme,
            title=action.category.title,
            parameters=[DocumentMapper._attribute_document(p) for p in action.parameters],
        )

    @staticmethod
    def _category(term: str, scheme: Optional[str], title: Optional[str], attributes, default_scheme: str) -> Category:
        try:
            return Category(
                term=term,
                scheme=scheme or default_scheme,
                title=title,
                attributes=tuple(DocumentMapper._attribute(a) for a in attributes),
            )
        except ValueError as e:
            raise ParseError(str(e)) from e

    @staticmethod
    def extension_from_document(doc: ExtensionDocument) -> OcciExtension:
        """Convert an extension document to an unlinked extension.

        Raises:
            ParseError: If a value violates a model invariant
        """
        try:
            kinds = tuple(
                Kind(
                    category=DocumentMapper._category(k.term, k.scheme, k.title, k.attributes, doc.scheme),
                    parent=k.parent,
                    actions=tuple(DocumentMapper._action(a, doc.scheme) for a in k.actions),
                    entity_role=EntityRole(k.role),
                )
                for k in doc.kinds
            )
            mixins = tuple(
                Mixin(
                    category=DocumentMapper._category(m.term, m.scheme, m.title, m.attributes, doc.scheme),
                    depends=tuple(m.depends),
                    applies=tuple(m.applies),
                    actions=tuple(DocumentMapper._action(a, doc.scheme) for a in m.actions),
                    constraints=tuple(
                        ConstraintDef(c.name, DocumentMapper.constraint_from_dict(c.body), c.description)
                        for c in m.constraints
                    ),
                )
                for m in doc.mixins
            )
            datatypes: Dict[str, DataType] = {}
            for dt in doc.datatypes:
                if dt.name in datatypes:
                    raise ParseError(f"Datatype '{dt.name}' declared twice in '{doc.name}'")
                datatypes[dt.name] = DocumentMapper.datatype_from_document(dt)
            return OcciExtension(
                name=doc.name,
                scheme=doc.scheme,
                imports=tuple(doc.imports),
                kinds=kinds,
                mixins=mixins,
                datatypes=datatypes,
                description=doc.description,
            )
        except ValueError as e:
            raise ParseError(f"Invalid extension '{doc.name}': {e}") from e

    @staticmethod
    def extension_to_document(extension: OcciExtension) -> ExtensionDocument:
        return ExtensionDocument(
            name=extension.name,
            scheme=extension.scheme,
            description=extension.description,
            imports=list(extension.imports),
            datatypes=[
                DocumentMapper.datatype_to_document(name, dt)
                for name, dt in extension.datatypes.items()
            ],
            kinds=[
                KindDocument(
                    term=k.category.term,
                    scheme=k.category.scheme,
                    title=k.category.title,
                    parent=k.parent,
                    role=k.entity_role.value,
                    attributes=[DocumentMapper._attribute_document(a) for a in k.category.attributes],
                    actions=[DocumentMapper._action_document(a) for a in k.actions],
                )
                for k in extension.kinds
            ],
            mixins=[
                MixinDocument(
                    term=m.category.term,
                    scheme=m.category.scheme,
                    title=m.category.title,
                    depends=list(m.depends),
                    applies=list(m.applies),
                    attributes=[DocumentMapper._attribute_document(a) for a in m.category.attributes],
                    actions=[DocumentMapper._action_document(a) for a in m.actions],
                    constraints=[
                        ConstraintDocument(
                            name=c.name,
                            body=DocumentMapper.constraint_to_dict(c.body),
                            description=c.description,
                        )
                        for c in m.constraints
                    ],
                )
                for m in extension.mixins
            ],
        )

    # Configurations

    @staticmethod
    def entity_from_document(doc: EntityDocument) -> AnyEntity:
        bases = tuple(MixinBase(mb.mixin, dict(mb.attributes)) for mb in doc.mixins)
        try:
            if isinstance(doc, LinkDocument):
                return Link(
                    id=doc.id,
                    kind=doc.kind,
                    title=doc.title,
                    mixin_bases=bases,
                    attributes=dict(doc.attributes),
                    source=doc.source,
                    target=doc.target,
                )
            return Resource(
                id=doc.id,
                kind=doc.kind,
                title=doc.title,
                mixin_bases=bases,
                attributes=dict(doc.attributes),
            )
        except ValueError as e:
            raise ParseError(f"Invalid entity: {e}") from e

    @staticmethod
    def entity_to_document(entity: AnyEntity) -> EntityDocument:
        fields = dict(
            id=entity.id,
            kind=entity.kind,
            title=entity.title,
            mixins=[MixinBaseDocument(mixin=mb.mixin, attributes=dict(mb.attributes)) for mb in entity.mixin_bases],
            attributes=dict(entity.attributes),
        )
        if isinstance(entity, Link):
            return LinkDocument(source=entity.source, target=entity.target, **fields)
        return EntityDocument(**fields)

    @staticmethod
    def configuration_from_document(doc: ConfigurationDocument) -> OcciConfiguration:
        return OcciConfiguration(
            use=tuple(doc.use),
            resources=tuple(DocumentMapper.entity_from_document(r) for r in doc.resources),  # type: ignore[misc]
            links=tuple(DocumentMapper.entity_from_document(link) for link in doc.links),  # type: ignore[misc]
        )

    @staticmethod
    def configuration_to_document(cfg: OcciConfiguration) -> ConfigurationDocument:
        return ConfigurationDocument(
            use=list(cfg.use),
            resources=[DocumentMapper.entity_to_document(r) for r in cfg.resources],
            links=[DocumentMapper.entity_to_document(link) for link in cfg.links],  # type: ignore[misc]
        )

    # Profiles

    @staticmethod
    def profile_from_document(doc: ProfileDocument) -> PsmProfile:
        try:
            return PsmProfile(
                provider_name=doc.provider_name,
                default_image=doc.default_image,
                default_flavor=doc.default_flavor,
                ssh_key_name=doc.ssh_key_name,
                management_cidr=doc.management_cidr,
                user_data=doc.user_data,
            )
        except ValueError as e:
            raise ParseError(f"Invalid profile: {e}") from e

    @staticmethod
    def profile_to_document(profile: PsmProfile) -> ProfileDocument:
        return ProfileDocument(
            provider_name=profile.provider_name,
            default_image=profile.default_image,
            default_flavor=profile.default_flavor,
            ssh_key_name=profile.ssh_key_name,
            management_cidr=profile.management_cidr,
            user_data=profile.user_data,
        )

    # Plans

    @staticmethod
    def plan_to_documents(plan: ProvisioningPlan) -> List[StepDocument]:
        return [
            StepDocument(
                verb=step.verb.value,
                entity_id=step.entity_id,
                payload=dict(step.payload),
                action=step.action_name,
                gate=(
                    GateDocument(entity_id=step.gate.entity_id, required_state=step.gate.required_state)
                    if step.gate
                    else None
                ),
            )
            for step in plan
        ]

    @staticmethod
    def plan_from_documents(docs: List[StepDocument]) -> ProvisioningPlan:
        return ProvisioningPlan(
            tuple(
                Request(
                    verb=Verb(doc.verb),
                    entity_id=doc.entity_id,
                    payload=dict(doc.payload),
                    action_name=doc.action,
                    gate=StateGate(doc.gate.entity_id, doc.gate.required_state) if doc.gate else None,
                )
                for doc in docs
            )
        )

    # Reports

    @staticmethod
    def report_to_document(report: ExecutionReport) -> ReportDocument:
        return ReportDocument(
            outcomes=[
                OutcomeDocument(
                    index=outcome.index,
                    verb=outcome.request.verb.value,
                    entity_id=outcome.request.entity_id,
                    status=outcome.status.value,
                    error=outcome.error,
                )
                for outcome in report.outcomes
            ],
            conformant=report.conformant,
        )
