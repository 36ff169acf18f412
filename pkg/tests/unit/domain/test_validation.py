"""Tests for configuration validation."""

import pytest

from src.domain.models.configuration import Link, MixinBase, OcciConfiguration, Resource
from src.domain.models.occi import (
    AllOf,
    AnyOf,
    AttrMatches,
    AttributeDef,
    Category,
    ConstraintDef,
    ExistsLink,
    LinkDirection,
    Mixin,
    Not,
    OcciExtension,
)
from src.domain.models.vocabulary import (
    COMPUTE_KIND,
    IPNETWORK_MIXIN,
    LINK_KIND,
    NETWORK_KIND,
    NETWORKINTERFACE_KIND,
    STORAGELINK_KIND,
)
from src.domain.services.extension_set import ExtensionSet
from src.domain.services.validation import check_entity, validate_configuration
from src.infrastructure.serialization.files import load_configuration


RULES = "http://example.org/rules#"


def _vm(vm_id: str = "vm", **fields) -> Resource:
    return Resource(id=vm_id, kind=COMPUTE_KIND, **fields)


def _cfg(*entities, use=("core", "infrastructure")) -> OcciConfiguration:
    return OcciConfiguration(
        use=use,
        resources=tuple(e for e in entities if not isinstance(e, Link)),
        links=tuple(e for e in entities if isinstance(e, Link)),
    )


class TestStructuralChecks:
    """Test kind, mixin and attribute checks."""

    def test_valid_configuration(self, base_extensions):
        """Test a well-formed configuration has no violations."""
        cfg = _cfg(
            _vm(attributes={"occi.compute.cores": 2, "occi.compute.architecture": "x64"}),
            Resource(
                id="net",
                kind=NETWORK_KIND,
                mixin_bases=(MixinBase(IPNETWORK_MIXIN, {"occi.network.address": "10.0.0.0/24"}),),
            ),
            Link(id="nic", kind=NETWORKINTERFACE_KIND, source="vm", target="net"),
        )
        report = validate_configuration(cfg, base_extensions)

        assert report.is_valid
        assert len(report) == 0

    def test_unknown_extension(self, base_extensions):
        """Test configurations using an unloaded extension."""
        report = validate_configuration(_cfg(_vm(), use=("core", "nope")), base_extensions)
        assert report.names() == ["UnknownExtension"]
        assert report.violations[0].entity_id is None

    def test_duplicate_id(self, base_extensions):
        """Test ids are unique across resources and links."""
        report = validate_configuration(_cfg(_vm(), _vm()), base_extensions)
        assert report.names() == ["DuplicateId"]

    def test_unknown_kind(self, base_extensions):
        """Test entities of an unloaded kind."""
        cfg = _cfg(Resource(id="x", kind="http://example.org/none#thing"))
        assert validate_configuration(cfg, base_extensions).names() == ["UnknownKind"]

    def test_role_mismatch(self, base_extensions):
        """Test resources of a link kind and links of a resource kind."""
        cfg = _cfg(
            _vm(),
            Resource(id="bad", kind=STORAGELINK_KIND),
            Link(id="wrong", kind=COMPUTE_KIND, source="vm", target="vm"),
        )
        report = validate_configuration(cfg, base_extensions)
        assert report.names().count("RoleMismatch") == 2

    def test_attribute_checks(self, base_extensions):
        """Test undeclared and nonconforming attribute values."""
        vm = _vm(attributes={"occi.compute.cores": "two", "occi.compute.colour": "red"})
        report = validate_configuration(_cfg(vm), base_extensions)
        assert sorted(report.names()) == ["InvalidAttributeValue", "UndeclaredAttribute"]

    def test_none_values_are_unset(self, base_extensions):
        """Test None values are treated as absent."""
        report = validate_configuration(_cfg(_vm(attributes={"occi.compute.cores": None})), base_extensions)
        assert report.is_valid

    def test_mixin_checks(self, base_extensions):
        """Test unknown and inapplicable mixins."""
        vm = _vm(mixin_bases=(MixinBase(IPNETWORK_MIXIN), MixinBase("http://example.org/none#m")))
        report = validate_configuration(_cfg(vm), base_extensions)
        assert sorted(report.names()) == ["MixinNotApplicable", "UnknownMixin"]

    def test_dangling_endpoint(self, base_extensions):
        """Test links must join resources of the configuration."""
        cfg = _cfg(_vm(), Link(id="l", kind=LINK_KIND, source="vm", target="ghost"))
        report = validate_configuration(cfg, base_extensions)
        assert report.names() == ["DanglingEndpoint"]
        assert report.for_entity("l")[0].message.startswith("Link target")

    def test_check_entity_alone(self, base_extensions):
        """Test entity checks without configuration context."""
        assert check_entity(_vm(attributes={"occi.compute.cores": 4}), base_extensions) == []


class TestConstraints:
    """Test mixin constraints and required attributes."""

    @pytest.fixture
    def extensions(self, base_extensions) -> ExtensionSet:
        wired = Mixin(
            Category("wired", RULES),
            applies=(COMPUTE_KIND,),
            constraints=(
                ConstraintDef(
                    "NeedsNetwork",
                    ExistsLink(LinkDirection.OUT, NETWORKINTERFACE_KIND, NETWORK_KIND),
                    "A wired compute needs a network interface",
                ),
            ),
        )
        named = Mixin(
            Category(
                "named",
                RULES,
                attributes=(AttributeDef("rules.name", "string", required=True),),
            ),
            depends=(RULES + "wired",),
            constraints=(
                ConstraintDef(
                    "LowerCaseName",
                    AllOf((AttrMatches("rules.name", "[a-z]+"), Not(AttrMatches("rules.name", "root")))),
                ),
            ),
        )
        tagged = Mixin(
            Category("tagged", RULES, attributes=(AttributeDef("rules.tag", "string", default="none"),)),
            constraints=(
                ConstraintDef(
                    "TaggedOrWired",
                    AnyOf((AttrMatches("rules.tag", "t.*"), ExistsLink(LinkDirection.OUT, RULES + "wired"))),
                ),
            ),
        )
        base_extensions.add(
            OcciExtension(
                name="rules",
                scheme=RULES,
                imports=("infrastructure",),
                mixins=(wired, named, tagged),
            )
        )
        return base_extensions

    def _wired(self, vm: Resource, wire_link: bool = True) -> OcciConfiguration:
        entities = [vm, Resource(id="net", kind=NETWORK_KIND)]
        if wire_link:
            entities.append(Link(id="nic", kind=NETWORKINTERFACE_KIND, source=vm.id, target="net"))
        return _cfg(*entities, use=("core", "infrastructure", "rules"))

    def test_exists_link(self, extensions):
        """Test outgoing link constraints."""
        vm = _vm(mixin_bases=(MixinBase(RULES + "wired"),))
        assert validate_configuration(self._wired(vm), extensions).is_valid

        report = validate_configuration(self._wired(vm, wire_link=False), extensions)
        assert report.names() == ["NeedsNetwork"]
        assert report.violations[0].message == "A wired compute needs a network interface"

    def test_constraints_of_depends_closure(self, extensions):
        """Test constraints of depended-on mixins apply too."""
        vm = _vm(mixin_bases=(MixinBase(RULES + "named", {"rules.name": "web"}),))
        assert validate_configuration(self._wired(vm), extensions).is_valid

        report = validate_configuration(self._wired(vm, wire_link=False), extensions)
        assert report.names() == ["NeedsNetwork"]

    def test_attr_matches(self, extensions):
        """Test pattern constraints with negation."""
        for name in ("Web", "root"):
            vm = _vm(mixin_bases=(MixinBase(RULES + "named", {"rules.name": name}),))
            assert validate_configuration(self._wired(vm), extensions).names() == ["LowerCaseName"]

    def test_missing_required(self, extensions):
        """Test required attributes without a default."""
        vm = _vm(mixin_bases=(MixinBase(RULES + "named"),))
        names = validate_configuration(self._wired(vm), extensions).names()
        assert "MissingRequiredAttribute" in names
        assert "LowerCaseName" in names

    def test_any_of(self, extensions):
        """Test alternatives of a disjunction."""
        tagged = _vm(mixin_bases=(MixinBase(RULES + "tagged", {"rules.tag": "team"}),))
        untagged = _vm(mixin_bases=(MixinBase(RULES + "tagged"),))

        assert validate_configuration(_cfg(tagged, use=("rules",)), extensions).is_valid
        assert validate_configuration(_cfg(untagged, use=("rules",)), extensions).names() == ["TaggedOrWired"]


class TestFixtureConfigurations:
    """Test the invalid configuration fixture."""

    def test_broken_compute(self, extensions, fixtures_dir):
        """Test a compute hosting no component breaks exactly one constraint."""
        cfg = load_configuration(fixtures_dir / "invalid" / "broken_compute.json")
        report = validate_configuration(cfg, extensions)

        assert report.names() == ["SourceMustBeSoftwareComponent"]
        assert report.violations[0].entity_id == "urn:tosca:broken:vm"

    def test_zero_cpus(self, extensions, fixtures_dir):
        """Test the cpu count lower bound of 1."""
        cfg = load_configuration(fixtures_dir / "invalid" / "broken_compute.json")
        vm = cfg.resources[0]
        base = vm.mixin_bases[0]
        zero = vm.with_mixin_base(MixinBase(base.mixin, {**base.attributes, "host.num_cpus": 0}))

        report = validate_configuration(OcciConfiguration(use=cfg.use, resources=(zero,)), extensions)

        assert sorted(report.names()) == ["InvalidAttributeValue", "SourceMustBeSoftwareComponent"]
