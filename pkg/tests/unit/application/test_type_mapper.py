"""Tests for TOSCA to OCCI type mapping."""

import json
import textwrap

import pytest

from src.application.services.mapping_rules import (
    HOSTED_ON,
    SOURCE_MUST_BE_SOFTWARE_COMPONENT,
    mangle_name,
)
from src.application.services.type_mapper import (
    DataTypePool,
    fold_constraints,
)
from src.domain.models.mapping import MappingReport, RuleSource
from src.domain.models.occi import (
    AnyOf,
    ArrayType,
    EnumerationType,
    ExistsLink,
    LinkDirection,
    NumericKind,
    NumericType,
    RecordType,
    StringType,
)
from src.domain.models.tosca import ToscaConstraint, ToscaPropertyDef, ToscaRequirementDef, ToscaTypeRegistry
from src.domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENT_KIND,
    COMPONENTLINK_KIND,
    COMPUTE_KIND,
    DEFAULT_TOSCA_SCHEME,
    PLACEMENTLINK_KIND,
)
from src.domain.services.extension_set import ExtensionSet
from src.shared.exceptions import ConstraintCompileError, TypeMappingError, UnmappedTypeError


def _clause(operator, operand) -> ToscaConstraint:
    return ToscaConstraint(operator, operand)


def _mixin_id(type_name: str) -> str:
    return DEFAULT_TOSCA_SCHEME + mangle_name(type_name)


class TestFoldConstraints:
    """Test folding TOSCA constraints into datatypes."""

    def test_valid_values(self):
        """Test valid_values becomes an enumeration."""
        folded = fold_constraints(StringType(), (_clause("valid_values", ["tcp", "udp"]),), "p")
        assert folded == EnumerationType(("tcp", "udp"))

    def test_valid_values_needs_string(self):
        """Test valid_values on a numeric base."""
        with pytest.raises(TypeMappingError):
            fold_constraints(NumericType(), (_clause("valid_values", [1, 2]),), "p")

    def test_bounds(self):
        """Test inclusive and exclusive bounds."""
        integer = NumericType(NumericKind.INTEGER)
        assert fold_constraints(integer, (_clause("greater_or_equal", 1),), "p").min_inclusive == 1
        assert fold_constraints(integer, (_clause("greater_than", 1),), "p").min_inclusive == 2
        assert fold_constraints(integer, (_clause("less_than", 10),), "p").max_inclusive == 9
        folded = fold_constraints(integer, (_clause("in_range", [1, 65535]),), "p")
        assert (folded.min_inclusive, folded.max_inclusive) == (1, 65535)

    def test_exclusive_bound_on_float(self):
        """Test exclusive bounds have no inclusive form on floats."""
        with pytest.raises(TypeMappingError):
            fold_constraints(NumericType(NumericKind.FLOAT), (_clause("greater_than", 0.5),), "p")

    def test_inverted_range(self):
        """Test bounds that leave no value."""
        with pytest.raises(TypeMappingError):
            fold_constraints(NumericType(), (_clause("in_range", [10, 1]),), "p")

    def test_string_constraints(self):
        """Test length and pattern constraints."""
        folded = fold_constraints(
            StringType(),
            (_clause("min_length", 2), _clause("max_length", 8), _clause("pattern", "[a-z]+")),
            "p",
        )
        assert folded == StringType(pattern="[a-z]+", min_length=2, max_length=8)

        with pytest.raises(TypeMappingError):
            fold_constraints(folded, (_clause("pattern", "[0-9]+"),), "p")
        with pytest.raises(TypeMappingError):
            fold_constraints(NumericType(), (_clause("length", 2),), "p")

    def test_equal(self):
        """Test equal pins a single value."""
        assert fold_constraints(StringType(), (_clause("equal", "tcp"),), "p") == EnumerationType(("tcp",))
        folded = fold_constraints(NumericType(), (_clause("equal", 3),), "p")
        assert (folded.min_inclusive, folded.max_inclusive) == (3, 3)


class TestDataTypePool:
    """Test interning of generated datatypes."""

    def test_intern_reuses_equal_structure(self):
        """Test equal structures share the first name."""
        pool = DataTypePool()
        first = pool.intern("owner", "port", NumericType(min_inclusive=1))
        second = pool.intern("other", "size", NumericType(min_inclusive=1))

        assert first == "owner_portType"
        assert second == first
        assert len(pool) == 1

    def test_intern_primitives(self):
        """Test unconstrained primitives keep their name."""
        pool = DataTypePool()
        assert pool.intern("owner", "name", StringType()) == "string"
        assert len(pool) == 0
        assert "integer" in pool

    def test_name_collisions(self):
        """Test distinct structures under the same owner and property."""
        pool = DataTypePool()
        assert pool.intern("o", "a.b", NumericType(min_inclusive=1)) == "o_a_bType"
        assert pool.intern("o", "a.b", NumericType(min_inclusive=2)) == "o_a_bType2"

    def test_remove(self):
        """Test removed datatypes no longer resolve."""
        pool = DataTypePool()
        name = pool.intern("o", "p", NumericType(min_inclusive=1))
        pool.remove(name)
        assert pool.resolve(name) is None
        assert pool.intern("x", "y", NumericType(min_inclusive=1)) == "x_yType"


class TestMapProperty:
    """Test mapping properties to attributes."""

    def test_unconstrained(self, type_mapper):
        """Test primitive properties keep the primitive datatype."""
        pool = DataTypePool()
        attribute = type_mapper.map_property(ToscaPropertyDef("port", "integer", required=False), pool)
        assert attribute.datatype == "integer"
        assert not attribute.required
        assert len(pool) == 0

    def test_constrained(self, type_mapper):
        """Test constrained properties get an interned datatype."""
        pool = DataTypePool()
        prop = ToscaPropertyDef("cpus", "integer", default=2, constraints=(_clause("greater_or_equal", 1),))
        attribute = type_mapper.map_property(prop, pool, owner="vm")

        assert attribute.datatype == "vm_cpusType"
        assert attribute.default == 2
        assert attribute.required
        assert pool.resolve("vm_cpusType") == NumericType(NumericKind.INTEGER, min_inclusive=1)

    def test_scalar_units(self, type_mapper):
        """Test sizes map to integers and frequencies to floats."""
        pool = DataTypePool()
        assert type_mapper.map_property(ToscaPropertyDef("mem", "scalar-unit.size"), pool).datatype == "integer"
        assert type_mapper.map_property(ToscaPropertyDef("freq", "scalar-unit.frequency"), pool).datatype == "float"

    def test_list(self, type_mapper):
        """Test lists become arrays of their entry type."""
        pool = DataTypePool()
        attribute = type_mapper.map_property(ToscaPropertyDef("ports", "list", entry_schema="integer"), pool, owner="o")
        assert pool.resolve(attribute.datatype) == ArrayType("integer")

    def test_nonconforming_default(self, type_mapper):
        """Test defaults violating the folded constraints."""
        prop = ToscaPropertyDef("cpus", "integer", default=0, constraints=(_clause("greater_or_equal", 1),))
        with pytest.raises(TypeMappingError):
            type_mapper.map_property(prop, DataTypePool())

    def test_unknown_type(self, type_mapper):
        """Test properties of an unknown type."""
        with pytest.raises(TypeMappingError):
            type_mapper.map_property(ToscaPropertyDef("x", "my.Unknown"), DataTypePool())


class TestMapDatatype:
    """Test mapping TOSCA datatypes."""

    def test_record(self, type_mapper, registry):
        """Test complex datatypes become records."""
        credential = registry.get("tosca.datatypes.Credential")
        assert type_mapper.datatype_name(credential) == "CredentialRecordType"
        datatype = type_mapper.map_datatype(credential, DataTypePool(), registry)
        assert isinstance(datatype, RecordType)
        assert datatype.field_type("token") is not None

    def test_port_def(self, type_mapper, registry):
        """Test a constrained primitive derivation."""
        datatype = type_mapper.map_datatype(registry.get("tosca.datatypes.network.PortDef"), DataTypePool(), registry)
        assert datatype == NumericType(NumericKind.INTEGER, 1, 65535)

    def test_port_spec(self, type_mapper, registry):
        """Test a rule mapping a datatype onto a primitive."""
        datatype = type_mapper.map_datatype(registry.get("tosca.datatypes.network.PortSpec"), DataTypePool(), registry)
        assert datatype == NumericType(NumericKind.SHORT)


class TestMapType:
    """Test mapping node and relationship types to mixins."""

    def test_compute(self, type_mapper, registry):
        """Test the compute mixin."""
        mixin = type_mapper.map_type(registry.get("tosca.nodes.Compute"), registry)

        assert mixin.id == _mixin_id("tosca.nodes.Compute")
        assert mixin.applies == (COMPUTE_KIND,)
        assert mixin.depends[0] == _mixin_id("tosca.nodes.Root")
        assert _mixin_id("tosca.capabilities.Container") in mixin.depends
        assert SOURCE_MUST_BE_SOFTWARE_COMPONENT in [c.name for c in mixin.constraints]
        names = [a.name for a in mixin.category.attributes]
        assert "host.num_cpus" in names
        assert "os.type" in names
        assert not mixin.category.attribute("host.num_cpus").required

    def test_depends_rules(self, type_mapper, registry):
        """Test rule depends come after the parent and are not repeated."""
        mixin = type_mapper.map_type(registry.get("tosca.nodes.DBMS"), registry)
        assert mixin.depends[:2] == (
            _mixin_id("tosca.nodes.SoftwareComponent"),
            _mixin_id("tosca.nodes.Database"),
        )
        assert len(mixin.depends) == len(set(mixin.depends))

    def test_anchor_kinds(self, type_mapper, registry):
        """Test anchors are found through parents and depends rules."""
        assert type_mapper.anchor_kinds("tosca.nodes.Wordpress", registry) == (COMPONENT_KIND,)
        assert type_mapper.anchor_kinds("tosca.nodes.HACompute", registry) == (COMPUTE_KIND,)
        assert type_mapper.anchor_kinds(HOSTED_ON, registry) == (COMPONENTLINK_KIND,)
        assert type_mapper.anchor_kinds("tosca.nodes.Root", registry) == ()

    def test_unanchored_type(self, type_mapper, parser, registry):
        """Test a node type no rule anchors."""
        extra = parser.parse_types(
            "node_types:\n  my.Thing:\n    derived_from: tosca.nodes.Root\n"
        )
        extended = parser.resolve_registry(extra, registry)
        with pytest.raises(UnmappedTypeError):
            type_mapper.map_type(extended.get("my.Thing"), extended)

    def test_requirement_on_compute(self, type_mapper, registry):
        """Test hosting on a compute is met by a placement."""
        requirement = registry.effective_requirements("tosca.nodes.SoftwareComponent")["host"]
        constraint = type_mapper.compile_requirement("tosca.nodes.SoftwareComponent", requirement, registry)

        assert constraint.name == "tosca_nodes_SoftwareComponent_requires_host"
        assert constraint.body == ExistsLink(
            LinkDirection.OUT, PLACEMENTLINK_KIND, _mixin_id("tosca.capabilities.Container")
        )

    def test_requirement_on_component(self, type_mapper, registry):
        """Test hosting on a software component accepts a link or a placement."""
        requirement = registry.effective_requirements("tosca.nodes.WebApplication")["host"]
        constraint = type_mapper.compile_requirement("tosca.nodes.WebApplication", requirement, registry)

        assert isinstance(constraint.body, AnyOf)
        assert constraint.body.items[0].link == _mixin_id(HOSTED_ON)
        assert constraint.body.items[1].link == PLACEMENTLINK_KIND

    def test_connects_to(self, type_mapper, registry):
        """Test other relationships need a link of their mixin."""
        requirement = registry.effective_requirements("tosca.nodes.Wordpress")["database_endpoint"]
        constraint = type_mapper.compile_requirement("tosca.nodes.Wordpress", requirement, registry)
        assert constraint.body == ExistsLink(
            LinkDirection.OUT,
            _mixin_id("tosca.relationships.ConnectsTo"),
            _mixin_id("tosca.capabilities.Endpoint.Database"),
        )

    def test_unknown_relationship(self, type_mapper, registry):
        """Test requirements over an unknown relationship."""
        requirement = ToscaRequirementDef("x", capability="tosca.capabilities.Node", relationship="my.Rel")
        with pytest.raises(ConstraintCompileError):
            type_mapper.compile_requirement("tosca.nodes.Root", requirement, registry)


class TestActions:
    """Test lifecycle operations becoming actions."""

    TYPES = textwrap.dedent(
        """
        node_types:
          my.Server:
            derived_from: tosca.nodes.Compute
            interfaces:
              Standard:
                type: tosca.interfaces.node.lifecycle.Standard
          my.App:
            derived_from: tosca.nodes.SoftwareComponent
            interfaces:
              Standard:
                type: tosca.interfaces.node.lifecycle.Standard
        """
    )

    @pytest.fixture
    def extended(self, parser, registry) -> ToscaTypeRegistry:
        return parser.resolve_registry(parser.parse_types(self.TYPES), registry)

    def test_compute_actions(self, type_mapper, extended):
        """Test operations without a compute action are dropped."""
        mixin = type_mapper.map_type(extended.get("my.Server"), extended)
        assert [a.name for a in mixin.actions] == ["start", "stop"]
        assert mixin.actions[0].category.scheme == "http://occiware.org/tosca/my_Server/action#"

    def test_component_actions(self, type_mapper, extended):
        """Test operations renamed for platform components."""
        mixin = type_mapper.map_type(extended.get("my.App"), extended)
        assert [a.name for a in mixin.actions] == ["deploy", "configure", "start", "stop", "undeploy"]


class TestGenerateExtension:
    """Test generating the extension of the fixture corpus."""

    def test_extension(self, test_container, registry, base_extensions):
        """Test the generated extension links against the base extensions."""
        report = MappingReport()
        extension = test_container.type_mapper.generate_extension(registry, base_extensions, report)

        assert extension.name == "tosca"
        assert set(extension.imports) == {"core", "infrastructure", "modmacao", "sla"}
        terms = [m.term for m in extension.mixins]
        assert terms == sorted(terms)
        assert "tosca_nodes_Compute" in terms
        assert "CredentialRecordType" in extension.datatypes
        assert not report.has_blocking_errors
        assert any(w.message == "Abstract root datatype; no OCCI datatype emitted" for w in report.warnings)
        assert "tosca" not in base_extensions

    def test_rule_sources(self, type_mapper):
        """Test exact, inherited and default rule lookup."""
        assert type_mapper.rules.lookup("tosca.nodes.Compute", "tosca.nodes.Root")[0] == RuleSource.EXACT
        assert type_mapper.rules.lookup("my.Thing", "tosca.nodes.Root")[0] == RuleSource.INHERITED
        assert type_mapper.rules.lookup("tosca.nodes.Root", None) == (RuleSource.DEFAULT, [])

    def test_empty_registry(self, type_mapper):
        """Test an empty registry yields an empty extension."""
        extension = type_mapper.generate_extension(ToscaTypeRegistry({}))
        assert extension.mixins == ()
        assert extension.imports == ()

    def test_blocking_failure(self, type_mapper, parser, registry, base_extensions):
        """Test an unanchored node type fails generation."""
        extended = parser.resolve_registry(
            parser.parse_types("node_types:\n  my.Thing:\n    derived_from: tosca.nodes.Root\n"), registry
        )
        report = MappingReport()
        with pytest.raises(UnmappedTypeError):
            type_mapper.generate_extension(extended, base_extensions, report)
        assert report.has_blocking_errors
        assert [e.type_name for e in report.errors if e.blocking] == ["my.Thing"]

    def test_census(self, test_container, extensions, tosca_extension, fixtures_dir):
        """Test the census of the generated extension."""
        census = test_container.type_mapper.census(tosca_extension, extensions)
        golden = json.loads((fixtures_dir / "golden" / "census.json").read_text())

        assert census.to_dict() == golden
        assert census.total == len(tosca_extension.mixins)

    def test_application_kind_unused(self, extensions, tosca_extension):
        """Test no TOSCA mixin anchors on the application kind."""
        for mixin in tosca_extension.mixins:
            assert APPLICATION_KIND not in extensions.anchor_kinds(mixin.id)


class TestLinkedExtension:
    """Test the generated extension inside a fresh set."""

    def test_container_links_extension(self, tosca_extension, extensions):
        """Test the container links the generated extension into its set."""
        assert isinstance(extensions, ExtensionSet)
        assert extensions.get_extension("tosca") is tosca_extension
