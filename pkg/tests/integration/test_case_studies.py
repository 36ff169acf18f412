"""End to end pipelines over the WordPress, Node Cellar and multi-tier topologies."""

import json

import pytest

from src.application.services.orchestrator import Orchestrator
from src.application.services.pim2psm import PsmTransformer
from src.domain.models.orchestration import StepStatus, Verb
from src.domain.models.vocabulary import APPLICATION_KIND, COMPONENT_KIND, COMPUTE_KIND
from src.domain.services.validation import validate_configuration
from src.infrastructure.serialization.files import dump_configuration, load_configuration, load_profile


CASES = [
    # topology, PIM resources, PIM links, PSM resources, PSM links
    ("wordpress", 7, 11, 8, 13),
    ("nodecellar", 6, 8, 7, 10),
    ("multitier", 16, 25, 17, 31),
]


@pytest.fixture
def profile(fixtures_dir):
    return load_profile(fixtures_dir / "profiles" / "default.json")


@pytest.fixture
def orchestrator(extensions, test_settings) -> Orchestrator:
    return Orchestrator(
        extensions,
        poll_interval=test_settings.gate_poll_interval,
        gate_timeout=test_settings.gate_timeout,
    )


@pytest.mark.parametrize("name,pim_resources,pim_links,psm_resources,psm_links", CASES)
class TestCaseStudies:
    """Test topology to running system."""

    def test_pim(self, make_pim, extensions, name, pim_resources, pim_links, psm_resources, psm_links):
        """Test the generated configuration has the expected shape and validates."""
        pim = make_pim(name)

        assert (len(pim.resources), len(pim.links)) == (pim_resources, pim_links)
        assert len(pim.resources_of_kind(APPLICATION_KIND)) == 1
        report = validate_configuration(pim, extensions)
        assert report.is_valid, report.names()

    def test_psm(self, make_pim, extensions, profile, name, pim_resources, pim_links, psm_resources, psm_links):
        """Test the provider specific configuration validates and survives a file round trip."""
        psm = PsmTransformer().transform(make_pim(name), profile)

        assert (len(psm.resources), len(psm.links)) == (psm_resources, psm_links)
        assert validate_configuration(psm, extensions).is_valid
        text = dump_configuration(psm)
        assert dump_configuration(load_configuration(json.loads(text))) == text

    def test_deploy(
        self, make_pim, profile, orchestrator, runtime_client, mock_runtime,
        name, pim_resources, pim_links, psm_resources, psm_links,
    ):
        """Test reconciliation reaches a conformant runtime with every component active."""
        psm = PsmTransformer().transform(make_pim(name), profile)

        report = orchestrator.reconcile(psm, runtime_client)

        assert report.conformant is True
        assert len(report.with_status(StepStatus.SUCCEEDED)) == psm_resources + psm_links + 1
        for resource in psm.resources_of_kind(COMPUTE_KIND) + psm.resources_of_kind(COMPONENT_KIND):
            assert mock_runtime.get_state(resource.id) == "active"
        snapshot = mock_runtime.snapshot()
        assert len(snapshot.resources) == psm_resources
        assert len(snapshot.links) == psm_links

    def test_plan_order(
        self, make_pim, profile, orchestrator,
        name, pim_resources, pim_links, psm_resources, psm_links,
    ):
        """Test computes come before components and links after both endpoints."""
        psm = PsmTransformer().transform(make_pim(name), profile)
        plan = orchestrator.plan_for(psm, load_configuration({}))

        position = {step.entity_id: index for index, step in enumerate(plan) if step.verb == Verb.CREATE}
        for link in psm.links:
            assert position[link.id] > position[link.source]
            assert position[link.id] > position[link.target]
        last_compute = max(position[r.id] for r in psm.resources_of_kind(COMPUTE_KIND))
        first_component = min(position[r.id] for r in psm.resources_of_kind(COMPONENT_KIND))
        assert last_compute < first_component
        last_resource = max(position[r.id] for r in psm.resources)
        first_link = min(position[link.id] for link in psm.links)
        assert last_resource < first_link
        assert plan.steps[-1].verb == Verb.ACTION
