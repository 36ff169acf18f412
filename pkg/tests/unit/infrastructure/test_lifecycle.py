"""Tests for runtime lifecycle state machines."""

import pytest
from transitions import MachineError

from src.domain.models.configuration import Resource
from src.domain.models.runtime import LifecycleFsm, RuntimeEntity
from src.domain.models.vocabulary import APPLICATION_KIND, COMPONENT_KIND, COMPUTE_KIND, NETWORK_KIND, STORAGE_KIND
from src.infrastructure.runtime.lifecycle import (
    APPLICATION_FSM,
    COMPONENT_FSM,
    COMPUTE_FSM,
    FSM_BY_KIND,
    NETWORK_FSM,
    STORAGE_FSM,
    attach_lifecycle,
)


def record(kind: str = COMPUTE_KIND) -> RuntimeEntity:
    return RuntimeEntity(entity=Resource(id="e", kind=kind), provider_id="mock-000001")


class TestLifecycleFsm:
    """Test lifecycle definitions."""

    def test_families(self):
        """Test every lifecycle kind has its machine."""
        assert FSM_BY_KIND == {
            COMPUTE_KIND: COMPUTE_FSM,
            STORAGE_KIND: STORAGE_FSM,
            NETWORK_KIND: NETWORK_FSM,
            COMPONENT_KIND: COMPONENT_FSM,
            APPLICATION_KIND: APPLICATION_FSM,
        }

    def test_activation_only_for_infrastructure(self):
        """Test infrastructure auto-activates and platform entities do not."""
        assert COMPUTE_FSM.activation == "start"
        assert STORAGE_FSM.activation == "online"
        assert NETWORK_FSM.activation == "up"
        assert COMPONENT_FSM.activation is None
        assert APPLICATION_FSM.activation is None

    def test_next_state(self):
        """Test transition lookup."""
        assert COMPUTE_FSM.next_state("inactive", "start") == "active"
        assert COMPUTE_FSM.next_state("suspended", "start") == "active"
        assert COMPUTE_FSM.next_state("inactive", "suspend") is None
        assert COMPONENT_FSM.next_state("deployed", "configure") == "deployed"

    def test_triggers_in_order(self):
        """Test trigger names keep first declaration order."""
        assert COMPONENT_FSM.triggers == ("deploy", "configure", "start", "stop", "undeploy")

    def test_invalid_initial(self):
        """Test the initial state must be declared."""
        with pytest.raises(ValueError):
            LifecycleFsm("x", ("a",), "b", ())

    def test_undeclared_transition_state(self):
        """Test transitions may only use declared states."""
        with pytest.raises(ValueError):
            LifecycleFsm("x", ("a",), "a", (("go", "a", "b"),))


class TestAttachLifecycle:
    """Test driving records with state machines."""

    def test_initial_state(self):
        """Test the record starts in the initial state."""
        compute = record()
        attach_lifecycle(compute, COMPUTE_FSM)
        assert compute.state == "inactive"
        assert compute.fsm is COMPUTE_FSM

    def test_trigger_methods(self):
        """Test transitions become trigger methods on the record."""
        compute = record()
        attach_lifecycle(compute, COMPUTE_FSM)

        compute.start()
        compute.suspend()
        assert compute.state == "suspended"
        compute.stop()
        assert compute.state == "inactive"

    def test_platform_lifecycle(self):
        """Test the deploy, configure, start sequence of a component."""
        component = record(COMPONENT_KIND)
        attach_lifecycle(component, COMPONENT_FSM)

        component.deploy()
        component.configure()
        component.start()
        assert component.state == "active"

    def test_invalid_trigger_raises(self):
        """Test inapplicable triggers are not silently ignored."""
        compute = record()
        attach_lifecycle(compute, COMPUTE_FSM)

        with pytest.raises(MachineError):
            compute.suspend()
        assert compute.state == "inactive"

    def test_no_lifecycle(self):
        """Test entities without a machine have no state."""
        plain = record("http://example.org/x#thing")
        assert attach_lifecycle(plain, None) is None
        assert plain.state is None
        assert plain.fsm is None
