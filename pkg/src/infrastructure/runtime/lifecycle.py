"""Lifecycle state machines of runtime entities."""

from typing import Dict, Optional

from transitions import Machine

from ...domain.models.occi import CategoryRef
from ...domain.models.runtime import LifecycleFsm, RuntimeEntity
from ...domain.models.vocabulary import (
    APPLICATION_KIND,
    COMPONENT_KIND,
    COMPUTE_KIND,
    NETWORK_KIND,
    STORAGE_KIND,
)


COMPUTE_FSM = LifecycleFsm(
    family="compute",
    states=("inactive", "active", "suspended", "error"),
    initial="inactive",
    transitions=(
        ("start", "inactive", "active"),
        ("start", "suspended", "active"),
        ("stop", "active", "inactive"),
        ("stop", "suspended", "inactive"),
        ("suspend", "active", "suspended"),
    ),
    activation="start",
)

STORAGE_FSM = LifecycleFsm(
    family="storage",
    states=("offline", "online", "error"),
    initial="offline",
    transitions=(
        ("online", "offline", "online"),
        ("offline", "online", "offline"),
    ),
    activation="online",
)

NETWORK_FSM = LifecycleFsm(
    family="network",
    states=("inactive", "active"),
    initial="inactive",
    transitions=(
        ("up", "inactive", "active"),
        ("down", "active", "inactive"),
    ),
    activation="up",
)

_PLATFORM_TRANSITIONS = (
    ("deploy", "undeployed", "deployed"),
    ("configure", "deployed", "deployed"),
    ("start", "deployed", "active"),
    ("stop", "active", "deployed"),
    ("undeploy", "deployed", "undeployed"),
)

COMPONENT_FSM = LifecycleFsm(
    family="component",
    states=("undeployed", "deployed", "active", "error"),
    initial="undeployed",
    transitions=_PLATFORM_TRANSITIONS,
)

APPLICATION_FSM = LifecycleFsm(
    family="application",
    states=("undeployed", "deployed", "active", "error"),
    initial="undeployed",
    transitions=_PLATFORM_TRANSITIONS,
)

FSM_BY_KIND: Dict[CategoryRef, LifecycleFsm] = {
    COMPUTE_KIND: COMPUTE_FSM,
    STORAGE_KIND: STORAGE_FSM,
    NETWORK_KIND: NETWORK_FSM,
    COMPONENT_KIND: COMPONENT_FSM,
    APPLICATION_KIND: APPLICATION_FSM,
}


def attach_lifecycle(record: RuntimeEntity, fsm: Optional[LifecycleFsm]) -> Optional[Machine]:
    """Drive a stored entity's `state` with a state machine.

    The machine adds one trigger method per transition name to the record.
    Unknown or inapplicable triggers raise instead of being ignored.
    """
    record.fsm = fsm
    if fsm is None:
        record.state = None
        return None
    return Machine(
        model=record,
        states=list(fsm.states),
        initial=fsm.initial,
        transitions=[
            {"trigger": trigger, "source": source, "dest": dest}
            for trigger, source, dest in fsm.transitions
        ],
        auto_transitions=False,
        ignore_invalid_triggers=False,
    )
