"""OCCI, TOSCA, mapping, orchestration and runtime models."""
