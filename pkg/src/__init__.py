"""tosca2occi: TOSCA to OCCI toolchain."""
