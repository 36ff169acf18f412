"""tosca2occi command-line package."""

__version__ = "1.0.0"
