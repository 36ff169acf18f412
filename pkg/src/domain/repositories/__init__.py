"""Abstract ports."""
