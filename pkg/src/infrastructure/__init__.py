"""Infrastructure layer - settings, serialization and the simulated runtime."""
