"""Application layer - pipeline services and the dependency container."""
