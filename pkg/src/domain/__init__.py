"""Domain layer - Business entities and logic."""
