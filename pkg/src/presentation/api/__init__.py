"""HTTP API of the mock runtime."""
