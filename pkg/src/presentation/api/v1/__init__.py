"""Runtime routes and schemas."""
