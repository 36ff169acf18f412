"""One service per pipeline stage."""
