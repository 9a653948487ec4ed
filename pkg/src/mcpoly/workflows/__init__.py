"""Command implementations and seeded instance generators."""
