"""CLI services package."""
