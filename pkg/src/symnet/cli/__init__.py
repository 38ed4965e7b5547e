"""Command-line interface for SymNet."""
