"""Configuration management for SymNet."""
