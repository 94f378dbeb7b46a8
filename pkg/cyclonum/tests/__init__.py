"""Test package for cyclonum."""
