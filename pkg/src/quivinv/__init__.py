"""Exact invariant theory of quiver representations."""
