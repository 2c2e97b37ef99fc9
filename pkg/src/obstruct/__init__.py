"""Exact obstruction calculus for realizing algebra morphisms up to homotopy."""

__version__ = "0.1.0"
