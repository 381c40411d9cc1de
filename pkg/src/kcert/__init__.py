"""Exact verifier for a delta-invariant certificate on Fano threefolds of family 3.5."""

__version__ = "0.1.0"
