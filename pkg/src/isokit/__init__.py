"""Constructive isometries of quadratic forms over Q and Z_p."""

__version__ = "0.1.0"
