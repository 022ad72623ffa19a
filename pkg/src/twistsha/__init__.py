"""Quadratic twists of elliptic curves over Q: local data, the MKT index,
Tunnell coefficients and conditional Sha predictions, in exact arithmetic."""

__version__ = "0.1.0"
