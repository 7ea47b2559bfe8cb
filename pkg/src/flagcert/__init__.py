"""Positivity tests, dynamics and certification for projective representations."""

__version__ = "0.1.0"
