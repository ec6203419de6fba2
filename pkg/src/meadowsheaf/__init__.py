"""Presheaves of rings on finite spaces and the common meadows they give rise to."""

__version__ = "0.1.0"
