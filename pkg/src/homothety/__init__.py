"""Homotheties of spherically symmetric space-times with a G3 isometry group."""

__version__ = "0.1.0"
