"""Spherical matchstick graphs: constructions, verifier and discharging audit."""

__version__ = "0.1.0"
