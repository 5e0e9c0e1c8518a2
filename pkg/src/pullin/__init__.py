"""Simulation and verification of hinged-plate MEMS pull-in."""

__version__ = "0.1.dev0"
