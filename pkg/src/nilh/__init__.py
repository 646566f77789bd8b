"""Harmonic analysis toolkit for the Gelfand pairs (SO(3) x N_{3,2}, SO(3)) and (K' x N', K')."""

__version__ = "0.1.0"
