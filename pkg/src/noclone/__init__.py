"""Mechanized verification of the no-twins-and-a-bit argument for spin-1 particles."""

__version__ = "0.1.0"
