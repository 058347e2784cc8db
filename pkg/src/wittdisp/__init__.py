"""Frames, windows and displays over finite Artin rings, with Witt vector arithmetic."""

__version__ = "0.1.0"
