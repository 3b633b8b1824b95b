"""Exact deformation calculator for pairs of differential graded Lie algebra maps."""

__version__ = "0.1.0"
