"""Balanced 3-valent graphs over the 2-adic integers, parity certificates
for their minimal-multiplicity vertices, and equal-area dissection checks
for balanced polygons."""

__version__ = "0.1.0"
