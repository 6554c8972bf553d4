"""Blockage-aware spatial-spectral interference statistics for finite-area
directional-beam networks, with an independent Monte-Carlo geometric oracle."""

__version__ = "0.1.0"
