"""Octic scrolls from quadrics through the bicanonical genus-3 curve, and nets of quadrics."""
__version__ = "0.1.0"
