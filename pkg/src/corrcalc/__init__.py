"""Finite calculus of correspondences between small categories."""

__version__ = "0.1.0"
