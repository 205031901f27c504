"""Skeleta, Grassmannian equations and unipotent degenerations for modules over KΓ/I."""

__version__ = "0.1.0"
