"""Exact computations for equivariant configuration spaces and Bredon homological stability."""

__version__ = "0.1.0"
