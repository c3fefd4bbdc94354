"""Exact value distributions of S(a, b) = sum chi(ax + bx^d) and derived objects."""

from .gf import FieldCtx, FieldParams, build_field

__all__ = ["FieldCtx", "FieldParams", "build_field"]
__version__ = "0.1.0"
