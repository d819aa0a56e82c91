"""Symbolic toolkit for graded additive-group actions on affine and projective schemes."""

__version__ = "0.1.0"
