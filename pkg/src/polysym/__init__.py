"""Polynomial symmetry-breaking inequalities for integer programs."""
__version__ = "0.1.0"
