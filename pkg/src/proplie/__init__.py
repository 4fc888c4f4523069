"""Uniform pro-p groups from powerful Lie lattices: group law, fixed-point data, module and bound calculators."""

__version__ = "0.1.0"
