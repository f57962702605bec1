"""Workbench for finite-dimensional pre-Poisson algebras over exact fields."""

__version__ = "0.1.0"
