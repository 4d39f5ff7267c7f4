"""Exact G2 / Calabi-Yau mirror computations on Joyce's T^7 / Γ."""

__version__ = "0.1.0"
