"""Toeplitz and Wiener-Hopf determinants with symbols vanishing on an arc."""
__version__ = "0.1.0"
