"""Harmonic twistor tools for self-dual SU(2) fields on R^4 and the
fourth-order transgression of the Chern character density."""

__version__ = "0.1.0"
