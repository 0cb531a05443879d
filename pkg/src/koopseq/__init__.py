"""Koopman semigroups on sequence spaces via the Poisson transform."""

__version__ = "0.1.0"
