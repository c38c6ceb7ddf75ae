"""Steiner triple systems under edge colourings: discrepancy boosting via
Pasch gadgets, exact triangle decomposition, and structure recovery."""

__version__ = "0.1.0"
