"""Matrix polynomials, block companion linearizations and Hoffman-Wielandt type checks."""

__version__ = "0.1.0"
